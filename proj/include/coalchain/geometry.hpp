#pragma once

#include <array>
#include <initializer_list>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "coalchain/rail.hpp"

namespace coalchain {

inline constexpr Hours kForever = std::numeric_limits<Hours>::infinity();
inline constexpr Metres kHeightTol = 1e-6;

/// Free rectangle [t1, t2) x [y1, y2) in the time x position plane of a pad.
struct PadGap {
  Pad pad = Pad::A;
  Hours t1 = 0;
  Hours t2 = kForever;
  Metres y1 = 0;
  Metres y2 = 0;

  bool contains(const PadGap& o) const;
  friend bool operator==(const PadGap&, const PadGap&) = default;
};

/// Maximal free rectangles of one pad. Starts as a single gap covering the
/// whole pad and is split as occupied rectangles are added.
class PadGapSet {
 public:
  PadGapSet() = default;
  PadGapSet(Pad pad, Metres length, Hours horizon = kForever);

  /// Removes [t1, t2) x [y1, y2) from the free space. The rectangle must be
  /// free; every gap it cuts is replaced by its non-empty left, right, lower
  /// and upper remainders, and remainders contained in another gap are dropped.
  void occupy(Hours t1, Hours t2, Metres y1, Metres y2);
  bool is_free(Hours t1, Hours t2, Metres y1, Metres y2) const;

  const std::vector<PadGap>& gaps() const { return gaps_; }
  Pad pad() const { return pad_; }
  Metres length() const { return length_; }

 private:
  Pad pad_ = Pad::A;
  Metres length_ = 0;
  std::vector<PadGap> gaps_;
};

/// Gaps able to hold a stockpile of `length` metres whose build may start no
/// earlier than `earliest_build` and which needs at least `min_span` hours of
/// pad time.
std::vector<PadGap> get_pad_gaps(const PadGapSet& pads, Metres length, Hours earliest_build,
                                 Hours min_span);

struct ReclaimJob {
  Hours start = 0;
  Hours end = 0;
  Metres position = 0;
  int stockpile = -1;
  friend bool operator==(const ReclaimJob&, const ReclaimJob&) = default;
};

/// Time-ordered reclaim jobs of one reclaimer. An artificial job ends at t=0
/// at the home position, and another starts at infinity.
class ReclaimerSchedule {
 public:
  ReclaimerSchedule() = default;
  ReclaimerSchedule(Reclaimer id, Metres home) : id_(id), home_(home) {}

  void add(const ReclaimJob& job);
  void remove_stockpile(int stockpile);

  Reclaimer id() const { return id_; }
  Metres home() const { return home_; }
  const std::vector<ReclaimJob>& jobs() const { return jobs_; }

 private:
  Reclaimer id_ = Reclaimer::R459;
  Metres home_ = 0;
  std::vector<ReclaimJob> jobs_;
};

/// Reachable parallelogram between two consecutive jobs of a reclaimer.
struct ReclaimerGap {
  Reclaimer reclaimer = Reclaimer::R459;
  Hours prev_end = 0;
  Metres prev_position = 0;
  Hours next_start = kForever;
  Metres next_position = 0;

  bool unbounded() const { return next_start == kForever; }
  friend bool operator==(const ReclaimerGap&, const ReclaimerGap&) = default;
};

/// Gaps wide enough for a job of `duration` hours at speed `speed`, that end
/// after `from` and start before `until`.
std::vector<ReclaimerGap> get_reclaimer_gaps(const ReclaimerSchedule& r, Hours duration,
                                             double speed, Hours from = 0,
                                             Hours until = kForever);

/// Everything besides the two gaps that limits when a reclaim job may run.
struct ReclaimContext {
  double speed = 1800;    // m/h
  Hours duration = 0;     // reclaim duration of the stockpile
  double rate = 5800;     // t/h, for outbound throughput
  bool low_side = true;   // the candidate reclaimer works below its partner
  Metres length = 0;      // stockpile length
  Hours not_before = 0;   // stack end, ETA, previous stockpile completion, ...
  Hours not_after = kForever;  // latest admissible start
  const std::vector<ReclaimJob>* partner_jobs = nullptr;
  /// Sorted disjoint intervals during which no job may run (ship loaders or
  /// berths all busy).
  const std::vector<std::pair<Hours, Hours>>* blocked = nullptr;
  const CapacityLedger* ledger = nullptr;  // outbound throughput, optional
  CapacityLedger::Resource outbound = 0;
};

/// Earliest start at a fixed centre position, or nullopt.
std::optional<Hours> earliest_reclaim_time(const ReclaimContext& ctx, const PadGap& pad,
                                           const ReclaimerGap& gap, Metres height);

/// Earliest start over all admissible positions, with the range of positions
/// [low, high] at which it is attained (the leftmost edge of the feasible set).
struct LeftmostEdge {
  Hours start = 0;
  Metres low = 0;
  Metres high = 0;
};
std::optional<LeftmostEdge> earliest_reclaim_edge(const ReclaimContext& ctx, const PadGap& pad,
                                                  const ReclaimerGap& gap);

/// Candidate positions: both extremes of the leftmost edge plus any anchor or
/// partner job position lying on it.
std::vector<Metres> get_critical_heights(const ReclaimContext& ctx, const PadGap& pad,
                                         const ReclaimerGap& gap);
std::vector<Metres> critical_heights(const LeftmostEdge& edge, const ReclaimerGap& gap,
                                     const std::vector<ReclaimJob>* partner_jobs);

struct TimePos {
  double t = 0;
  double y = 0;
};
/// Convex polygon with inline storage; each half-plane clip adds at most one
/// vertex, so the small fixed capacity is ample for the regions used here.
class Polygon {
 public:
  static constexpr std::size_t kCapacity = 16;

  Polygon() = default;
  Polygon(std::initializer_list<TimePos> pts);

  void push_back(const TimePos& p);
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const TimePos& operator[](std::size_t i) const { return pts_[i]; }
  const TimePos* begin() const { return pts_.data(); }
  const TimePos* end() const { return pts_.data() + size_; }

 private:
  std::array<TimePos, kCapacity> pts_{};
  std::size_t size_ = 0;
};

/// Keeps the part of a convex polygon with a*t + b*y <= c.
Polygon clip_half_plane(const Polygon& poly, double a, double b, double c);
double polygon_area(const Polygon& poly);

struct FlexibilityLoss {
  double before = 0;   // own gap area lost ahead of the job
  double after = 0;    // own gap area lost after the job
  double partner = 0;  // partner's reachable area blocked by the job
  double total() const { return before + after + partner; }
};

/// Area (m*h) of reachable space lost by running a job at `height` over
/// [start, start + duration) inside `gap`. `partner_gaps` are the partner
/// reclaimer's gaps; `track` is the track length.
FlexibilityLoss flexibility_loss(const ReclaimerGap& gap, Hours start, Hours duration,
                                 Metres height, double speed, Metres track, bool low_side,
                                 const std::vector<ReclaimerGap>& partner_gaps);

/// Ordering key of a candidate placement.
struct PlacementKey {
  Hours completion = 0;
  double loss = 0;
  Pad pad = Pad::A;
  Metres position = 0;
  Reclaimer reclaimer = Reclaimer::R459;
  Hours build_start = 0;
};

/// Whole hour of completion, then loss, then exact completion, then ids.
bool placement_less(const PlacementKey& a, const PlacementKey& b);

/// All gaps of a schedule, without any width filter.
std::vector<ReclaimerGap> all_reclaimer_gaps(const ReclaimerSchedule& r);

}  // namespace coalchain
