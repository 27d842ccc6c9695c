#pragma once

#include <array>
#include <optional>
#include <vector>

#include "coalchain/channel.hpp"
#include "coalchain/errors.hpp"
#include "coalchain/geometry.hpp"
#include "coalchain/rail.hpp"

namespace coalchain {

struct BerthBooking {
  Hours arrival = 0;
  Hours departure = 0;
  int vessel = 0;
};

/// Berth intervals [arrival, departure) of one terminal.
class BerthOccupancy {
 public:
  explicit BerthOccupancy(int berths = 1) : berths_(berths) {}

  void add(const BerthBooking& b);
  /// First instant in [from, to) at which every berth is taken, if any.
  std::optional<Hours> first_full(Hours from, Hours to) const;
  /// End of the earliest booking that is active at `t`.
  Hours earliest_release(Hours t) const;
  /// Sorted disjoint intervals during which every berth is taken.
  std::vector<std::pair<Hours, Hours>> saturated() const;

  int berths() const { return berths_; }
  const std::vector<BerthBooking>& bookings() const { return bookings_; }

 private:
  int berths_;
  std::vector<BerthBooking> bookings_;  // sorted by arrival
};

/// Intervals covered by at least `limit` of the given [start, end) intervals,
/// sorted and merged.
std::vector<std::pair<Hours, Hours>> saturated_intervals(
    std::vector<std::pair<Hours, Hours>> intervals, int limit);
std::vector<std::pair<Hours, Hours>> merge_intervals(std::vector<std::pair<Hours, Hours>> a);

/// Everything a partial schedule has committed so far.
struct EvaluationState {
  explicit EvaluationState(const Instance& inst);

  const Instance* inst;
  CapacityLedger ledger;
  ResourceMap resources;
  ChannelTimeline channel;
  std::array<PadGapSet, 4> pads;
  std::array<ReclaimerSchedule, 4> reclaimers;
  std::array<BerthOccupancy, 3> berths;
  Solution solution;
  Hours horizon = 0;  // searches give up past this time

  /// Intervals at which no further KCT reclaim job can run: three ship
  /// loaders busy, or every berth taken.
  std::vector<std::pair<Hours, Hours>> kct_blocked() const;
};

struct GreedyOptions {
  std::size_t placements_kept = 256;  // regret list length per stockpile
  int regret_steps = 64;              // per release floor, before the floor moves
  Hours floor_step = 1.0;             // release floor increment
};

/// Raised when a vessel cannot be scheduled before the search horizon.
class ScheduleError : public HorizonError {
 public:
  ScheduleError(const std::string& what, Solution partial)
      : HorizonError(what), partial_(std::move(partial)) {}
  const Solution& partial() const { return partial_; }

 private:
  Solution partial_;
};

struct LoadingPeriod {
  Hours arrival = 0;
  Hours departure = 0;
  Hours load_start = 0;
  Hours load_end = 0;
};

/// CCT/NCT loading search starting at `from`: the first berth-free interval
/// with feasible channel movements and outbound room for back-to-back
/// reclaiming. Nothing is committed.
std::optional<LoadingPeriod> get_loading_period(const EvaluationState& st, int vessel, Hours from);

/// Rails every stockpile, then books berth, channel and outbound capacity.
void schedule_vessel(EvaluationState& st, int vessel);

/// Places every stockpile on a pad with a reclaimer, backtracking within the
/// vessel when a later stockpile or the vessel itself cannot be scheduled.
void schedule_vessel_kct(EvaluationState& st, int vessel, const GreedyOptions& opt = {});

/// Schedules vessels one at a time in `order`. Deterministic.
Solution slars(const Instance& inst, const std::vector<int>& order, const GreedyOptions& opt = {});

/// Average delay over the vessels counted in reports (ETA >= warm-up end).
double reported_delay(const Solution& sol, const Instance& inst);

}  // namespace coalchain
