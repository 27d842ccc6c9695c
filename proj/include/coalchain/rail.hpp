#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coalchain/model.hpp"

namespace coalchain {

/// Per-day residual tonnage for a set of capacity-limited resources.
///
/// Every reservation is journaled. `rollback(mark)` restores the stored
/// previous values in reverse order, so undoing a suffix of reservations is
/// bit-exact.
class CapacityLedger {
 public:
  using Resource = int;

  Resource add_resource(std::string name, Tonnes daily_capacity);

  Tonnes capacity(Resource r) const { return capacity_[r]; }
  Tonnes used(Resource r, int day) const;
  /// capacity - used, clamped at zero.
  Tonnes residual(Resource r, int day) const;

  void reserve(Resource r, int day, Tonnes tonnes);

  std::size_t mark() const { return journal_.size(); }
  void rollback(std::size_t mark);
  /// Drops undo history (commitments before this point become permanent).
  void forget_history() { journal_.clear(); }

  std::size_t resource_count() const { return capacity_.size(); }
  const std::string& name(Resource r) const { return names_[r]; }

 private:
  struct Entry {
    Resource resource;
    int day;
    Tonnes previous;
  };
  std::vector<std::string> names_;
  std::vector<Tonnes> capacity_;
  std::vector<std::vector<Tonnes>> used_;
  std::vector<Entry> journal_;
};

/// Ledger resources for one instance: rail arcs, per-terminal inbound and
/// outbound throughput, and the three KCT stacker streams.
struct ResourceMap {
  std::vector<CapacityLedger::Resource> arcs;
  std::array<CapacityLedger::Resource, 3> inbound{};
  std::array<CapacityLedger::Resource, 3> outbound{};
  std::array<CapacityLedger::Resource, 3> streams{};

  static ResourceMap install(const Instance& inst, CapacityLedger& ledger);
};

/// Smallest residual over the arcs of `route` on `day`.
Tonnes residual_path_capacity(const Route& route, int day, const CapacityLedger& ledger,
                              const ResourceMap& map);

struct RailingPlan {
  std::vector<CoalArrival> arrivals;
  struct Reservation {
    CapacityLedger::Resource resource;
    int day;
    Tonnes tonnes;
  };
  std::vector<Reservation> reservations;

  bool empty() const { return arrivals.empty(); }
  Hours build_start() const;
  Hours build_last() const;
  Hours effective_build_end() const;
};

struct RailingRequest {
  int stockpile = 0;
  Terminal terminal = Terminal::KCT;
  std::optional<StackerStream> stream;  // KCT only
  int start_day = 0;
  int last_day = 0;  // railing never schedules arrivals after this day
};

/// Greedy railing from `start_day`: for every component in order, each day
/// takes min(path residual, inbound residual, stream residual, tonnes left),
/// counting the uncommitted reservations of earlier components. Returns
/// nullopt when the stockpile cannot be completed within its maximum build
/// span measured from its first arrival, or before `last_day`.
std::optional<RailingPlan> plan_railing(const Instance& inst, const RailingRequest& req,
                                        const CapacityLedger& ledger, const ResourceMap& map);

/// Like plan_railing, but on a span failure retries from the day after the
/// failed attempt's first arrival until `last_day`.
std::optional<RailingPlan> plan_railing_shifting(const Instance& inst, RailingRequest req,
                                                 const CapacityLedger& ledger,
                                                 const ResourceMap& map);

void commit_railing(const RailingPlan& plan, CapacityLedger& ledger);

/// First day railing may use for a vessel with the given ETA: ten days ahead
/// of ETA, never before day 0, and never before `not_before` (pad gap start).
int railing_start_day(Hours eta, Hours not_before = 0);

/// Reclaiming at `rate` over [start, start + duration) charges each day in
/// proportion to its overlap. Returns nullopt when every day has room,
/// otherwise the earliest start that could clear the first overloaded day.
std::optional<Hours> outbound_jump(const CapacityLedger& ledger, CapacityLedger::Resource r,
                                   Hours start, Hours duration, double rate);
/// Smallest start >= from that passes outbound_jump.
Hours earliest_outbound_start(const CapacityLedger& ledger, CapacityLedger::Resource r,
                              Hours from, Hours duration, double rate);
void reserve_outbound(CapacityLedger& ledger, CapacityLedger::Resource r, Hours start,
                      Hours duration, double rate);

}  // namespace coalchain
