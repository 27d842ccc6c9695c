#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "coalchain/model.hpp"

namespace coalchain {

enum class EventKind : std::uint8_t { Arrival = 0, Departure = 1 };

/// Static channel layout: travel hours from the end of the entry area to each
/// terminal. A vessel bound for terminal T passes every terminal with a
/// shorter travel time.
struct ChannelGeometry {
  std::array<Hours, 3> travel{};  // indexed by Terminal
  Hours entry = 0.25;
  Hours headway = 0.25;
  int max_transits = 4;

  static ChannelGeometry for_instance(const Instance& inst);
  friend bool operator==(const ChannelGeometry&, const ChannelGeometry&) = default;
  Hours travel_to(Terminal t) const { return travel[index(t)]; }
  /// Hours from passing `via` to reaching `dest` (0 when via == dest).
  Hours offset(Terminal dest, Terminal via) const { return travel_to(dest) - travel_to(via); }
  bool passes(Terminal dest, Terminal via) const;
  /// Minimum gap between a departure and a later arrival on `t`'s timeline.
  Hours clearance(Terminal t) const { return 2.0 * (travel_to(t) + entry); }
};

struct ChannelEvent {
  Hours time = 0;
  EventKind kind = EventKind::Arrival;
  int vessel = 0;
  bool projected = false;
  friend bool operator==(const ChannelEvent&, const ChannelEvent&) = default;
};

struct Transit {
  Hours start = 0;
  Hours end = 0;
  int vessel = 0;
  friend bool operator==(const Transit&, const Transit&) = default;
};

/// One real arrival or departure at a destination terminal.
struct ChannelMove {
  int vessel = 0;
  Terminal destination = Terminal::KCT;
  EventKind kind = EventKind::Arrival;
  Hours time = 0;
  bool cape = false;
};

/// Per-terminal event timelines (real plus projected passing events) and the
/// set of channel transit intervals.
///
/// Rules on every terminal timeline: arrivals at least `headway` apart,
/// departures at least `headway` apart, and an arrival after a departure at
/// least `clearance(terminal)` later. At most `max_transits` transits overlap.
/// Cape departures must fall inside a tidal window.
class ChannelTimeline {
 public:
  ChannelTimeline() = default;
  explicit ChannelTimeline(ChannelGeometry geometry) : geometry_(geometry) {}

  bool arrival_feasible(Terminal dest, Hours t) const;
  bool departure_feasible(Terminal dest, Hours t, bool cape, const TideTable& tides) const;

  /// Smallest feasible t >= from, found by inspecting conflict boundaries in
  /// increasing order. nullopt when nothing up to `horizon` works.
  std::optional<Hours> next_feasible_arrival(Terminal dest, Hours from, Hours horizon) const;
  std::optional<Hours> next_feasible_departure(Terminal dest, Hours from, bool cape,
                                               const TideTable& tides, Hours horizon) const;
  /// Largest feasible arrival in [not_before, upto].
  std::optional<Hours> latest_feasible_arrival(Terminal dest, Hours upto, Hours not_before) const;

  /// Records both movements of a vessel. Throws std::logic_error when either
  /// is infeasible against the current timeline.
  void commit(int vessel, Terminal dest, Hours arrival, Hours departure, bool cape,
              const TideTable& tides);
  void release(int vessel);

  const std::vector<ChannelEvent>& events(Terminal t) const { return events_[index(t)]; }
  const std::vector<Transit>& transits() const { return transits_; }
  const ChannelGeometry& geometry() const { return geometry_; }

  friend bool operator==(const ChannelTimeline&, const ChannelTimeline&) = default;

 private:
  bool transit_fits(Hours start, Hours end) const;
  void insert_event(Terminal t, ChannelEvent e);

  ChannelGeometry geometry_{};
  std::array<std::vector<ChannelEvent>, 3> events_;
  std::vector<Transit> transits_;  // sorted by start
};

/// Brute-force check of a complete set of movements: expands projections,
/// then tests every pair of events on every terminal timeline, the transit
/// overlap count, and cape tidal windows. Returns one message per conflict.
std::vector<std::string> replay_channel(const std::vector<ChannelMove>& moves,
                                        const ChannelGeometry& geometry, const TideTable& tides);

}  // namespace coalchain
