#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coalchain/rail_graph.hpp"
#include "coalchain/units.hpp"

namespace coalchain {

struct TerminalConfig {
  int berths = 1;
  Tonnes daily_inbound = 0;   // DIT, t/day
  Tonnes daily_outbound = 0;  // DOT, t/day
  double reclaim_rate = 0;    // L, t/h
  double channel_minutes = 0;  // travel time from the end of the entry area

  Hours channel_hours() const { return channel_minutes / 60.0; }

  static TerminalConfig defaults(Terminal t);
  friend bool operator==(const TerminalConfig&, const TerminalConfig&) = default;
};

/// Stockyard layout of the Kooragang terminal.
///
/// Pads A and B share one reclaimer track (R459 low end, R460 high end), pads C
/// and D the other (R411 low, R412 high). Stream 1 stacks pad A, stream 2 pads
/// B and C, stream 3 pad D.
struct KctConfig {
  std::array<Metres, 4> pad_length{2142, 1905, 2174, 2156};
  int ship_loaders = 3;
  double machine_speed = 1800;          // m/h
  Tonnes machine_rate_per_day = 139200;  // t/day
  std::array<Tonnes, 3> stream_capacity{144000, 288000, 144000};  // t/day

  double reclaim_rate() const { return machine_rate_per_day / kHoursPerDay; }
  Metres track_length(Reclaimer r) const;
  Metres home_position(Reclaimer r) const;

  friend bool operator==(const KctConfig&, const KctConfig&) = default;
};

StackerStream stream_of(Pad p);
std::array<Reclaimer, 2> reclaimers_of(Pad p);
std::array<Pad, 2> pads_of(Reclaimer r);
bool serves(Reclaimer r, Pad p);
/// The reclaimer sharing `r`'s track.
Reclaimer partner_of(Reclaimer r);
/// True for the reclaimer parked at position 0 of its track.
bool is_low_side(Reclaimer r);

struct Component {
  std::string load_point;
  Tonnes tonnes = 0;
  friend bool operator==(const Component&, const Component&) = default;
};

struct Stockpile {
  int id = 0;
  int vessel = 0;
  int max_build_days = 7;
  std::vector<Component> components;

  Tonnes tonnes() const;
  friend bool operator==(const Stockpile&, const Stockpile&) = default;
};

struct Vessel {
  int id = 0;
  Terminal terminal = Terminal::KCT;
  Hours eta = 0;
  std::vector<int> stockpiles;  // reclaim order

  friend bool operator==(const Vessel&, const Vessel&) = default;
};

inline constexpr Tonnes kCapeThreshold = 100000;

/// Tidal windows [h - 1.5, h + 0.5) around each high tide h.
struct TidalWindow {
  Hours start = 0;
  Hours end = 0;
  bool contains(Hours t) const { return t >= start - kTimeTol && t < end - kTimeTol; }
};

class TideTable {
 public:
  TideTable() = default;
  explicit TideTable(std::vector<Hours> high_tides);

  /// Window containing `t`, else the first window starting after `t`.
  /// Throws HorizonError when the table is exhausted.
  TidalWindow window_for(Hours t) const;
  bool in_window(Hours t) const;
  const std::vector<Hours>& high_tides() const { return high_tides_; }

  static TidalWindow window_of(Hours high_tide) { return {high_tide - 1.5, high_tide + 0.5}; }
  /// Semi-diurnal table with a 12.42 h period covering [0, until].
  static TideTable semi_diurnal(Hours first_high_tide, Hours until);

  friend bool operator==(const TideTable&, const TideTable&) = default;

 private:
  std::vector<Hours> high_tides_;
};

struct Instance {
  std::vector<Vessel> vessels;
  std::vector<Stockpile> stockpiles;
  TideTable tides;
  RailGraph rail;
  std::array<TerminalConfig, 3> terminals{TerminalConfig::defaults(Terminal::CCT),
                                         TerminalConfig::defaults(Terminal::KCT),
                                         TerminalConfig::defaults(Terminal::NCT)};
  KctConfig kct;
  /// Vessels with ETA before this are warm-up traffic, excluded from reports.
  Hours warmup_end = 0;
  std::uint64_t seed = 0;
  std::string config_hash;

  const TerminalConfig& config(Terminal t) const { return terminals[index(t)]; }
  Tonnes vessel_tonnes(int vessel) const;
  bool is_cape(int vessel) const { return vessel_tonnes(vessel) >= kCapeThreshold; }

  /// Appends a vessel whose stockpiles are given as component lists.
  int add_vessel(Terminal terminal, Hours eta, const std::vector<std::vector<Component>>& cargo,
                 int max_build_days = 7);

  /// Vessel ids sorted by (ETA, id).
  std::vector<int> eta_order() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct CoalArrival {
  int component = 0;  // index within the stockpile's component list
  Tonnes tonnes = 0;
  Hours time = 0;  // start of the arrival day
  friend bool operator==(const CoalArrival&, const CoalArrival&) = default;
};

struct KctPlacement {
  Pad pad = Pad::A;
  Metres position = 0;  // centre of the stockpile
  Reclaimer reclaimer = Reclaimer::R459;
  friend bool operator==(const KctPlacement&, const KctPlacement&) = default;
};

struct StockpileSchedule {
  std::vector<CoalArrival> arrivals;
  Hours reclaim_start = 0;
  Hours reclaim_end = 0;
  std::optional<KctPlacement> kct;

  Hours build_start() const;
  Hours build_last() const;
  /// max(end of the last arrival day, build start + 72 h).
  Hours effective_build_end() const;

  friend bool operator==(const StockpileSchedule&, const StockpileSchedule&) = default;
};

struct VesselSchedule {
  Hours arrival = 0;
  Hours departure = 0;
  friend bool operator==(const VesselSchedule&, const VesselSchedule&) = default;
};

struct Solution {
  std::vector<std::optional<VesselSchedule>> vessels;
  std::vector<std::optional<StockpileSchedule>> stockpiles;
  double objective = 0;
  std::uint64_t seed = 0;

  static Solution empty_for(const Instance& inst);
  bool complete() const;
  /// FNV-1a over the bit patterns of every scheduled value.
  std::uint64_t hash() const;

  friend bool operator==(const Solution&, const Solution&) = default;
};

inline constexpr Hours kMinBuildHours = 72;
inline constexpr Hours kMaxLeadHours = 240;
inline constexpr Hours kMaxLoadingPause = 5;

Hours effective_build_end(Hours first_arrival, Hours last_arrival);

/// Stockpile length in metres for a tonnage, rounded to the nearest 5 m.
Metres stockpile_length(Tonnes t);

/// Ideal departure: berth at ETA, load at rate L without interruption and
/// (for capes) leave at the start of the next tidal window.
Hours earliest_departure(const Instance& inst, int vessel);
Hours earliest_departure(Hours eta, Tonnes tonnes, const TerminalConfig& cfg,
                         const TideTable& tides);

/// Mean of d_v - earliest_departure(v) over every vessel.
double average_delay(const Solution& sol, const Instance& inst);
/// Same mean restricted to vessels with ETA >= `from`; 0 when none qualify.
double average_delay_since(const Solution& sol, const Instance& inst, Hours from);

}  // namespace coalchain
