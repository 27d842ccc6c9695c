#include "coalchain/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "coalchain/errors.hpp"

namespace coalchain {

std::string_view to_string(Terminal t) {
  switch (t) {
    case Terminal::CCT: return "CCT";
    case Terminal::KCT: return "KCT";
    case Terminal::NCT: return "NCT";
  }
  return "?";
}

std::string_view to_string(Pad p) {
  static constexpr std::array<std::string_view, 4> names{"A", "B", "C", "D"};
  return names[index(p)];
}

std::string_view to_string(Reclaimer r) {
  static constexpr std::array<std::string_view, 4> names{"R459", "R460", "R411", "R412"};
  return names[index(r)];
}

Terminal parse_terminal(std::string_view s) {
  for (Terminal t : kTerminals) {
    if (to_string(t) == s) return t;
  }
  throw InputError("unknown terminal '" + std::string(s) + "'");
}

Pad parse_pad(std::string_view s) {
  for (Pad p : kPads) {
    if (to_string(p) == s) return p;
  }
  throw InputError("unknown pad '" + std::string(s) + "'");
}

Reclaimer parse_reclaimer(std::string_view s) {
  for (Reclaimer r : kReclaimers) {
    if (to_string(r) == s) return r;
  }
  throw InputError("unknown reclaimer '" + std::string(s) + "'");
}

int day_of(Hours t) { return static_cast<int>(std::floor(t / kHoursPerDay)); }

TerminalConfig TerminalConfig::defaults(Terminal t) {
  switch (t) {
    case Terminal::CCT: return {2, 96000, 94000, 2200, 35};
    case Terminal::KCT: return {4, 500000, 390000, 5800, 55};
    case Terminal::NCT: return {3, 228000, 214000, 5800, 85};
  }
  return {};
}

StackerStream stream_of(Pad p) {
  switch (p) {
    case Pad::A: return StackerStream::One;
    case Pad::B:
    case Pad::C: return StackerStream::Two;
    case Pad::D: return StackerStream::Three;
  }
  return StackerStream::One;
}

std::array<Reclaimer, 2> reclaimers_of(Pad p) {
  if (p == Pad::A || p == Pad::B) return {Reclaimer::R459, Reclaimer::R460};
  return {Reclaimer::R411, Reclaimer::R412};
}

std::array<Pad, 2> pads_of(Reclaimer r) {
  if (r == Reclaimer::R459 || r == Reclaimer::R460) return {Pad::A, Pad::B};
  return {Pad::C, Pad::D};
}

bool serves(Reclaimer r, Pad p) {
  auto rs = reclaimers_of(p);
  return rs[0] == r || rs[1] == r;
}

Reclaimer partner_of(Reclaimer r) {
  switch (r) {
    case Reclaimer::R459: return Reclaimer::R460;
    case Reclaimer::R460: return Reclaimer::R459;
    case Reclaimer::R411: return Reclaimer::R412;
    case Reclaimer::R412: return Reclaimer::R411;
  }
  return r;
}

bool is_low_side(Reclaimer r) { return r == Reclaimer::R459 || r == Reclaimer::R411; }

Metres KctConfig::track_length(Reclaimer r) const {
  auto pads = pads_of(r);
  return std::max(pad_length[index(pads[0])], pad_length[index(pads[1])]);
}

Metres KctConfig::home_position(Reclaimer r) const {
  return is_low_side(r) ? 0.0 : track_length(r);
}

Tonnes Stockpile::tonnes() const {
  Tonnes sum = 0;
  for (const auto& c : components) sum += c.tonnes;
  return sum;
}

TideTable::TideTable(std::vector<Hours> high_tides) : high_tides_(std::move(high_tides)) {
  for (std::size_t i = 1; i < high_tides_.size(); ++i) {
    // Windows are 2 h long, so consecutive tides closer than that would overlap.
    if (!(high_tides_[i] - high_tides_[i - 1] >= 2.0)) {
      throw InputError("high tides must be strictly increasing and at least 2 h apart");
    }
  }
}

TidalWindow TideTable::window_for(Hours t) const {
  // First window whose end lies after t.
  auto it = std::upper_bound(high_tides_.begin(), high_tides_.end(), t,
                             [](Hours value, Hours h) { return value < h + 0.5 - kTimeTol; });
  if (it == high_tides_.end()) {
    throw HorizonError("tide table exhausted at t=" + std::to_string(t));
  }
  return window_of(*it);
}

bool TideTable::in_window(Hours t) const {
  auto it = std::upper_bound(high_tides_.begin(), high_tides_.end(), t,
                             [](Hours value, Hours h) { return value < h + 0.5 - kTimeTol; });
  return it != high_tides_.end() && window_of(*it).contains(t);
}

TideTable TideTable::semi_diurnal(Hours first_high_tide, Hours until) {
  constexpr Hours kPeriod = 12.42;
  std::vector<Hours> tides;
  for (int k = 0;; ++k) {
    Hours h = first_high_tide + kPeriod * k;
    if (h > until) break;
    tides.push_back(h);
  }
  return TideTable(std::move(tides));
}

Tonnes Instance::vessel_tonnes(int vessel) const {
  Tonnes sum = 0;
  for (int s : vessels[vessel].stockpiles) sum += stockpiles[s].tonnes();
  return sum;
}

int Instance::add_vessel(Terminal terminal, Hours eta,
                         const std::vector<std::vector<Component>>& cargo, int max_build_days) {
  Vessel v;
  v.id = static_cast<int>(vessels.size());
  v.terminal = terminal;
  v.eta = eta;
  for (const auto& comps : cargo) {
    Stockpile s;
    s.id = static_cast<int>(stockpiles.size());
    s.vessel = v.id;
    s.max_build_days = max_build_days;
    s.components = comps;
    v.stockpiles.push_back(s.id);
    stockpiles.push_back(std::move(s));
  }
  vessels.push_back(std::move(v));
  return vessels.back().id;
}

std::vector<int> Instance::eta_order() const {
  std::vector<int> order(vessels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return vessels[a].eta < vessels[b].eta; });
  return order;
}

Hours StockpileSchedule::build_start() const {
  Hours t = arrivals.empty() ? reclaim_start : arrivals.front().time;
  for (const auto& a : arrivals) t = std::min(t, a.time);
  return t;
}

Hours StockpileSchedule::build_last() const {
  Hours t = arrivals.empty() ? reclaim_start : arrivals.front().time;
  for (const auto& a : arrivals) t = std::max(t, a.time);
  return t;
}

Hours StockpileSchedule::effective_build_end() const {
  if (arrivals.empty()) return reclaim_start;
  return coalchain::effective_build_end(build_start(), build_last());
}

Hours effective_build_end(Hours first_arrival, Hours last_arrival) {
  return std::max(last_arrival + kHoursPerDay, first_arrival + kMinBuildHours);
}

Solution Solution::empty_for(const Instance& inst) {
  Solution s;
  s.vessels.resize(inst.vessels.size());
  s.stockpiles.resize(inst.stockpiles.size());
  return s;
}

bool Solution::complete() const {
  return std::all_of(vessels.begin(), vessels.end(), [](const auto& v) { return v.has_value(); }) &&
         std::all_of(stockpiles.begin(), stockpiles.end(),
                     [](const auto& s) { return s.has_value(); });
}

namespace {

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  }
  void real(double d) { bytes(std::bit_cast<std::uint64_t>(d)); }
};

}  // namespace

std::uint64_t Solution::hash() const {
  Fnv1a f;
  for (const auto& v : vessels) {
    f.bytes(v.has_value());
    if (v) {
      f.real(v->arrival);
      f.real(v->departure);
    }
  }
  for (const auto& s : stockpiles) {
    f.bytes(s.has_value());
    if (!s) continue;
    for (const auto& a : s->arrivals) {
      f.bytes(static_cast<std::uint64_t>(a.component));
      f.real(a.tonnes);
      f.real(a.time);
    }
    f.real(s->reclaim_start);
    f.real(s->reclaim_end);
    if (s->kct) {
      f.bytes(index(s->kct->pad));
      f.real(s->kct->position);
      f.bytes(index(s->kct->reclaimer));
    }
  }
  return f.h;
}

Metres stockpile_length(Tonnes t) {
  if (t < 0) throw InputError("stockpile_length: negative tonnage");
  return 5.0 * std::floor((0.0017 * t + 39.714) / 5.0 + 0.5);
}

Hours earliest_departure(Hours eta, Tonnes tonnes, const TerminalConfig& cfg,
                         const TideTable& tides) {
  if (!(tonnes > 0)) throw InputError("earliest_departure: vessel tonnage must be positive");
  Hours load_end = eta + tonnes / cfg.reclaim_rate;
  if (tonnes >= kCapeThreshold) {
    return std::max(load_end, tides.window_for(load_end).start);
  }
  return load_end;
}

Hours earliest_departure(const Instance& inst, int vessel) {
  const Vessel& v = inst.vessels[vessel];
  return earliest_departure(v.eta, inst.vessel_tonnes(vessel), inst.config(v.terminal), inst.tides);
}

double average_delay(const Solution& sol, const Instance& inst) {
  if (inst.vessels.empty()) return 0.0;
  double total = 0;
  for (const auto& v : inst.vessels) {
    const auto& vs = sol.vessels.at(v.id);
    if (!vs) throw IncompleteSolutionError("vessel " + std::to_string(v.id) + " is not scheduled");
    total += vs->departure - earliest_departure(inst, v.id);
  }
  return total / static_cast<double>(inst.vessels.size());
}

double average_delay_since(const Solution& sol, const Instance& inst, Hours from) {
  double total = 0;
  std::size_t n = 0;
  for (const auto& v : inst.vessels) {
    if (v.eta < from) continue;
    const auto& vs = sol.vessels.at(v.id);
    if (!vs) throw IncompleteSolutionError("vessel " + std::to_string(v.id) + " is not scheduled");
    total += vs->departure - earliest_departure(inst, v.id);
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

}  // namespace coalchain
