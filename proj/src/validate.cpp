#include "coalchain/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <tuple>

#include "coalchain/channel.hpp"
#include "coalchain/geometry.hpp"

namespace coalchain {

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::RailCapacity: return "rail-capacity";
    case ViolationKind::InboundCapacity: return "inbound-capacity";
    case ViolationKind::StackerCapacity: return "stacker-capacity";
    case ViolationKind::OutboundCapacity: return "outbound-capacity";
    case ViolationKind::Berths: return "berths";
    case ViolationKind::ShipLoaders: return "ship-loaders";
    case ViolationKind::PadOverlap: return "pad-overlap";
    case ViolationKind::PadBounds: return "pad-bounds";
    case ViolationKind::ReclaimerTravel: return "reclaimer-travel";
    case ViolationKind::ReclaimerPassing: return "reclaimer-passing";
    case ViolationKind::ReclaimBeforeBuilt: return "reclaim-before-built";
    case ViolationKind::ReclaimOrder: return "reclaim-order";
    case ViolationKind::LoadingPause: return "loading-pause";
    case ViolationKind::ReclaimDuration: return "reclaim-duration";
    case ViolationKind::Channel: return "channel";
    case ViolationKind::TidalWindow: return "tidal-window";
    case ViolationKind::BuildWindow: return "build-window";
    case ViolationKind::Tonnage: return "tonnage";
    case ViolationKind::VesselTiming: return "vessel-timing";
  }
  return "?";
}

std::size_t ValidationReport::count(ViolationKind k) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
}

namespace {

constexpr Hours kDurationTol = 1e-6;  // recomputed durations differ by rounding only

struct Interval {
  Hours start;
  Hours end;
  int owner;
};

// Per-day load of one capacity, with the number of contributions so that the
// tolerance scales with accumulated rounding.
struct DayLoad {
  Tonnes tonnes = 0;
  int parts = 0;
};

class Checker {
 public:
  Checker(const Instance& inst, const Solution& sol) : inst_(inst), sol_(sol) {}

  ValidationReport run() {
    structure();
    if (!report_.structural.empty()) return std::move(report_);
    for (const Vessel& v : inst_.vessels) {
      if (!sol_.vessels[v.id]) {
        report_.unscheduled_vessels.push_back(v.id);
      } else {
        scheduled_.push_back(v.id);
      }
    }
    for (int v : scheduled_) {
      vessel_rules(v);
      for (int s : inst_.vessels[v].stockpiles) stockpile_rules(s);
    }
    capacities();
    berths();
    loaders();
    pads();
    reclaimers();
    channel();
    return std::move(report_);
  }

 private:
  template <typename... Args>
  void add(ViolationKind k, const Args&... parts) {
    std::ostringstream os;
    os.precision(12);
    (os << ... << parts);
    report_.violations.push_back({k, os.str()});
  }

  const StockpileSchedule& sched(int s) const { return *sol_.stockpiles[s]; }
  double rate(int s) const {
    return inst_.config(inst_.vessels[inst_.stockpiles[s].vessel].terminal).reclaim_rate;
  }

  void structure() {
    auto& out = report_.structural;
    if (sol_.vessels.size() != inst_.vessels.size()) {
      out.push_back("solution has " + std::to_string(sol_.vessels.size()) + " vessel entries, instance has " +
                    std::to_string(inst_.vessels.size()));
    }
    if (sol_.stockpiles.size() != inst_.stockpiles.size()) {
      out.push_back("solution has " + std::to_string(sol_.stockpiles.size()) +
                    " stockpile entries, instance has " + std::to_string(inst_.stockpiles.size()));
    }
    if (!out.empty()) return;
    for (const Vessel& v : inst_.vessels) {
      if (!sol_.vessels[v.id]) continue;
      for (int s : v.stockpiles) {
        const auto& ss = sol_.stockpiles[s];
        const std::string name = "stockpile " + std::to_string(s);
        if (!ss) {
          out.push_back(name + " of scheduled vessel " + std::to_string(v.id) + " is unscheduled");
          continue;
        }
        for (const auto& a : ss->arrivals) {
          if (a.component < 0 ||
              a.component >= static_cast<int>(inst_.stockpiles[s].components.size())) {
            out.push_back(name + " has an arrival for unknown component " +
                          std::to_string(a.component));
          }
        }
        if (v.terminal == Terminal::KCT && !ss->kct) {
          out.push_back(name + " at KCT lacks a pad placement");
        }
        if (v.terminal != Terminal::KCT && ss->kct) {
          out.push_back(name + " is not at KCT but has a pad placement");
        }
        if (ss->kct && !serves(ss->kct->reclaimer, ss->kct->pad)) {
          out.push_back(name + ": reclaimer " + std::string(to_string(ss->kct->reclaimer)) +
                        " does not serve pad " + std::string(to_string(ss->kct->pad)));
        }
        if (ss->arrivals.empty() && inst_.stockpiles[s].tonnes() > kTonneTol) {
          out.push_back(name + " has no coal arrivals");
        }
      }
    }
  }

  void vessel_rules(int vid) {
    const Vessel& v = inst_.vessels[vid];
    const VesselSchedule& vs = *sol_.vessels[vid];
    const StockpileSchedule& first = sched(v.stockpiles.front());
    const StockpileSchedule& last = sched(v.stockpiles.back());
    if (vs.arrival < v.eta - kTimeTol) {
      add(ViolationKind::VesselTiming, "vessel ", vid, " arrives at ", vs.arrival, " before its ETA ",
          v.eta);
    }
    if (first.reclaim_start < vs.arrival - kTimeTol) {
      add(ViolationKind::VesselTiming, "vessel ", vid, " is loaded from ", first.reclaim_start,
          " before arriving at ", vs.arrival);
    }
    if (vs.departure < last.reclaim_end - kTimeTol) {
      add(ViolationKind::VesselTiming, "vessel ", vid, " departs at ", vs.departure,
          " before loading ends at ", last.reclaim_end);
    }
    for (std::size_t i = 1; i < v.stockpiles.size(); ++i) {
      const auto& a = sched(v.stockpiles[i - 1]);
      const auto& b = sched(v.stockpiles[i]);
      if (b.reclaim_start < a.reclaim_end - kTimeTol) {
        add(ViolationKind::ReclaimOrder, "stockpile ", v.stockpiles[i], " is reclaimed from ",
            b.reclaim_start, " before stockpile ", v.stockpiles[i - 1], " ends at ", a.reclaim_end);
      }
      if (v.terminal == Terminal::KCT && b.reclaim_start - a.reclaim_end > kMaxLoadingPause + kTimeTol) {
        add(ViolationKind::LoadingPause, "vessel ", vid, " waits ", b.reclaim_start - a.reclaim_end,
            " h between stockpiles ", v.stockpiles[i - 1], " and ", v.stockpiles[i]);
      }
    }
  }

  void stockpile_rules(int s) {
    const Stockpile& sp = inst_.stockpiles[s];
    const Vessel& v = inst_.vessels[sp.vessel];
    const StockpileSchedule& ss = sched(s);
    std::vector<Tonnes> delivered(sp.components.size(), 0.0);
    std::vector<int> parts(sp.components.size(), 0);
    for (const auto& a : ss.arrivals) {
      delivered[a.component] += a.tonnes;
      ++parts[a.component];
      if (a.tonnes <= 0) add(ViolationKind::Tonnage, "stockpile ", s, " has a non-positive arrival");
      if (std::abs(a.time - day_start(day_of(a.time + kTimeTol))) > kTimeTol) {
        add(ViolationKind::BuildWindow, "stockpile ", s, " has an arrival at ", a.time,
            " that is not a day start");
      }
      if (a.time < -kTimeTol) add(ViolationKind::BuildWindow, "stockpile ", s, " is railed before time 0");
    }
    for (std::size_t c = 0; c < sp.components.size(); ++c) {
      if (std::abs(delivered[c] - sp.components[c].tonnes) > kTonneTol * std::max(1, parts[c])) {
        add(ViolationKind::Tonnage, "stockpile ", s, " component ", c, " receives ", delivered[c],
            " t of ", sp.components[c].tonnes);
      }
    }
    if (ss.arrivals.empty()) return;
    const Hours first = ss.build_start();
    const Hours last = ss.build_last();
    if (first < v.eta - kMaxLeadHours - kTimeTol) {
      add(ViolationKind::BuildWindow, "stockpile ", s, " is built from ", first,
          ", more than ten days before ETA ", v.eta);
    }
    int span = day_of(last + kTimeTol) - day_of(first + kTimeTol) + 1;
    if (span > sp.max_build_days) {
      add(ViolationKind::BuildWindow, "stockpile ", s, " is built over ", span, " days, limit ",
          sp.max_build_days);
    }
    if (ss.reclaim_start < ss.effective_build_end() - kTimeTol) {
      add(ViolationKind::ReclaimBeforeBuilt, "stockpile ", s, " is reclaimed from ", ss.reclaim_start,
          " but only built by ", ss.effective_build_end());
    }
    Hours expected = sp.tonnes() / rate(s);
    if (std::abs((ss.reclaim_end - ss.reclaim_start) - expected) > kDurationTol) {
      add(ViolationKind::ReclaimDuration, "stockpile ", s, " is reclaimed in ",
          ss.reclaim_end - ss.reclaim_start, " h instead of ", expected);
    }
  }

  void capacities() {
    std::map<std::pair<int, int>, DayLoad> arcs, inbound, streams, outbound;
    for (int v : scheduled_) {
      const Vessel& vessel = inst_.vessels[v];
      for (int s : vessel.stockpiles) {
        const Stockpile& sp = inst_.stockpiles[s];
        const StockpileSchedule& ss = sched(s);
        for (const auto& a : ss.arrivals) {
          const int day = day_of(a.time + kTimeTol);
          const Route& route = inst_.rail.route(sp.components[a.component].load_point, vessel.terminal);
          for (int arc : route.arcs) {
            auto& l = arcs[{arc, day}];
            l.tonnes += a.tonnes;
            ++l.parts;
          }
          auto& in = inbound[{static_cast<int>(index(vessel.terminal)), day}];
          in.tonnes += a.tonnes;
          ++in.parts;
          if (ss.kct) {
            auto& st = streams[{static_cast<int>(index(stream_of(ss.kct->pad))), day}];
            st.tonnes += a.tonnes;
            ++st.parts;
          }
        }
        const double r = rate(s);
        for (int day = day_of(ss.reclaim_start); day_start(day) < ss.reclaim_end - kTimeTol; ++day) {
          Hours lo = std::max(ss.reclaim_start, day_start(day));
          Hours hi = std::min(ss.reclaim_end, day_start(day + 1));
          if (hi <= lo) continue;
          auto& o = outbound[{static_cast<int>(index(vessel.terminal)), day}];
          o.tonnes += r * (hi - lo);
          ++o.parts;
        }
      }
    }
    auto check = [&](const auto& loads, ViolationKind kind, auto capacity, auto name) {
      for (const auto& [key, load] : loads) {
        Tonnes cap = capacity(key.first);
        if (load.tonnes > cap + kTonneTol * std::max(1, load.parts)) {
          add(kind, name(key.first), " carries ", load.tonnes, " t on day ", key.second,
              ", capacity ", cap);
        }
      }
    };
    check(arcs, ViolationKind::RailCapacity,
          [&](int a) { return inst_.rail.arcs()[a].capacity; },
          [&](int a) { return "rail arc " + inst_.rail.arcs()[a].id; });
    check(inbound, ViolationKind::InboundCapacity,
          [&](int t) { return inst_.terminals[t].daily_inbound; },
          [&](int t) { return std::string(to_string(static_cast<Terminal>(t))) + " inbound"; });
    check(streams, ViolationKind::StackerCapacity,
          [&](int s) { return inst_.kct.stream_capacity[s]; },
          [&](int s) { return "stacker stream " + std::to_string(s + 1); });
    check(outbound, ViolationKind::OutboundCapacity,
          [&](int t) { return inst_.terminals[t].daily_outbound; },
          [&](int t) { return std::string(to_string(static_cast<Terminal>(t))) + " outbound"; });
  }

  // Reports every start instant at which more than `limit` intervals are open.
  void crowding(const std::vector<Interval>& iv, int limit, ViolationKind kind,
                const std::string& what) {
    for (const Interval& a : iv) {
      int n = 0;
      std::vector<int> owners;
      for (const Interval& b : iv) {
        if (b.start <= a.start + kTimeTol && b.end > a.start + kTimeTol) {
          ++n;
          owners.push_back(b.owner);
        }
      }
      if (n > limit) {
        std::ostringstream os;
        for (int o : owners) os << ' ' << o;
        add(kind, what, ": ", n, " in use at ", a.start, " (limit ", limit, "):", os.str());
      }
    }
  }

  void berths() {
    for (Terminal t : kTerminals) {
      std::vector<Interval> iv;
      for (int v : scheduled_) {
        if (inst_.vessels[v].terminal != t) continue;
        iv.push_back({sol_.vessels[v]->arrival, sol_.vessels[v]->departure, v});
      }
      crowding(iv, inst_.config(t).berths, ViolationKind::Berths,
               std::string(to_string(t)) + " berths (vessels)");
    }
  }

  std::vector<int> kct_stockpiles() const {
    std::vector<int> out;
    for (int v : scheduled_) {
      if (inst_.vessels[v].terminal != Terminal::KCT) continue;
      for (int s : inst_.vessels[v].stockpiles) out.push_back(s);
    }
    return out;
  }

  void loaders() {
    std::vector<Interval> iv;
    for (int s : kct_stockpiles()) iv.push_back({sched(s).reclaim_start, sched(s).reclaim_end, s});
    crowding(iv, inst_.kct.ship_loaders, ViolationKind::ShipLoaders, "KCT ship loaders (stockpiles)");
  }

  void pads() {
    struct Rect {
      int s;
      Hours t1, t2;
      Metres y1, y2;
    };
    std::array<std::vector<Rect>, 4> by_pad;
    for (int s : kct_stockpiles()) {
      const auto& ss = sched(s);
      if (ss.arrivals.empty()) continue;
      const Metres half = stockpile_length(inst_.stockpiles[s].tonnes()) / 2;
      const Pad p = ss.kct->pad;
      Rect r{s, ss.build_start(), ss.reclaim_end, ss.kct->position - half, ss.kct->position + half};
      if (r.y1 < -kHeightTol || r.y2 > inst_.kct.pad_length[index(p)] + kHeightTol) {
        add(ViolationKind::PadBounds, "stockpile ", s, " spans [", r.y1, ", ", r.y2, ") beyond pad ",
            to_string(p));
      }
      by_pad[index(p)].push_back(r);
    }
    for (Pad p : kPads) {
      const auto& rs = by_pad[index(p)];
      for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
          const Rect& a = rs[i];
          const Rect& b = rs[j];
          bool time = a.t1 < b.t2 - kTimeTol && b.t1 < a.t2 - kTimeTol;
          bool space = a.y1 < b.y2 - kHeightTol && b.y1 < a.y2 - kHeightTol;
          if (time && space) {
            add(ViolationKind::PadOverlap, "stockpiles ", a.s, " and ", b.s, " overlap on pad ",
                to_string(p));
          }
        }
      }
    }
  }

  void reclaimers() {
    const double v = inst_.kct.machine_speed;
    std::array<std::vector<ReclaimJob>, 4> jobs;
    for (int s : kct_stockpiles()) {
      const auto& ss = sched(s);
      jobs[index(ss.kct->reclaimer)].push_back({ss.reclaim_start, ss.reclaim_end, ss.kct->position, s});
    }
    for (Reclaimer r : kReclaimers) {
      auto& js = jobs[index(r)];
      std::sort(js.begin(), js.end(), [](const ReclaimJob& a, const ReclaimJob& b) {
        return std::tie(a.start, a.stockpile) < std::tie(b.start, b.stockpile);
      });
      Hours t = 0;
      Metres y = inst_.kct.home_position(r);
      int prev = -1;
      for (const ReclaimJob& j : js) {
        Hours gap = j.start - t;
        if (gap < -kTimeTol || std::abs(j.position - y) > v * std::max(0.0, gap) + kHeightTol) {
          add(ViolationKind::ReclaimerTravel, to_string(r), " cannot reach stockpile ", j.stockpile,
              " at ", j.position, " by ", j.start,
              prev < 0 ? std::string(" from home") : " after stockpile " + std::to_string(prev));
        }
        t = j.end;
        y = j.position;
        prev = j.stockpile;
      }
    }
    for (Reclaimer low : {Reclaimer::R459, Reclaimer::R411}) {
      for (const ReclaimJob& a : jobs[index(low)]) {
        for (const ReclaimJob& b : jobs[index(partner_of(low))]) {
          Metres overlap = a.position - b.position;
          if (overlap <= kHeightTol) continue;
          Hours gap = std::max(b.start - a.end, a.start - b.end);
          if (gap * v < overlap - kHeightTol) {
            add(ViolationKind::ReclaimerPassing, to_string(low), " on stockpile ", a.stockpile,
                " and ", to_string(partner_of(low)), " on stockpile ", b.stockpile,
                " would have to pass each other");
          }
        }
      }
    }
  }

  void channel() {
    std::vector<ChannelMove> moves;
    for (int v : scheduled_) {
      const auto& vs = *sol_.vessels[v];
      const Terminal t = inst_.vessels[v].terminal;
      const bool cape = inst_.is_cape(v);
      moves.push_back({v, t, EventKind::Arrival, vs.arrival, cape});
      moves.push_back({v, t, EventKind::Departure, vs.departure, cape});
    }
    for (auto& msg : replay_channel(moves, ChannelGeometry::for_instance(inst_), inst_.tides)) {
      bool tide = msg.rfind("cape vessel", 0) == 0;
      report_.violations.push_back(
          {tide ? ViolationKind::TidalWindow : ViolationKind::Channel, std::move(msg)});
    }
  }

  const Instance& inst_;
  const Solution& sol_;
  std::vector<int> scheduled_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Instance& inst, const Solution& sol) {
  return Checker(inst, sol).run();
}

}  // namespace coalchain
