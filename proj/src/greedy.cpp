#include "coalchain/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

namespace coalchain {

namespace {
// Searches beyond the last ETA plus this many hours are treated as hopeless.
constexpr Hours kHorizonSlack = 24.0 * 365;
}  // namespace

void BerthOccupancy::add(const BerthBooking& b) {
  auto pos = std::upper_bound(bookings_.begin(), bookings_.end(), b,
                              [](const BerthBooking& x, const BerthBooking& y) {
                                return x.arrival < y.arrival;
                              });
  bookings_.insert(pos, b);
}

std::optional<Hours> BerthOccupancy::first_full(Hours from, Hours to) const {
  std::vector<const BerthBooking*> overlap;
  for (const auto& b : bookings_) {
    if (b.arrival >= to - kTimeTol) break;
    if (b.departure > from + kTimeTol) overlap.push_back(&b);
  }
  if (static_cast<int>(overlap.size()) < berths_) return std::nullopt;
  std::vector<Hours> probes{from};
  for (const auto* b : overlap) {
    if (b->arrival > from) probes.push_back(b->arrival);
  }
  std::sort(probes.begin(), probes.end());
  for (Hours t : probes) {
    int n = 0;
    for (const auto* b : overlap) {
      if (b->arrival <= t + kTimeTol && b->departure > t + kTimeTol) ++n;
    }
    if (n >= berths_) return t;
  }
  return std::nullopt;
}

Hours BerthOccupancy::earliest_release(Hours t) const {
  Hours best = kForever;
  for (const auto& b : bookings_) {
    if (b.arrival > t + kTimeTol) break;
    if (b.departure > t + kTimeTol) best = std::min(best, b.departure);
  }
  return best;
}

std::vector<std::pair<Hours, Hours>> BerthOccupancy::saturated() const {
  std::vector<std::pair<Hours, Hours>> iv;
  iv.reserve(bookings_.size());
  for (const auto& b : bookings_) iv.emplace_back(b.arrival, b.departure);
  return saturated_intervals(std::move(iv), berths_);
}

std::vector<std::pair<Hours, Hours>> saturated_intervals(
    std::vector<std::pair<Hours, Hours>> intervals, int limit) {
  // Ends sort before starts at the same instant: intervals are half-open.
  std::vector<std::pair<Hours, int>> events;
  for (const auto& [a, b] : intervals) {
    if (b <= a) continue;
    events.emplace_back(a, +1);
    events.emplace_back(b, -1);
  }
  std::sort(events.begin(), events.end());
  std::vector<std::pair<Hours, Hours>> out;
  int count = 0;
  Hours open = 0;
  for (const auto& [t, delta] : events) {
    int before = count;
    count += delta;
    if (before < limit && count >= limit) open = t;
    if (before >= limit && count < limit && t > open) out.emplace_back(open, t);
  }
  return merge_intervals(std::move(out));
}

std::vector<std::pair<Hours, Hours>> merge_intervals(std::vector<std::pair<Hours, Hours>> a) {
  std::sort(a.begin(), a.end());
  std::vector<std::pair<Hours, Hours>> out;
  for (const auto& iv : a) {
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

EvaluationState::EvaluationState(const Instance& instance)
    : inst(&instance),
      resources(ResourceMap::install(instance, ledger)),
      channel(ChannelGeometry::for_instance(instance)),
      berths{BerthOccupancy(instance.config(Terminal::CCT).berths),
             BerthOccupancy(instance.config(Terminal::KCT).berths),
             BerthOccupancy(instance.config(Terminal::NCT).berths)},
      solution(Solution::empty_for(instance)) {
  for (Pad p : kPads) pads[index(p)] = PadGapSet(p, instance.kct.pad_length[index(p)]);
  for (Reclaimer r : kReclaimers) {
    reclaimers[index(r)] = ReclaimerSchedule(r, instance.kct.home_position(r));
  }
  Hours last_eta = 0;
  for (const auto& v : instance.vessels) last_eta = std::max(last_eta, v.eta);
  horizon = last_eta + kHorizonSlack;
}

std::vector<std::pair<Hours, Hours>> EvaluationState::kct_blocked() const {
  std::vector<std::pair<Hours, Hours>> jobs;
  for (const auto& r : reclaimers) {
    for (const auto& j : r.jobs()) jobs.emplace_back(j.start, j.end);
  }
  auto loaders = saturated_intervals(std::move(jobs), inst->kct.ship_loaders);
  auto full = berths[index(Terminal::KCT)].saturated();
  loaders.insert(loaders.end(), full.begin(), full.end());
  return merge_intervals(std::move(loaders));
}

namespace {

// Reclaim intervals of a vessel's stockpiles placed back to back from `start`.
std::vector<std::pair<Hours, Hours>> back_to_back(const Instance& inst, const Vessel& v,
                                                  Hours start) {
  const double rate = inst.config(v.terminal).reclaim_rate;
  std::vector<std::pair<Hours, Hours>> out;
  Hours t = start;
  for (int s : v.stockpiles) {
    Hours end = t + inst.stockpiles[s].tonnes() / rate;
    out.emplace_back(t, end);
    t = end;
  }
  return out;
}

int last_rail_day(const EvaluationState& st) { return day_of(st.horizon); }

}  // namespace

std::optional<LoadingPeriod> get_loading_period(const EvaluationState& st, int vessel,
                                                Hours from) {
  const Instance& inst = *st.inst;
  const Vessel& v = inst.vessels.at(vessel);
  const Terminal T = v.terminal;
  const TerminalConfig& cfg = inst.config(T);
  const bool cape = inst.is_cape(vessel);
  const auto outbound = st.resources.outbound[index(T)];
  const BerthOccupancy& berths = st.berths[index(T)];

  Hours floor = from;
  while (floor <= st.horizon) {
    auto a = st.channel.next_feasible_arrival(T, floor, st.horizon);
    if (!a) return std::nullopt;
    const Hours load = back_to_back(inst, v, *a).back().second - *a;
    Hours l = earliest_outbound_start(st.ledger, outbound, *a, load, cfg.reclaim_rate);
    if (l > *a + kTimeTol) {
      floor = l;  // no point berthing before loading can start
      continue;
    }
    Hours load_end = back_to_back(inst, v, *a).back().second;
    auto d = st.channel.next_feasible_departure(T, load_end, cape, inst.tides, st.horizon);
    if (!d) return std::nullopt;
    if (auto full = berths.first_full(*a, *d)) {
      floor = std::max(berths.earliest_release(*full), std::nextafter(floor, kForever));
      continue;
    }
    return LoadingPeriod{*a, *d, *a, load_end};
  }
  return std::nullopt;
}

void schedule_vessel(EvaluationState& st, int vessel) {
  const Instance& inst = *st.inst;
  const Vessel& v = inst.vessels.at(vessel);
  const Terminal T = v.terminal;
  Hours ready = v.eta;
  for (int s : v.stockpiles) {
    RailingRequest req{s, T, std::nullopt, railing_start_day(v.eta), last_rail_day(st)};
    auto plan = plan_railing_shifting(inst, req, st.ledger, st.resources);
    if (!plan) {
      throw ScheduleError("no railing for stockpile " + std::to_string(s), st.solution);
    }
    commit_railing(*plan, st.ledger);
    StockpileSchedule sched;
    sched.arrivals = plan->arrivals;
    st.solution.stockpiles[s] = std::move(sched);
    if (!plan->empty()) ready = std::max(ready, plan->effective_build_end());
  }

  const double rate = inst.config(T).reclaim_rate;
  const bool cape = inst.is_cape(vessel);
  Hours from = ready;
  for (;;) {
    auto period = get_loading_period(st, vessel, from);
    if (!period) {
      throw ScheduleError("no loading period for vessel " + std::to_string(vessel), st.solution);
    }
    try {
      st.channel.commit(vessel, T, period->arrival, period->departure, cape, inst.tides);
    } catch (const std::logic_error&) {
      // The vessel's own two movements clash; try a little later.
      from = period->arrival + 1.0 / 60;
      continue;
    }
    reserve_outbound(st.ledger, st.resources.outbound[index(T)], period->load_start,
                     period->load_end - period->load_start, rate);
    st.berths[index(T)].add({period->arrival, period->departure, vessel});
    auto jobs = back_to_back(inst, v, period->load_start);
    for (std::size_t i = 0; i < v.stockpiles.size(); ++i) {
      auto& sched = *st.solution.stockpiles[v.stockpiles[i]];
      sched.reclaim_start = jobs[i].first;
      sched.reclaim_end = jobs[i].second;
    }
    st.solution.vessels[vessel] = VesselSchedule{period->arrival, period->departure};
    return;
  }
}

namespace {

struct Candidate {
  PlacementKey key;
  Hours start = 0;
  Hours end = 0;
  std::shared_ptr<const RailingPlan> plan;
  ReclaimerGap gap;
};

struct Level {
  std::vector<Candidate> candidates;
  std::size_t next = 0;
  // Undo record of the committed candidate.
  bool committed = false;
  std::size_t ledger_mark = 0;
  PadGapSet pad_before;
};

class KctScheduler {
 public:
  KctScheduler(EvaluationState& st, int vessel, const GreedyOptions& opt)
      : st_(st), inst_(*st.inst), v_(inst_.vessels.at(vessel)), vessel_(vessel), opt_(opt) {}

  void run() {
    Hours floor = v_.eta;
    Hours step = opt_.floor_step;
    const std::size_t n = v_.stockpiles.size();
    for (;;) {
      if (floor > st_.horizon) {
        throw ScheduleError("no KCT placement for vessel " + std::to_string(vessel_),
                            st_.solution);
      }
      std::vector<Level> levels;
      int regrets = 0;
      bool done = false;
      std::optional<Hours> first_start;
      while (regrets <= opt_.regret_steps) {
        const std::size_t i = levels.size() - (levels.empty() || levels.back().committed ? 0 : 1);
        if (i == levels.size()) {
          levels.push_back({});
          levels.back().candidates = enumerate(i, levels, floor);
          if (i == 0 && !levels[0].candidates.empty()) {
            first_start = levels[0].candidates.front().start;
          }
        }
        Level& level = levels[i];
        if (level.next >= level.candidates.size()) {
          levels.pop_back();
          if (levels.empty()) break;
          undo(levels.size() - 1, levels.back());
          ++levels.back().next;
          ++regrets;
          continue;
        }
        commit(i, level);
        if (i + 1 == n) {
          if (finish(levels)) {
            done = true;
            break;
          }
          undo(i, level);
          ++level.next;
          ++regrets;
        }
      }
      if (done) return;
      for (std::size_t i = levels.size(); i-- > 0;) {
        if (levels[i].committed) undo(i, levels[i]);
      }
      floor = std::max(floor, first_start.value_or(floor)) + step;
      step *= 2;
    }
  }

 private:
  int stockpile(std::size_t i) const { return v_.stockpiles[i]; }

  std::vector<Candidate> enumerate(std::size_t i, const std::vector<Level>& levels, Hours floor) {
    const int s = stockpile(i);
    const Tonnes w = inst_.stockpiles[s].tonnes();
    const Metres len = stockpile_length(w);
    const double rate = inst_.config(Terminal::KCT).reclaim_rate;
    const Hours dur = w / rate;
    const double speed = inst_.kct.machine_speed;

    Hours not_before = floor;
    Hours latest_start = kForever;
    if (i > 0) {
      const Level& prev = levels[i - 1];
      const Candidate& pc = prev.candidates[prev.next];
      not_before = pc.end;
      latest_start = pc.end + kMaxLoadingPause;
    }
    const auto blocked = st_.kct_blocked();
    const int first_day = railing_start_day(v_.eta);

    std::map<std::pair<int, int>, std::shared_ptr<const RailingPlan>> rail_cache;
    auto railing = [&](StackerStream stream, int start_day) {
      auto key = std::make_pair(static_cast<int>(index(stream)), start_day);
      auto it = rail_cache.find(key);
      if (it != rail_cache.end()) return it->second;
      RailingRequest req{s, Terminal::KCT, stream, start_day, last_rail_day(st_)};
      auto plan = plan_railing_shifting(inst_, req, st_.ledger, st_.resources);
      std::shared_ptr<const RailingPlan> p;
      if (plan && !plan->empty()) p = std::make_shared<const RailingPlan>(std::move(*plan));
      rail_cache.emplace(key, p);
      return p;
    };

    std::array<std::vector<ReclaimerGap>, 4> partner_gaps;
    for (Reclaimer r : kReclaimers) {
      partner_gaps[index(r)] = all_reclaimer_gaps(st_.reclaimers[index(partner_of(r))]);
    }

    std::vector<Candidate> out;
    for (Pad pad : kPads) {
      if (len > inst_.kct.pad_length[index(pad)] + kHeightTol) continue;
      for (const PadGap& g : get_pad_gaps(st_.pads[index(pad)], len, day_start(first_day),
                                          kMinBuildHours + dur)) {
        if (g.t2 < not_before + dur - kTimeTol) continue;
        auto plan = railing(stream_of(pad), railing_start_day(v_.eta, g.t1));
        if (!plan) continue;
        const Hours built = plan->effective_build_end();
        if (built + dur > g.t2 + kTimeTol) continue;
        for (Reclaimer r : reclaimers_of(pad)) {
          const Reclaimer partner = partner_of(r);
          const auto& partner_jobs = st_.reclaimers[index(partner)].jobs();
          const Metres track = inst_.kct.track_length(r);
          const Hours sweep = track / speed;
          ReclaimContext ctx;
          ctx.speed = speed;
          ctx.duration = dur;
          ctx.rate = rate;
          ctx.low_side = is_low_side(r);
          ctx.length = len;
          ctx.not_before = std::max(not_before, built);
          ctx.not_after = std::min(g.t2 - dur, latest_start);
          ctx.partner_jobs = &partner_jobs;
          ctx.blocked = &blocked;
          ctx.ledger = &st_.ledger;
          ctx.outbound = st_.resources.outbound[index(Terminal::KCT)];
          if (ctx.not_before > ctx.not_after + kTimeTol) continue;
          for (const ReclaimerGap& rg : get_reclaimer_gaps(st_.reclaimers[index(r)], dur, speed,
                                                           ctx.not_before,
                                                           ctx.not_after + dur)) {
            auto edge = earliest_reclaim_edge(ctx, g, rg);
            if (!edge) continue;
            // Partner positions only matter while the partner is within reach.
            std::vector<ReclaimJob> nearby;
            for (const ReclaimJob& o : partner_jobs) {
              if (o.end >= edge->start - sweep && o.start <= edge->start + dur + sweep) {
                nearby.push_back(o);
              }
            }
            for (Metres h : critical_heights(*edge, rg, &nearby)) {
              Candidate c;
              c.key = {edge->start + dur, 0.0, pad, h, r, plan->build_start()};
              c.start = edge->start;
              c.end = edge->start + dur;
              c.plan = plan;
              c.gap = rg;
              out.push_back(std::move(c));
            }
          }
        }
      }
    }
    // Loss only breaks ties within a whole hour of completion, so it is needed
    // just for the hours that reach into the kept prefix.
    auto hour = [](const Candidate& c) { return std::floor(c.key.completion); };
    if (out.size() > opt_.placements_kept) {
      std::nth_element(out.begin(), out.begin() + (opt_.placements_kept - 1), out.end(),
                       [&](const Candidate& a, const Candidate& b) { return hour(a) < hour(b); });
      const double cutoff = hour(out[opt_.placements_kept - 1]);
      std::erase_if(out, [&](const Candidate& c) { return hour(c) > cutoff; });
    }
    for (Candidate& c : out) {
      const Reclaimer r = c.key.reclaimer;
      c.key.loss = flexibility_loss(c.gap, c.start, dur, c.key.position, speed,
                                    inst_.kct.track_length(r), is_low_side(r),
                                    partner_gaps[index(r)])
                       .total();
    }
    std::sort(out.begin(), out.end(),
              [](const Candidate& a, const Candidate& b) { return placement_less(a.key, b.key); });
    if (out.size() > opt_.placements_kept) out.resize(opt_.placements_kept);
    return out;
  }

  void commit(std::size_t i, Level& level) {
    const Candidate& c = level.candidates[level.next];
    const int s = stockpile(i);
    const Metres half = stockpile_length(inst_.stockpiles[s].tonnes()) / 2;
    const double rate = inst_.config(Terminal::KCT).reclaim_rate;
    level.ledger_mark = st_.ledger.mark();
    commit_railing(*c.plan, st_.ledger);
    reserve_outbound(st_.ledger, st_.resources.outbound[index(Terminal::KCT)], c.start,
                     c.end - c.start, rate);
    PadGapSet& pads = st_.pads[index(c.key.pad)];
    level.pad_before = pads;
    pads.occupy(c.plan->build_start(), c.end, c.key.position - half, c.key.position + half);
    st_.reclaimers[index(c.key.reclaimer)].add({c.start, c.end, c.key.position, s});
    StockpileSchedule sched;
    sched.arrivals = c.plan->arrivals;
    sched.reclaim_start = c.start;
    sched.reclaim_end = c.end;
    sched.kct = KctPlacement{c.key.pad, c.key.position, c.key.reclaimer};
    st_.solution.stockpiles[s] = std::move(sched);
    level.committed = true;
  }

  void undo(std::size_t i, Level& level) {
    const Candidate& c = level.candidates[level.next];
    st_.ledger.rollback(level.ledger_mark);
    st_.pads[index(c.key.pad)] = std::move(level.pad_before);
    st_.reclaimers[index(c.key.reclaimer)].remove_stockpile(stockpile(i));
    st_.solution.stockpiles[stockpile(i)].reset();
    level.committed = false;
  }

  // Berths the vessel and books its channel movements around the placed jobs.
  bool finish(const std::vector<Level>& levels) {
    const Hours first = levels.front().candidates[levels.front().next].start;
    const Hours last = levels.back().candidates[levels.back().next].end;
    const bool cape = inst_.is_cape(vessel_);
    auto a = st_.channel.latest_feasible_arrival(Terminal::KCT, first, v_.eta);
    if (!a) return false;
    auto d = st_.channel.next_feasible_departure(Terminal::KCT, last, cape, inst_.tides,
                                                 st_.horizon);
    if (!d) return false;
    auto& berths = st_.berths[index(Terminal::KCT)];
    if (berths.first_full(*a, *d)) return false;
    try {
      st_.channel.commit(vessel_, Terminal::KCT, *a, *d, cape, inst_.tides);
    } catch (const std::logic_error&) {
      return false;
    }
    berths.add({*a, *d, vessel_});
    st_.solution.vessels[vessel_] = VesselSchedule{*a, *d};
    return true;
  }

  EvaluationState& st_;
  const Instance& inst_;
  const Vessel& v_;
  int vessel_;
  const GreedyOptions& opt_;
};

}  // namespace

void schedule_vessel_kct(EvaluationState& st, int vessel, const GreedyOptions& opt) {
  KctScheduler(st, vessel, opt).run();
}

Solution slars(const Instance& inst, const std::vector<int>& order, const GreedyOptions& opt) {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ids(inst.vessels.size());
  std::iota(ids.begin(), ids.end(), 0);
  if (sorted != ids) throw InputError("vessel order is not a permutation of the vessel ids");

  EvaluationState st(inst);
  for (int v : order) {
    try {
      if (inst.vessels[v].terminal == Terminal::KCT) {
        schedule_vessel_kct(st, v, opt);
      } else {
        schedule_vessel(st, v);
      }
    } catch (const ScheduleError&) {
      throw;
    } catch (const HorizonError& e) {
      throw ScheduleError(e.what(), st.solution);
    }
    st.ledger.forget_history();
  }
  Solution sol = std::move(st.solution);
  sol.objective = reported_delay(sol, inst);
  return sol;
}

double reported_delay(const Solution& sol, const Instance& inst) {
  if (inst.warmup_end > 0) return average_delay_since(sol, inst, inst.warmup_end);
  return average_delay(sol, inst);
}

}  // namespace coalchain
