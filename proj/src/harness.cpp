#include "coalchain/harness.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <tuple>

namespace coalchain {

namespace {

// Shortest text that parses back to the same double.
std::string num(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

GanttTables export_gantt(const Instance& inst, const Solution& sol) {
  std::ostringstream pads, recl, chan;
  pads << "stockpile,vessel,pad,t1,t2,y1,y2\n";
  recl << "reclaimer,stockpile,vessel,start,end,position\n";
  chan << "vessel,terminal,event,time,cape\n";

  struct Job {
    Reclaimer r;
    Hours start;
    int stockpile;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < sol.stockpiles.size() && s < inst.stockpiles.size(); ++s) {
    const auto& sched = sol.stockpiles[s];
    if (!sched || !sched->kct) continue;
    const auto& k = *sched->kct;
    const Metres half = stockpile_length(inst.stockpiles[s].tonnes()) / 2;
    pads << s << ',' << inst.stockpiles[s].vessel << ',' << to_string(k.pad) << ','
         << num(sched->build_start()) << ',' << num(sched->reclaim_end) << ','
         << num(k.position - half) << ',' << num(k.position + half) << '\n';
    jobs.push_back({k.reclaimer, sched->reclaim_start, static_cast<int>(s)});
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return std::tie(a.r, a.start, a.stockpile) < std::tie(b.r, b.start, b.stockpile);
  });
  for (const auto& j : jobs) {
    const auto& sched = *sol.stockpiles[j.stockpile];
    recl << to_string(j.r) << ',' << j.stockpile << ',' << inst.stockpiles[j.stockpile].vessel
         << ',' << num(sched.reclaim_start) << ',' << num(sched.reclaim_end) << ','
         << num(sched.kct->position) << '\n';
  }

  struct Event {
    Hours t;
    int vessel;
    bool departure;
  };
  std::vector<Event> events;
  for (std::size_t v = 0; v < sol.vessels.size() && v < inst.vessels.size(); ++v) {
    if (!sol.vessels[v]) continue;
    events.push_back({sol.vessels[v]->arrival, static_cast<int>(v), false});
    events.push_back({sol.vessels[v]->departure, static_cast<int>(v), true});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::tie(a.t, a.vessel, a.departure) < std::tie(b.t, b.vessel, b.departure);
  });
  for (const auto& e : events) {
    chan << e.vessel << ',' << to_string(inst.vessels[e.vessel].terminal) << ','
         << (e.departure ? "departure" : "arrival") << ',' << num(e.t) << ','
         << (inst.is_cape(e.vessel) ? 1 : 0) << '\n';
  }
  return {pads.str(), recl.str(), chan.str()};
}

std::string generation_log_csv(const SearchResult& r, std::uint64_t seed,
                               const std::string& config_hash) {
  std::ostringstream os;
  os << "# seed " << seed << "\n# config_hash " << config_hash << '\n';
  os << "generation,best,mean,replaced,restarted,evaluations,wall_seconds\n";
  for (const auto& g : r.history) {
    os << g.generation << ',' << num(g.best) << ',' << num(g.mean) << ',' << g.replaced << ','
       << (g.restarted ? 1 : 0) << ',' << g.evaluations << ',' << num(g.wall_seconds) << '\n';
  }
  return os.str();
}

std::optional<double> peak_evaluation_rate(const SearchResult& r) {
  std::optional<double> best;
  long prev_evals = 0;
  double prev_secs = 0;
  for (const auto& g : r.history) {
    const double dt = g.wall_seconds - prev_secs;
    if (dt > 0) {
      const double rate = static_cast<double>(g.evaluations - prev_evals) / dt;
      if (!best || rate > *best) best = rate;
    }
    prev_evals = g.evaluations;
    prev_secs = g.wall_seconds;
  }
  return best;
}

std::vector<TttRecord> run_ttt(const Instance& inst, const RunConfig& base, double target,
                               int runs, std::uint64_t first_seed) {
  std::vector<TttRecord> out;
  for (int i = 0; i < runs; ++i) {
    RunConfig cfg = base;
    cfg.seed = first_seed + static_cast<std::uint64_t>(i);
    cfg.target = target;
    auto r = run_ga(inst, cfg);
    TttRecord rec;
    rec.run = i;
    rec.seed = cfg.seed;
    rec.censored = !r.evaluations_to_target;
    rec.evaluations = r.evaluations_to_target.value_or(r.evaluations);
    rec.seconds = r.seconds_to_target.value_or(r.history.empty() ? 0.0 : r.history.back().wall_seconds);
    out.push_back(rec);
  }
  std::sort(out.begin(), out.end(), [](const TttRecord& a, const TttRecord& b) {
    return std::tie(a.censored, a.evaluations, a.run) < std::tie(b.censored, b.evaluations, b.run);
  });
  const double n = static_cast<double>(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].probability = (static_cast<double>(i) + 0.5) / n;
  }
  return out;
}

std::string ttt_csv(const std::vector<TttRecord>& records, double target,
                    const std::string& config_hash) {
  std::ostringstream os;
  os << "# target " << num(target) << "\n# config_hash " << config_hash << '\n';
  os << "rank,run,seed,evaluations,seconds,censored,probability\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << i + 1 << ',' << r.run << ',' << r.seed << ',' << r.evaluations << ',' << num(r.seconds)
       << ',' << (r.censored ? 1 : 0) << ',' << num(r.probability) << '\n';
  }
  return os.str();
}

}  // namespace coalchain
