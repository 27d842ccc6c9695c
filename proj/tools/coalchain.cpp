// Command-line front end: generate, solve, validate, ttt, export-gantt.
//
// Exit codes: 0 ok, 1 validation violations, 2 usage or unreadable input,
// 3 internal or solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <thread>

#include "coalchain/errors.hpp"
#include "coalchain/generator.hpp"
#include "coalchain/harness.hpp"
#include "coalchain/io.hpp"
#include "coalchain/validate.hpp"

using namespace coalchain;
namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kViolations = 1, kUsage = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  int generations = 100;
  int population = static_cast<int>(Population::kSize);
  int iterations = 1600;
  int workers = 0;  // 0: hardware threads
  bool include_warmup = false;
  std::optional<double> target;
  std::string out;
};

int workers_or_default(int w) {
  if (w > 0) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

RunConfig run_config(const Common& c) {
  if (c.population != static_cast<int>(Population::kSize)) {
    throw UsageError("--population: the hierarchical population has exactly 16 members");
  }
  RunConfig cfg;
  cfg.seed = c.seed;
  cfg.generations = c.generations;
  cfg.multistart_iterations = c.iterations;
  cfg.workers = workers_or_default(c.workers);
  cfg.target = c.target;
  return cfg;
}

Instance load_instance(const std::string& path, bool include_warmup) {
  Instance inst = read_instance(path);
  if (include_warmup) inst.warmup_end = 0;
  return inst;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_generate(const GeneratorConfig& cfg, const std::string& out) {
  Instance inst = generate_instance(cfg);
  auto s = summarize(inst);
  if (out.empty()) {
    std::cout << emit_instance(inst);
  } else {
    write_instance(out, inst);
    std::cout << "wrote " << out << '\n';
  }
  std::cerr << "vessels=" << s.vessels << " CCT=" << s.per_terminal[0] << " KCT=" << s.per_terminal[1]
            << " NCT=" << s.per_terminal[2] << " min_t=" << s.min_tonnes << " max_t=" << s.max_tonnes
            << " mean_eta_gap=" << s.mean_eta_gap << " seed=" << inst.seed
            << " config_hash=" << inst.config_hash << '\n';
  return kOk;
}

int cmd_solve(const std::string& instance_path, const std::string& algo, int runs, const Common& c,
              const std::string& log_path, const std::string& metrics_path) {
  Instance inst = load_instance(instance_path, c.include_warmup);
  RunConfig base = run_config(c);
  if (runs < 1) throw UsageError("--runs must be at least 1");

  std::vector<SearchResult> results;
  std::vector<double> walls;
  for (int k = 0; k < runs; ++k) {
    RunConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(k);
    const auto t0 = std::chrono::steady_clock::now();
    SearchResult r;
    if (algo == "greedy") {
      r.best_sequence = inst.eta_order();
      r.best_solution = slars(inst, r.best_sequence, cfg.greedy);
      r.best_fitness = r.best_solution.objective;
      r.evaluations = 1;
    } else if (algo == "ga") {
      r = run_ga(inst, cfg);
    } else {
      r = run_multistart(inst, cfg);
    }
    r.best_solution.seed = cfg.seed;
    walls.push_back(seconds_since(t0));
    std::cout << "run=" << k << " algo=" << algo << " seed=" << cfg.seed
              << " delay=" << r.best_fitness << " evaluations=" << r.evaluations
              << " wall_seconds=" << walls.back();
    if (auto rate = peak_evaluation_rate(r)) std::cout << " peak_evals_per_sec=" << *rate;
    std::cout << '\n';
    results.push_back(std::move(r));
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k) {
    if (results[k].best_fitness < results[best].best_fitness) best = k;
  }
  double mean = 0;
  for (const auto& r : results) mean += r.best_fitness;
  mean /= runs;
  double var = 0;
  for (const auto& r : results) var += (r.best_fitness - mean) * (r.best_fitness - mean);
  const double sd = runs > 1 ? std::sqrt(var / (runs - 1)) : 0.0;
  std::cout << "summary algo=" << algo << " runs=" << runs << " mean_delay=" << mean
            << " sd_delay=" << sd << " best_delay=" << results[best].best_fitness
            << " config_hash=" << inst.config_hash << '\n';

  if (!c.out.empty()) write_solution(c.out, results[best].best_solution, inst);
  if (!log_path.empty()) {
    write_text(log_path, generation_log_csv(results[best], results[best].best_solution.seed,
                                            inst.config_hash));
  }
  if (!metrics_path.empty()) {
    nlohmann::ordered_json m;
    m["algo"] = algo;
    m["config_hash"] = inst.config_hash;
    m["instance_seed"] = inst.seed;
    m["include_warmup"] = c.include_warmup;
    m["runs"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < results.size(); ++k) {
      nlohmann::ordered_json r{{"seed", base.seed + k},
                               {"delay", results[k].best_fitness},
                               {"evaluations", results[k].evaluations},
                               {"wall_seconds", walls[k]}};
      if (auto rate = peak_evaluation_rate(results[k])) r["peak_evals_per_sec"] = *rate;
      m["runs"].push_back(std::move(r));
    }
    m["mean_delay"] = mean;
    m["sd_delay"] = sd;
    write_text(metrics_path, m.dump(1) + "\n");
  }
  return kOk;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path) {
  Instance inst = read_instance(instance_path);
  Solution sol = read_solution(solution_path);
  auto report = validate(inst, sol);
  for (const auto& s : report.structural) std::cout << "structural: " << s << '\n';
  if (!report.unscheduled_vessels.empty()) {
    std::cout << "incomplete: " << report.unscheduled_vessels.size() << " unscheduled vessel(s):";
    for (int v : report.unscheduled_vessels) std::cout << ' ' << v;
    std::cout << '\n';
  }
  for (const auto& v : report.violations) std::cout << to_string(v.kind) << ": " << v.message << '\n';
  if (report.clean()) {
    std::cout << "clean: " << inst.vessels.size() << " vessels, delay "
              << reported_delay(sol, inst) << '\n';
    return kOk;
  }
  std::cout << report.violations.size() << " violation(s)\n";
  return kViolations;
}

int cmd_ttt(const std::string& instance_path, int runs, std::optional<double> target,
            const Common& c) {
  Instance inst = load_instance(instance_path, c.include_warmup);
  RunConfig base = run_config(c);
  if (!target) {
    // Stand-in target: the best of a multi-start run with the same budget.
    auto ms = run_multistart(inst, base);
    target = ms.best_fitness;
    std::cerr << "target from multi-start best: " << *target << '\n';
  }
  auto records = run_ttt(inst, base, *target, runs, base.seed);
  const std::string csv = ttt_csv(records, *target, inst.config_hash);
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    write_text(c.out, csv);
  }
  return kOk;
}

int cmd_export(const std::string& instance_path, const std::string& solution_path,
               const std::string& out) {
  Instance inst = read_instance(instance_path);
  Solution sol = read_solution(solution_path);
  auto g = export_gantt(inst, sol);
  const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  write_text(dir / "pads.csv", g.pads);
  write_text(dir / "reclaimers.csv", g.reclaimers);
  write_text(dir / "channel.csv", g.channel);
  std::cout << "wrote " << (dir / "pads.csv").string() << ", reclaimers.csv, channel.csv\n";
  return kOk;
}

void add_search_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--generations", c.generations, "GA generations")->check(CLI::NonNegativeNumber);
  cmd->add_option("--population", c.population, "population size (fixed at 16)");
  cmd->add_option("--iterations", c.iterations, "multi-start iterations")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "evaluation threads (default: all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--include-warmup", c.include_warmup, "count warm-up vessels in the delay");
  cmd->add_option("--out", c.out, "output file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coal export chain scheduler"};
  app.require_subcommand(1);

  GeneratorConfig gen;
  std::string gen_out;
  auto* g = app.add_subcommand("generate", "write a synthetic instance");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--vessels", gen.vessels, "vessel count")->check(CLI::PositiveNumber);
  g->add_option("--mean-gap", gen.mean_interarrival, "mean hours between ETAs");
  g->add_option("--warmup-days", gen.warmup_days, "days of warm-up traffic excluded from reports");
  g->add_option("--out", gen_out, "instance file (default: stdout)");

  Common solve;
  std::string solve_instance, algo = "greedy", log_path, metrics_path;
  int runs = 1;
  auto* s = app.add_subcommand("solve", "schedule an instance");
  s->add_option("instance", solve_instance, "instance file")->required();
  s->add_option("--algo", algo, "greedy, ga or ms")
      ->check(CLI::IsMember({"greedy", "ga", "ms"}));
  s->add_option("--runs", runs, "independent runs with seeds seed, seed+1, ...");
  s->add_option("--target", solve.target, "stop once the delay is at or below this");
  s->add_option("--log", log_path, "per-generation CSV of the best run");
  s->add_option("--metrics", metrics_path, "metrics summary JSON");
  add_search_flags(s, solve);

  std::string val_instance, val_solution;
  auto* v = app.add_subcommand("validate", "check a solution");
  v->add_option("instance", val_instance, "instance file")->required();
  v->add_option("solution", val_solution, "solution file")->required();

  Common ttt;
  ttt.generations = 100;
  std::string ttt_instance;
  int ttt_runs = 50;
  auto* t = app.add_subcommand("ttt", "time-to-target runs of the GA");
  t->add_option("instance", ttt_instance, "instance file")->required();
  t->add_option("--runs", ttt_runs, "GA runs")->check(CLI::PositiveNumber);
  t->add_option("--target", ttt.target, "target delay (default: multi-start best)");
  add_search_flags(t, ttt);

  std::string ex_instance, ex_solution, ex_out;
  auto* e = app.add_subcommand("export-gantt", "write pad, reclaimer and channel CSVs");
  e->add_option("instance", ex_instance, "instance file")->required();
  e->add_option("solution", ex_solution, "solution file")->required();
  e->add_option("--out", ex_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed()) return cmd_generate(gen, gen_out);
    if (s->parsed()) return cmd_solve(solve_instance, algo, runs, solve, log_path, metrics_path);
    if (v->parsed()) return cmd_validate(val_instance, val_solution);
    if (t->parsed()) return cmd_ttt(ttt_instance, ttt_runs, ttt.target, ttt);
    if (e->parsed()) return cmd_export(ex_instance, ex_solution, ex_out);
  } catch (const UsageError& err) {
    std::cerr << "usage: " << err.what() << '\n';
    return kUsage;
  } catch (const InputError& err) {
    std::cerr << "input: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
