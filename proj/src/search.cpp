#include "coalchain/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace coalchain {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Library-independent draws (std distributions differ between vendors).
double unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
bool coin(Rng& rng) { return (rng() >> 63) != 0; }
std::size_t below(Rng& rng, std::size_t n) { return static_cast<std::size_t>(unit(rng) * n); }

constexpr double kInfeasible = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMultistartSlot = 1u << 20;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Rng slot_rng(std::uint64_t seed, std::uint64_t generation, std::uint64_t slot) {
  std::uint64_t x = splitmix(seed);
  x = splitmix(x ^ splitmix(generation + 0x5851f42d4c957f2dull));
  x = splitmix(x ^ splitmix(slot + 0x14057b7ef767814full));
  return Rng(x);
}

Sequence perturb_sequence(Sequence seq, double p, Rng& rng) {
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (unit(rng) < p) std::swap(seq[i], seq[i + 1]);
  }
  return seq;
}

Sequence create_random_sequence(const Instance& inst, double p, Rng& rng) {
  return perturb_sequence(inst.eta_order(), p, rng);
}

Sequence crossover(const Sequence& a, const Sequence& b, const std::function<bool()>& pick_first) {
  const std::size_t n = a.size();
  Sequence child(n, -1);
  std::vector<char> used(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (a[j] == b[j]) {
      child[j] = a[j];
      used[a[j]] = 1;
    }
  }
  std::size_t ia = 0, ib = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (child[j] >= 0) continue;
    const bool first = pick_first();
    const Sequence& src = first ? a : b;
    std::size_t& i = first ? ia : ib;
    while (used[src[i]]) ++i;
    child[j] = src[i];
    used[src[i]] = 1;
  }
  return child;
}

Sequence crossover(const Sequence& a, const Sequence& b, Rng& rng) {
  return crossover(a, b, [&rng] { return coin(rng); });
}

void mutate_at(Sequence& seq, std::size_t k) { std::swap(seq[k - 1], seq[k]); }

void mutate(Sequence& seq, Rng& rng) {
  if (seq.size() < 2) return;
  mutate_at(seq, 1 + below(rng, seq.size() - 1));
}

bool fitter(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness < b.fitness;
  return a.birth < b.birth;
}

const std::vector<std::pair<std::size_t, std::size_t>>& Population::edges() {
  static const auto list = [] {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t c = 1; c < kSize; ++c) e.emplace_back(*parent_of(c), c);
    return e;
  }();
  return list;
}

std::optional<std::size_t> Population::parent_of(std::size_t node) {
  if (node == 0 || node >= kSize) return std::nullopt;
  if (node <= 12) return (node - 1) / 3;
  return node - 9;  // 13, 14, 15 hang below 4, 5, 6
}

std::size_t Population::worst() const {
  std::size_t w = 0;
  for (std::size_t i = 1; i < kSize; ++i) {
    if (fitter(nodes_[w], nodes_[i])) w = i;
  }
  return w;
}

bool Population::insert(std::size_t node, Individual ind) {
  if (!fitter(ind, nodes_[node])) return false;
  nodes_[node] = std::move(ind);
  return true;
}

void Population::update_hierarchy() {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [p, c] : edges()) {
      if (fitter(nodes_[c], nodes_[p])) {
        std::swap(nodes_[c], nodes_[p]);
        changed = true;
      }
    }
  }
}

bool Population::heap_ok() const {
  return std::none_of(edges().begin(), edges().end(), [this](const auto& e) {
    return fitter(nodes_[e.second], nodes_[e.first]);
  });
}

std::vector<Evaluation> evaluate_all(const Instance& inst, const std::vector<Sequence>& seqs,
                                     int workers, const GreedyOptions& opt, bool keep_solutions) {
  std::vector<Evaluation> out(seqs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < seqs.size();) {
      try {
        Solution sol = slars(inst, seqs[i], opt);
        out[i].fitness = sol.objective;
        out[i].hash = sol.hash();
        if (keep_solutions) out[i].solution = std::move(sol);
      } catch (const ScheduleError&) {
        out[i].fitness = kInfeasible;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(seqs.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

GeneticSearch::GeneticSearch(const Instance& inst, RunConfig cfg) : inst_(inst), cfg_(cfg) {}

void GeneticSearch::track(const Individual& ind, const Evaluation& e) {
  if (best_sequence_.empty() || ind.fitness < best_fitness_) {
    best_fitness_ = ind.fitness;
    best_sequence_ = ind.sequence;
    if (e.solution) best_solution_ = *e.solution;
  }
}

void GeneticSearch::initialize() {
  const auto t0 = Clock::now();
  std::vector<Sequence> seqs;
  for (std::size_t slot = 0; slot < Population::kSize; ++slot) {
    Rng rng = slot_rng(cfg_.seed, 0, slot);
    double p = slot == 0 && cfg_.inject_eta_order ? 0.0 : cfg_.init_swap;
    seqs.push_back(create_random_sequence(inst_, p, rng));
  }
  auto evals = evaluate_all(inst_, seqs, cfg_.workers, cfg_.greedy, true);
  for (std::size_t slot = 0; slot < seqs.size(); ++slot) {
    Individual ind{seqs[slot], evals[slot].fitness, evals[slot].hash, births_++};
    track(ind, evals[slot]);
    population_.nodes()[slot] = std::move(ind);
  }
  population_.update_hierarchy();
  evaluations_ += static_cast<long>(seqs.size());
  elapsed_ += since(t0);

  GenerationStats g;
  g.generation = 0;
  g.best = population_.best().fitness;
  double sum = 0;
  for (const auto& ind : population_.nodes()) sum += ind.fitness;
  g.mean = sum / Population::kSize;
  g.replaced = static_cast<int>(Population::kSize);
  g.evaluations = evaluations_;
  g.wall_seconds = elapsed_;
  g.heap_ok = population_.heap_ok();
  if (cfg_.target && best_fitness_ <= *cfg_.target && !evals_to_target_) {
    evals_to_target_ = evaluations_;
    seconds_to_target_ = elapsed_;
  }
  history_.push_back(g);
}

GenerationStats GeneticSearch::step() {
  const auto t0 = Clock::now();
  ++generation_;
  const auto gen = static_cast<std::uint64_t>(generation_);
  const bool restart = converged_;
  auto& nodes = population_.nodes();
  const auto& edges = Population::edges();

  // Slots 0..14 follow the edges (or are fresh randoms on a restart); slot 15
  // is an adjacent-swap variant of the root.
  std::vector<Sequence> seqs;
  for (std::size_t slot = 0; slot + 1 < Population::kSize; ++slot) {
    Rng rng = slot_rng(cfg_.seed, gen, slot);
    if (restart) {
      seqs.push_back(create_random_sequence(inst_, cfg_.init_swap, rng));
    } else {
      const auto& [p, c] = edges[slot];
      Sequence child = crossover(nodes[p].sequence, nodes[c].sequence, rng);
      mutate(child, rng);
      seqs.push_back(std::move(child));
    }
  }
  {
    Rng rng = slot_rng(cfg_.seed, gen, Population::kSize - 1);
    Sequence s = nodes[0].sequence;
    mutate(s, rng);
    seqs.push_back(std::move(s));
  }
  auto evals = evaluate_all(inst_, seqs, cfg_.workers, cfg_.greedy, true);
  evaluations_ += static_cast<long>(seqs.size());

  int replaced = 0;
  for (std::size_t slot = 0; slot < seqs.size(); ++slot) {
    Individual ind{seqs[slot], evals[slot].fitness, evals[slot].hash, births_++};
    track(ind, evals[slot]);
    if (slot + 1 == seqs.size()) {
      replaced += population_.insert(population_.worst(), std::move(ind));
    } else if (restart) {
      nodes[edges[slot].second] = std::move(ind);  // elitist restart keeps only the root
      ++replaced;
    } else {
      replaced += population_.insert(edges[slot].second, std::move(ind));
    }
  }
  population_.update_hierarchy();
  converged_ = !restart && replaced == 0;
  elapsed_ += since(t0);

  GenerationStats g;
  g.generation = generation_;
  g.best = population_.best().fitness;
  double sum = 0;
  for (const auto& ind : nodes) sum += ind.fitness;
  g.mean = sum / Population::kSize;
  g.replaced = replaced;
  g.restarted = restart;
  g.evaluations = evaluations_;
  g.wall_seconds = elapsed_;
  g.heap_ok = population_.heap_ok();
  if (cfg_.target && best_fitness_ <= *cfg_.target && !evals_to_target_) {
    evals_to_target_ = evaluations_;
    seconds_to_target_ = elapsed_;
  }
  history_.push_back(g);
  return g;
}

SearchResult GeneticSearch::result() const {
  SearchResult r;
  r.best_sequence = best_sequence_;
  r.best_solution = best_solution_;
  r.best_fitness = best_fitness_;
  r.history = history_;
  r.evaluations = evaluations_;
  r.evaluations_to_target = evals_to_target_;
  r.seconds_to_target = seconds_to_target_;
  return r;
}

SearchResult run_ga(const Instance& inst, const RunConfig& cfg) {
  GeneticSearch ga(inst, cfg);
  ga.initialize();
  for (int g = 0; g < cfg.generations; ++g) {
    if (cfg.target && ga.result().evaluations_to_target) break;
    ga.step();
  }
  return ga.result();
}

SearchResult run_multistart(const Instance& inst, const RunConfig& cfg) {
  const auto t0 = Clock::now();
  SearchResult r;
  r.best_fitness = kInfeasible;
  const int batch = static_cast<int>(Population::kSize);
  for (int first = 0; first < cfg.multistart_iterations; first += batch) {
    const int n = std::min(batch, cfg.multistart_iterations - first);
    std::vector<Sequence> seqs;
    for (int i = 0; i < n; ++i) {
      Rng rng = slot_rng(cfg.seed, static_cast<std::uint64_t>(first + i), kMultistartSlot);
      seqs.push_back(create_random_sequence(inst, cfg.multistart_swap, rng));
    }
    auto evals = evaluate_all(inst, seqs, cfg.workers, cfg.greedy, true);
    double sum = 0;
    for (int i = 0; i < n; ++i) {
      sum += evals[i].fitness;
      if (r.best_sequence.empty() || evals[i].fitness < r.best_fitness) {
        r.best_fitness = evals[i].fitness;
        r.best_sequence = seqs[i];
        if (evals[i].solution) r.best_solution = std::move(*evals[i].solution);
      }
    }
    r.evaluations += n;
    GenerationStats g;
    g.generation = first / batch;
    g.best = r.best_fitness;
    g.mean = sum / n;
    g.evaluations = r.evaluations;
    g.wall_seconds = since(t0);
    r.history.push_back(g);
    if (cfg.target && r.best_fitness <= *cfg.target && !r.evaluations_to_target) {
      r.evaluations_to_target = r.evaluations;
      r.seconds_to_target = g.wall_seconds;
      break;
    }
  }
  return r;
}

}  // namespace coalchain
