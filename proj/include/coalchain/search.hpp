#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "coalchain/greedy.hpp"

namespace coalchain {

using Sequence = std::vector<int>;
using Rng = std::mt19937_64;

/// Independent stream for (master seed, generation, slot), so results do not
/// depend on which worker evaluates what.
Rng slot_rng(std::uint64_t seed, std::uint64_t generation, std::uint64_t slot);

/// ETA order with each position swapped with its successor with probability p,
/// scanning left to right.
Sequence create_random_sequence(const Instance& inst, double p, Rng& rng);
Sequence perturb_sequence(Sequence seq, double p, Rng& rng);

/// Positions where both parents agree are kept; the others are filled left to
/// right from a parent chosen by `pick_first` (true: first parent), taking its
/// earliest vessel not yet in the child.
Sequence crossover(const Sequence& a, const Sequence& b, const std::function<bool()>& pick_first);
Sequence crossover(const Sequence& a, const Sequence& b, Rng& rng);

/// Swaps positions k-1 and k.
void mutate_at(Sequence& seq, std::size_t k);
/// One uniformly chosen adjacent swap (no-op for fewer than two vessels).
void mutate(Sequence& seq, Rng& rng);

struct Individual {
  Sequence sequence;
  double fitness = 0;
  std::uint64_t solution_hash = 0;
  std::uint64_t birth = 0;  // creation counter; older individuals win ties
};

/// 16 individuals: a complete 13-node ternary tree plus three extra leaves
/// hanging below nodes 4, 5 and 6.
class Population {
 public:
  static constexpr std::size_t kSize = 16;

  /// (parent, child) node pairs in a fixed order.
  static const std::vector<std::pair<std::size_t, std::size_t>>& edges();
  static std::optional<std::size_t> parent_of(std::size_t node);

  std::array<Individual, kSize>& nodes() { return nodes_; }
  const std::array<Individual, kSize>& nodes() const { return nodes_; }
  const Individual& best() const { return nodes_[0]; }
  std::size_t worst() const;

  /// Replaces `node` when the newcomer is strictly fitter; returns whether it did.
  bool insert(std::size_t node, Individual ind);
  /// Restores parent-better-than-child along every edge by swapping.
  void update_hierarchy();
  bool heap_ok() const;

 private:
  std::array<Individual, kSize> nodes_;
};

/// Strict order on (fitness, birth).
bool fitter(const Individual& a, const Individual& b);

struct RunConfig {
  int generations = 100;
  double init_swap = 0.5;
  double multistart_swap = 0.3;
  int multistart_iterations = 1600;
  int workers = 1;
  std::uint64_t seed = 1;
  bool inject_eta_order = true;
  GreedyOptions greedy{};
  /// Stop early once the best fitness is at or below this value.
  std::optional<double> target;
};

struct GenerationStats {
  int generation = 0;
  double best = 0;
  double mean = 0;
  int replaced = 0;
  bool restarted = false;
  long evaluations = 0;  // cumulative slars calls
  double wall_seconds = 0;
  bool heap_ok = true;
};

struct Evaluation {
  double fitness = 0;
  std::uint64_t hash = 0;
  std::optional<Solution> solution;
};

/// Runs slars on every sequence with up to `workers` threads. Results are
/// indexed like the input. Unschedulable orders get infinite fitness.
std::vector<Evaluation> evaluate_all(const Instance& inst, const std::vector<Sequence>& seqs,
                                     int workers, const GreedyOptions& opt, bool keep_solutions);

struct SearchResult {
  Sequence best_sequence;
  Solution best_solution;
  double best_fitness = 0;
  std::vector<GenerationStats> history;
  long evaluations = 0;
  /// Evaluations and seconds until the target was first met, when one was set.
  std::optional<long> evaluations_to_target;
  std::optional<double> seconds_to_target;
};

class GeneticSearch {
 public:
  GeneticSearch(const Instance& inst, RunConfig cfg);

  void initialize();
  /// One generation (or a restart, when the last one replaced nobody).
  GenerationStats step();
  const Population& population() const { return population_; }
  SearchResult result() const;

 private:
  void track(const Individual& ind, const Evaluation& e);

  const Instance& inst_;
  RunConfig cfg_;
  Population population_;
  int generation_ = 0;
  std::uint64_t births_ = 0;
  bool converged_ = false;
  long evaluations_ = 0;
  double elapsed_ = 0;
  Sequence best_sequence_;
  Solution best_solution_;
  double best_fitness_ = 0;
  std::vector<GenerationStats> history_;
  std::optional<long> evals_to_target_;
  std::optional<double> seconds_to_target_;
};

SearchResult run_ga(const Instance& inst, const RunConfig& cfg);
SearchResult run_multistart(const Instance& inst, const RunConfig& cfg);

}  // namespace coalchain
