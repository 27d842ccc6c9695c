#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coalchain/search.hpp"

namespace coalchain {

/// CSV views of a schedule for external plotting. Every file starts with a
/// header row; an empty solution yields headers only.
struct GanttTables {
  std::string pads;        // one time x position rectangle per KCT stockpile
  std::string reclaimers;  // one row per reclaim job, in time order per machine
  std::string channel;     // arrival and departure events, in time order
};

GanttTables export_gantt(const Instance& inst, const Solution& sol);

/// Per-generation log: generation, best, mean, replaced, restarted,
/// evaluations, wall seconds. Comment lines carry the seed and config hash.
std::string generation_log_csv(const SearchResult& r, std::uint64_t seed,
                               const std::string& config_hash);

/// Evaluations per second of the fastest logged generation, if any.
std::optional<double> peak_evaluation_rate(const SearchResult& r);

struct TttRecord {
  int run = 0;
  std::uint64_t seed = 0;
  long evaluations = 0;  // to target, or the whole budget when censored
  double seconds = 0;
  bool censored = false;
  double probability = 0;  // (rank - 0.5) / n after sorting
};

/// Runs the GA once per seed, stopping each run when `target` is reached.
/// Records are sorted by evaluations to target (censored runs last, then by
/// run) and given plotting positions. Evaluations are the sort key because,
/// unlike wall time, they are reproducible for a fixed seed set.
std::vector<TttRecord> run_ttt(const Instance& inst, const RunConfig& base, double target,
                               int runs, std::uint64_t first_seed);

std::string ttt_csv(const std::vector<TttRecord>& records, double target,
                    const std::string& config_hash);

}  // namespace coalchain
