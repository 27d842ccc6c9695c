#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coalchain/model.hpp"

namespace coalchain {

/// Synthetic shipping stem parameters. Distribution shapes are our own
/// choices; the defaults target the published aggregate statistics (vessel
/// count, tonnage range, terminal mix, mean gap between ETAs).
struct GeneratorConfig {
  int vessels = 200;
  std::array<double, 3> terminal_mix{0.15, 0.52, 0.33};  // indexed by Terminal
  Hours mean_interarrival = 4.2;
  double interarrival_shape = 2.0;  // Gamma shape of the ETA gaps
  Hours first_eta = 240;            // lets the first vessels rail a full ten days ahead
  Tonnes min_tonnes = 10000;
  Tonnes max_tonnes = 160000;
  std::array<Tonnes, 3> mean_tonnes{58000, 70000, 95000};  // indexed by Terminal
  /// Probability of 1, 2 or 3 stockpiles per vessel, indexed by Terminal.
  std::array<std::array<double, 3>, 3> stockpile_count{{{1.0, 0.0, 0.0},
                                                        {0.5, 0.4, 0.1},
                                                        {0.95, 0.05, 0.0}}};
  int max_components = 3;
  /// Load points whose stockpiles must be built within five days.
  std::vector<std::string> short_build_load_points{"NDL"};
  double warmup_days = 0;
  std::uint64_t seed = 1;

  /// Hex digest of every field except the seed, so runs of one configuration
  /// under different seeds share it.
  std::string hash() const;
};

Instance generate_instance(const GeneratorConfig& cfg);

struct StemSummary {
  int vessels = 0;
  std::array<int, 3> per_terminal{};
  std::array<int, 3> stockpiles{};
  Tonnes min_tonnes = 0;
  Tonnes max_tonnes = 0;
  std::array<Tonnes, 3> mean_tonnes{};
  Hours mean_eta_gap = 0;
};

StemSummary summarize(const Instance& inst);

}  // namespace coalchain
