#pragma once

// Random channel scenarios checked against the brute-force replay.

#include <random>
#include <stdexcept>
#include <vector>

#include "coalchain/channel.hpp"

namespace oracle {

struct ChannelScenario {
  coalchain::ChannelGeometry geometry;
  coalchain::TideTable tides;
  coalchain::ChannelTimeline timeline;
  std::vector<coalchain::ChannelMove> moves;
};

inline coalchain::ChannelGeometry default_channel() {
  coalchain::ChannelGeometry g;
  g.travel = {35.0 / 60, 55.0 / 60, 85.0 / 60};
  return g;
}

// Commits up to `vessels` random vessels, each moved to its next feasible
// arrival and departure so the timeline stays valid.
inline ChannelScenario random_channel_scenario(std::mt19937_64& rng, int vessels) {
  using namespace coalchain;
  std::uniform_real_distribution<double> u(0, 1);
  ChannelScenario s;
  s.geometry = default_channel();
  s.tides = TideTable::semi_diurnal(2.0 + 10 * u(rng), 400);
  s.timeline = ChannelTimeline(s.geometry);
  for (int v = 0; v < vessels; ++v) {
    Terminal dest = kTerminals[static_cast<std::size_t>(u(rng) * 3)];
    bool cape = u(rng) < 0.3;
    auto a = s.timeline.next_feasible_arrival(dest, 30 * u(rng), 1e6);
    if (!a) continue;
    auto d = s.timeline.next_feasible_departure(dest, *a + 8 * u(rng), cape, s.tides, 390);
    if (!d) continue;
    // The departure search ignores this vessel's own arrival; both movements
    // must hold together.
    ChannelTimeline trial = s.timeline;
    try {
      trial.commit(v, dest, *a, *d, cape, s.tides);
    } catch (const std::logic_error&) {
      continue;
    }
    s.timeline = std::move(trial);
    s.moves.push_back({v, dest, EventKind::Arrival, *a, cape});
    s.moves.push_back({v, dest, EventKind::Departure, *d, cape});
  }
  return s;
}

// Candidate times clustered on rule boundaries of existing events.
inline double boundary_time(std::mt19937_64& rng, const ChannelScenario& s) {
  std::uniform_real_distribution<double> u(0, 1);
  if (s.moves.empty() || u(rng) < 0.3) return 40 * u(rng);
  const auto& m = s.moves[static_cast<std::size_t>(u(rng) * s.moves.size())];
  const double offsets[] = {0, 0.25, -0.25, 2 * (35.0 / 60 + 0.25), 2 * (55.0 / 60 + 0.25),
                            2 * (85.0 / 60 + 0.25), 30.0 / 60, 50.0 / 60, 20.0 / 60,
                            35.0 / 60 + 0.25, 55.0 / 60 + 0.25, 85.0 / 60 + 0.25};
  double off = offsets[static_cast<std::size_t>(u(rng) * std::size(offsets))];
  double jitter = u(rng) < 0.5 ? 0.0 : (u(rng) - 0.5) * 0.02;
  return m.time + (u(rng) < 0.5 ? off : -off) + jitter;
}

}  // namespace oracle
