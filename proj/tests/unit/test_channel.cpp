#include <doctest.h>

#include <random>

#include "channel_oracles.hpp"
#include "coalchain/channel.hpp"

using namespace coalchain;

namespace {

ChannelTimeline fresh() { return ChannelTimeline(oracle::default_channel()); }

const TideTable& no_tides() {
  static const TideTable t = TideTable::semi_diurnal(6, 1000);
  return t;
}

}  // namespace

TEST_CASE("empty timeline accepts everything") {
  auto tl = fresh();
  CHECK(tl.arrival_feasible(Terminal::KCT, 0));
  CHECK(tl.arrival_feasible(Terminal::NCT, 17.3));
  CHECK(tl.departure_feasible(Terminal::CCT, 5, false, no_tides()));
  CHECK(*tl.next_feasible_arrival(Terminal::KCT, 12.5, 1e6) == 12.5);
}

TEST_CASE("arrival headway") {
  auto tl = fresh();
  tl.commit(1, Terminal::KCT, 10, 20, false, no_tides());
  CHECK_FALSE(tl.arrival_feasible(Terminal::KCT, 10 + 10.0 / 60));
  CHECK(tl.arrival_feasible(Terminal::KCT, 10.25));
  CHECK(*tl.next_feasible_arrival(Terminal::KCT, 10.1, 1e6) == doctest::Approx(10.25));
}

TEST_CASE("departure then arrival clearance at KCT is 140 minutes") {
  auto tl = fresh();
  tl.commit(1, Terminal::KCT, 0, 10, false, no_tides());
  CHECK(tl.arrival_feasible(Terminal::KCT, 10 + 140.0 / 60));
  CHECK_FALSE(tl.arrival_feasible(Terminal::KCT, 10 + 139.0 / 60));
  // Arriving no later than the departure is fine.
  CHECK(tl.arrival_feasible(Terminal::KCT, 10));
}

TEST_CASE("cape departures need a tidal window") {
  auto tl = fresh();
  TideTable tides({10, 22.42});
  CHECK_FALSE(tl.departure_feasible(Terminal::KCT, 12, true, tides));
  CHECK(tl.departure_feasible(Terminal::KCT, 12, false, tides));
  CHECK(tl.departure_feasible(Terminal::KCT, 8.5, true, tides));
  CHECK(*tl.next_feasible_departure(Terminal::KCT, 12, true, tides, 1e6) ==
        doctest::Approx(20.92));
}

TEST_CASE("projected events of a vessel bound for NCT") {
  auto tl = fresh();
  tl.commit(7, Terminal::NCT, 100, 120, false, no_tides());
  const auto& kct = tl.events(Terminal::KCT);
  const auto& cct = tl.events(Terminal::CCT);
  REQUIRE(kct.size() == 2);
  REQUIRE(cct.size() == 2);
  CHECK(kct[0].time == doctest::Approx(100 - 30.0 / 60));
  CHECK(kct[0].projected);
  CHECK(cct[0].time == doctest::Approx(100 - 50.0 / 60));
  CHECK(kct[1].time == doctest::Approx(120 + 30.0 / 60));
  CHECK(tl.events(Terminal::NCT).size() == 2);
  CHECK_FALSE(tl.events(Terminal::NCT)[0].projected);
}

TEST_CASE("leaving KCT as an inbound NCT vessel passes it") {
  auto tl = fresh();
  tl.commit(1, Terminal::NCT, 100, 130, false, no_tides());
  Hours passing = 100 - 30.0 / 60;
  CHECK(tl.departure_feasible(Terminal::KCT, passing, false, no_tides()));
  CHECK_FALSE(tl.departure_feasible(Terminal::KCT, passing - 0.1, false, no_tides()));
}

TEST_CASE("commit then release restores the timeline") {
  auto tl = fresh();
  tl.commit(1, Terminal::KCT, 5, 15, false, no_tides());
  auto before = tl;
  tl.commit(2, Terminal::NCT, 30, 40, false, no_tides());
  CHECK_FALSE(tl.arrival_feasible(Terminal::NCT, 30 + 10.0 / 60));
  tl.release(2);
  CHECK(tl == before);
}

TEST_CASE("infeasible commits are rejected") {
  auto tl = fresh();
  tl.commit(1, Terminal::KCT, 5, 15, false, no_tides());
  auto before = tl;
  CHECK_THROWS_AS(tl.commit(2, Terminal::KCT, 5.1, 30, false, no_tides()), std::logic_error);
  CHECK_THROWS_AS(tl.commit(3, Terminal::KCT, 40, 15.05, false, no_tides()), std::logic_error);
  CHECK(tl == before);
}

TEST_CASE("at most four transits overlap") {
  auto tl = fresh();
  // Long-travel arrivals spaced by the headway overlap in the channel.
  for (int v = 0; v < 4; ++v) tl.commit(v, Terminal::NCT, 10 + 0.25 * v, 50 + 0.25 * v, false, no_tides());
  CHECK_FALSE(tl.arrival_feasible(Terminal::NCT, 11.0));
  auto next = tl.next_feasible_arrival(Terminal::NCT, 11.0, 1e6);
  REQUIRE(next);
  // The first transit ends at 10; a new one must start no earlier.
  CHECK(*next == doctest::Approx(10 + 85.0 / 60 + 0.25));
}

TEST_CASE("incremental predicates agree with full replay") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1);
  int disagreements = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    auto s = oracle::random_channel_scenario(rng, 1 + static_cast<int>(u(rng) * 9));
    REQUIRE(replay_channel(s.moves, s.geometry, s.tides).empty());
    Terminal dest = kTerminals[static_cast<std::size_t>(u(rng) * 3)];
    bool departure = u(rng) < 0.5;
    bool cape = u(rng) < 0.3;
    double t = std::max(0.0, oracle::boundary_time(rng, s));
    bool incremental = departure ? s.timeline.departure_feasible(dest, t, cape, s.tides)
                                 : s.timeline.arrival_feasible(dest, t);
    auto all = s.moves;
    all.push_back({999, dest, departure ? EventKind::Departure : EventKind::Arrival, t, cape});
    bool replay = replay_channel(all, s.geometry, s.tides).empty();
    if (incremental != replay) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("next feasible searches return the first feasible time") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = oracle::random_channel_scenario(rng, 8);
    Terminal dest = kTerminals[static_cast<std::size_t>(u(rng) * 3)];
    double from = 30 * u(rng);
    auto a = s.timeline.next_feasible_arrival(dest, from, 1e6);
    REQUIRE(a);
    CHECK(s.timeline.arrival_feasible(dest, *a));
    for (double t = from; t < *a - 1e-6; t += 0.01) CHECK_FALSE(s.timeline.arrival_feasible(dest, t));
    bool cape = u(rng) < 0.5;
    auto d = s.timeline.next_feasible_departure(dest, from, cape, s.tides, 390);
    REQUIRE(d);
    CHECK(s.timeline.departure_feasible(dest, *d, cape, s.tides));
    for (double t = from; t < *d - 1e-6; t += 0.01)
      CHECK_FALSE(s.timeline.departure_feasible(dest, t, cape, s.tides));
    double upto = from + 10;
    auto l = s.timeline.latest_feasible_arrival(dest, upto, from);
    if (l) {
      CHECK(s.timeline.arrival_feasible(dest, *l));
      for (double t = upto; t > *l + 1e-6; t -= 0.01) CHECK_FALSE(s.timeline.arrival_feasible(dest, t));
    } else {
      for (double t = from; t <= upto; t += 0.01) CHECK_FALSE(s.timeline.arrival_feasible(dest, t));
    }
  }
}
