#include <doctest.h>

#include <cmath>

#include "coalchain/errors.hpp"
#include "coalchain/model.hpp"

using namespace coalchain;

TEST_CASE("stockpile length") {
  CHECK(stockpile_length(100000) == 210);
  CHECK(stockpile_length(0) == 40);
  CHECK(stockpile_length(67342) == 155);
  CHECK_THROWS_AS(stockpile_length(-1), InputError);
  Metres prev = 0;
  for (Tonnes t = 0; t <= 200000; t += 137) {
    Metres l = stockpile_length(t);
    CHECK(l >= prev);
    CHECK(std::fmod(l, 5.0) == 0.0);
    prev = l;
  }
}

TEST_CASE("tidal windows") {
  TideTable one({100});
  CHECK(one.window_for(100).start == doctest::Approx(98.5));
  CHECK(one.window_for(100).end == doctest::Approx(100.5));
  CHECK(one.window_for(98.5).start == doctest::Approx(98.5));
  CHECK(one.in_window(98.5));
  CHECK_FALSE(one.in_window(100.5));
  TideTable two({100, 112.42});
  CHECK(two.window_for(101).start == doctest::Approx(110.92));
  CHECK(two.window_for(101).end == doctest::Approx(112.92));
  CHECK_THROWS_AS(one.window_for(101), HorizonError);
  CHECK_THROWS_AS(TideTable({10, 11}), InputError);
}

TEST_CASE("earliest departure") {
  TerminalConfig kct = TerminalConfig::defaults(Terminal::KCT);
  TideTable tides({12, 24.42});
  CHECK(earliest_departure(100, 58000, kct, tides) == doctest::Approx(110.0).epsilon(1e-12));
  // Cape finishing inside a window leaves right away.
  TideTable inside({21});
  CHECK(earliest_departure(0, 116000, kct, inside) == doctest::Approx(20.0));
  // Cape finishing between windows waits for the next one.
  CHECK(earliest_departure(0, 116000, kct, tides) == doctest::Approx(22.92));
  CHECK_THROWS_AS(earliest_departure(0, 0, kct, tides), InputError);
  // Threshold is inclusive.
  CHECK(earliest_departure(0, 100000, kct, tides) >= 100000 / 5800.0);
}

TEST_CASE("average delay") {
  Instance inst;
  inst.tides = TideTable::semi_diurnal(3, 500);
  inst.add_vessel(Terminal::NCT, 0, {{{"NW", 58000}}});
  inst.add_vessel(Terminal::NCT, 10, {{{"NW", 58000}}});
  Solution sol = Solution::empty_for(inst);
  CHECK_THROWS_AS(average_delay(sol, inst), IncompleteSolutionError);
  double d0 = earliest_departure(inst, 0);
  double d1 = earliest_departure(inst, 1);
  sol.vessels[0] = VesselSchedule{0, d0 + 2};
  sol.vessels[1] = VesselSchedule{10, d1 + 4};
  CHECK(average_delay(sol, inst) == doctest::Approx(3.0));
  CHECK(average_delay_since(sol, inst, 5) == doctest::Approx(4.0));
  CHECK(average_delay_since(sol, inst, 50) == 0.0);
  sol.vessels[0]->departure = d0;
  sol.vessels[1]->departure = d1;
  CHECK(average_delay(sol, inst) == 0.0);
}

TEST_CASE("instance helpers") {
  Instance inst;
  int a = inst.add_vessel(Terminal::KCT, 50, {{{"NW", 60000}, {"ULN", 50000}}, {{"MUS", 10000}}});
  int b = inst.add_vessel(Terminal::CCT, 20, {{{"NW", 30000}}});
  CHECK(inst.vessel_tonnes(a) == 120000);
  CHECK(inst.is_cape(a));
  CHECK_FALSE(inst.is_cape(b));
  CHECK(inst.eta_order() == std::vector<int>{b, a});
  CHECK(inst.stockpiles[1].vessel == a);
}

TEST_CASE("pads, streams and reclaimers") {
  KctConfig k;
  CHECK(stream_of(Pad::A) == StackerStream::One);
  CHECK(stream_of(Pad::C) == StackerStream::Two);
  CHECK(serves(Reclaimer::R411, Pad::D));
  CHECK_FALSE(serves(Reclaimer::R459, Pad::C));
  CHECK(partner_of(Reclaimer::R412) == Reclaimer::R411);
  CHECK(k.home_position(Reclaimer::R459) == 0);
  CHECK(k.home_position(Reclaimer::R460) == 2142);
  CHECK(k.home_position(Reclaimer::R412) == 2174);
  CHECK(k.reclaim_rate() == doctest::Approx(5800));
}

TEST_CASE("solution hash is sensitive to every value") {
  Instance inst;
  inst.add_vessel(Terminal::NCT, 0, {{{"NW", 58000}}});
  Solution s = Solution::empty_for(inst);
  auto h0 = s.hash();
  s.vessels[0] = VesselSchedule{1, 2};
  auto h1 = s.hash();
  CHECK(h0 != h1);
  s.vessels[0]->departure = std::nextafter(2.0, 3.0);
  CHECK(s.hash() != h1);
}
