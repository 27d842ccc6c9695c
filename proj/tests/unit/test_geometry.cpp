#include <doctest.h>

#include <random>

#include "coalchain/geometry.hpp"
#include "geometry_oracles.hpp"

using namespace coalchain;

TEST_CASE("empty pad has one gap covering it") {
  PadGapSet pads(Pad::A, 2142);
  REQUIRE(pads.gaps().size() == 1);
  CHECK(pads.gaps()[0] == PadGap{Pad::A, 0, kForever, 0, 2142});
}

TEST_CASE("one placed stockpile leaves four maximal gaps") {
  PadGapSet pads(Pad::A, 100, 100);
  pads.occupy(20, 60, 30, 70);
  std::vector<PadGap> want{
      {Pad::A, 0, 20, 0, 100},
      {Pad::A, 0, 100, 0, 30},
      {Pad::A, 0, 100, 70, 100},
      {Pad::A, 60, 100, 0, 100},
  };
  auto got = pads.gaps();
  REQUIRE(got.size() == 4);
  for (const auto& g : want) {
    CHECK(std::find(got.begin(), got.end(), g) != got.end());
  }
  CHECK(pads.is_free(0, 20, 0, 100));
  CHECK_FALSE(pads.is_free(10, 30, 0, 100));
}

TEST_CASE("gap splitting matches brute-force maximal empty rectangles") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    auto c = oracle::random_grid_case(rng);
    CHECK(c.actual == c.expected);
  }
}

TEST_CASE("gap filter by height and span") {
  PadGapSet pads(Pad::B, 100, 100);
  pads.occupy(20, 60, 30, 70);
  auto tall = get_pad_gaps(pads, 80, 0, 10);
  REQUIRE(tall.size() == 2);
  auto late = get_pad_gaps(pads, 10, 50, 45);
  // Only the full-height and lower/upper strips reaching t = 100 qualify.
  CHECK(late.size() == 2);
}

TEST_CASE("reclaimer gaps") {
  ReclaimerSchedule r(Reclaimer::R459, 0);
  auto none = get_reclaimer_gaps(r, 10, 1800);
  REQUIRE(none.size() == 1);
  CHECK(none[0].unbounded());
  CHECK(none[0].prev_end == 0);
  CHECK(none[0].prev_position == 0);

  r.add({0, 5, 500, 1});
  r.add({15, 20, 500, 2});
  // 10 h between the jobs; a 12 h job does not fit, an 8 h job does.
  auto gaps12 = get_reclaimer_gaps(r, 12, 1800);
  for (const auto& g : gaps12) CHECK_FALSE((g.prev_end == 5 && g.next_start == 15));
  auto gaps8 = get_reclaimer_gaps(r, 8, 1800);
  CHECK(std::any_of(gaps8.begin(), gaps8.end(),
                    [](const ReclaimerGap& g) { return g.prev_end == 5 && g.next_start == 15; }));
  r.remove_stockpile(1);
  CHECK(r.jobs().size() == 1);
}

TEST_CASE("reclaimer gap points are reachable from both anchors") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  const double v = 1800;
  for (int i = 0; i < 200; ++i) {
    ReclaimerSchedule r(Reclaimer::R411, 0);
    double clock = 0;
    for (int j = 0; j < 4; ++j) {
      clock += 2 + 20 * u(rng);
      double len = 1 + 10 * u(rng);
      r.add({clock, clock + len, 2000 * u(rng), j});
      clock += len;
    }
    double dur = 1 + 6 * u(rng);
    for (const auto& g : get_reclaimer_gaps(r, dur, v)) {
      if (g.unbounded()) continue;
      // Sample points inside the gap; every one must be reachable both ways.
      for (int k = 0; k < 50; ++k) {
        double t = g.prev_end + (g.next_start - g.prev_end) * u(rng);
        double y = 2000 * u(rng);
        if (!oracle::in_gap(g, t, y, v)) continue;
        CHECK(std::abs(y - g.prev_position) <= v * (t - g.prev_end) + 1e-6);
        CHECK(std::abs(g.next_position - y) <= v * (g.next_start - t) + 1e-6);
      }
      CHECK(g.next_start - g.prev_end - dur >=
            std::abs(g.next_position - g.prev_position) / v - 1e-9);
    }
  }
}

TEST_CASE("earliest reclaim in an empty system is the stack end") {
  ReclaimContext ctx;
  ctx.duration = 10;
  ctx.length = 210;
  ctx.not_before = 100;
  PadGap pad{Pad::A, 0, kForever, 0, 2142};
  ReclaimerGap gap{Reclaimer::R459, 0, 0, kForever, 0};
  auto t = earliest_reclaim_time(ctx, pad, gap, 1000);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(100));
  auto edge = earliest_reclaim_edge(ctx, pad, gap);
  REQUIRE(edge);
  CHECK(edge->start == doctest::Approx(100));
  CHECK(edge->low == doctest::Approx(105));
  CHECK(edge->high == doctest::Approx(2142 - 105));
}

TEST_CASE("travel from the anchor delays the start") {
  ReclaimContext ctx;
  ctx.duration = 5;
  ctx.length = 100;
  PadGap pad{Pad::A, 0, kForever, 0, 2000};
  ReclaimerGap gap{Reclaimer::R459, 10, 0, kForever, 0};
  auto t = earliest_reclaim_time(ctx, pad, gap, 1800);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(11));
}

TEST_CASE("partner job blocks until its trapezium clears") {
  // Low-side reclaimer wants position 1000; the partner reclaims at 400 over
  // [10, 20). The candidate must start after 20 + 600/1800 h.
  std::vector<ReclaimJob> partner{{10, 20, 400, 9}};
  ReclaimContext ctx;
  ctx.duration = 4;
  ctx.length = 100;
  ctx.not_before = 12;
  ctx.low_side = true;
  ctx.partner_jobs = &partner;
  PadGap pad{Pad::A, 0, kForever, 0, 2000};
  ReclaimerGap gap{Reclaimer::R459, 0, 0, kForever, 0};
  auto t = earliest_reclaim_time(ctx, pad, gap, 1000);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(20 + 600.0 / 1800));
  // Below the partner there is no conflict.
  auto below = earliest_reclaim_time(ctx, pad, gap, 300);
  REQUIRE(below);
  CHECK(*below == doctest::Approx(12));
  // Finishing early enough before the partner starts is also fine.
  ctx.not_before = 0;
  auto early = earliest_reclaim_time(ctx, pad, gap, 1000);
  REQUIRE(early);
  CHECK(*early == doctest::Approx(1000.0 / 1800));
}

TEST_CASE("saturated ship loaders defer the start to the first completion") {
  std::vector<std::pair<Hours, Hours>> blocked{{0, 30}};
  ReclaimContext ctx;
  ctx.duration = 6;
  ctx.length = 100;
  ctx.not_before = 10;
  ctx.blocked = &blocked;
  PadGap pad{Pad::A, 0, kForever, 0, 2000};
  ReclaimerGap gap{Reclaimer::R459, 0, 500, kForever, 500};
  auto t = earliest_reclaim_time(ctx, pad, gap, 500);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(30));
}

TEST_CASE("daily outbound capacity shifts the start") {
  CapacityLedger ledger;
  auto dot = ledger.add_resource("DOT", 100000);
  ledger.reserve(dot, 0, 100000);       // day 0 full
  ledger.reserve(dot, 1, 100000 - 11600);  // day 1 has two hours left
  ReclaimContext ctx;
  ctx.duration = 5;
  ctx.rate = 5800;
  ctx.length = 100;
  ctx.ledger = &ledger;
  ctx.outbound = dot;
  PadGap pad{Pad::A, 0, kForever, 0, 2000};
  ReclaimerGap gap{Reclaimer::R459, 0, 500, kForever, 500};
  auto t = earliest_reclaim_time(ctx, pad, gap, 500);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(46));
}

TEST_CASE("critical heights attain the sampled minimum") {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int i = 0; i < 150; ++i) {
    auto c = oracle::random_reclaim_case(rng);
    c.ctx.partner_jobs = &c.partner;
    c.ctx.blocked = &c.blocked;
    if (c.ctx.ledger) c.ctx.ledger = &c.ledger;
    auto heights = get_critical_heights(c.ctx, c.pad, c.gap);
    std::optional<Hours> best;
    for (Metres h : heights) {
      auto t = earliest_reclaim_time(c.ctx, c.pad, c.gap, h);
      REQUIRE(t);
      if (!best || *t < *best) best = t;
    }
    auto sampled = oracle::sample_heights(c);
    CHECK(sampled.any == best.has_value());
    if (best && sampled.any) {
      ++compared;
      CHECK(*best <= sampled.best + 1e-9);
      CHECK(sampled.best - *best <= 1e-6);
    }
  }
  CHECK(compared > 30);
}

TEST_CASE("polygon clipping and area") {
  Polygon sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(polygon_area(sq) == doctest::Approx(4));
  auto half = clip_half_plane(sq, 1, 1, 2);  // t + y <= 2
  CHECK(polygon_area(half) == doctest::Approx(2));
  CHECK(clip_half_plane(sq, 1, 0, -1).empty());
}

TEST_CASE("flexibility loss degenerate and symmetric cases") {
  const double v = 1800;
  ReclaimerGap home{Reclaimer::R459, 0, 0, kForever, 0};
  auto zero = flexibility_loss(home, 0, 0, 0, v, 2000, true, {});
  CHECK(zero.total() == doctest::Approx(0).epsilon(1e-12));

  ReclaimerGap sym{Reclaimer::R459, 0, 1000, 20, 1000};
  auto l = flexibility_loss(sym, 8, 4, 1000, v, 2000, true, {});
  CHECK(l.before == doctest::Approx(l.after));
  CHECK(l.before > 0);
}

TEST_CASE("flexibility loss matches sampled area") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  const double v = 1800;
  const Metres track = 2200;
  for (int i = 0; i < 20; ++i) {
    ReclaimerSchedule partner(Reclaimer::R460, track);
    double clock = 0;
    for (int j = 0; j < 3; ++j) {
      clock += 5 * u(rng);
      double len = 1 + 5 * u(rng);
      partner.add({clock, clock + len, track * u(rng), j});
      clock += len;
    }
    ReclaimerGap gap{Reclaimer::R459, 2 * u(rng), track * u(rng), kForever, 0};
    double dur = 2 + 8 * u(rng);
    double h = track * u(rng);
    double start = gap.prev_end + std::abs(h - gap.prev_position) / v + 3 * u(rng);
    if (u(rng) < 0.6) {
      gap.next_position = track * u(rng);
      gap.next_start = start + dur + std::abs(gap.next_position - h) / v + 3 * u(rng);
    } else {
      gap.next_position = gap.prev_position;
    }
    auto pg = all_reclaimer_gaps(partner);
    auto exact = flexibility_loss(gap, start, dur, h, v, track, true, pg);
    auto approx = oracle::sampled_loss(gap, start, dur, h, v, track, true, pg, 400000);
    CHECK(approx.total() == doctest::Approx(exact.total()).epsilon(0.01));
  }
}

TEST_CASE("placement order") {
  PlacementKey a{10.9, 100, Pad::A, 0, Reclaimer::R459, 0};
  PlacementKey b{11.1, 1, Pad::A, 0, Reclaimer::R459, 0};
  CHECK(placement_less(a, b));
  PlacementKey c{10.2, 5, Pad::B, 0, Reclaimer::R459, 0};
  PlacementKey d{10.1, 7, Pad::A, 0, Reclaimer::R459, 0};
  CHECK(placement_less(c, d));
  PlacementKey e = c;
  CHECK_FALSE(placement_less(c, e));
  CHECK_FALSE(placement_less(e, c));
  e.pad = Pad::C;
  CHECK(placement_less(c, e));
}
