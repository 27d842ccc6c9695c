#include <doctest.h>

#include <cctype>

#include "coalchain/generator.hpp"
#include "coalchain/greedy.hpp"
#include "coalchain/validate.hpp"

using namespace coalchain;

namespace {

Instance base_instance() {
  Instance inst;
  inst.rail = RailGraph::default_network();
  inst.tides = TideTable::semi_diurnal(5, 5000);
  return inst;
}

bool mentions(const std::string& msg, int stockpile) {
  const std::string id = std::to_string(stockpile);
  for (std::size_t pos = msg.find(id); pos != std::string::npos; pos = msg.find(id, pos + 1)) {
    const bool left = pos == 0 || !std::isdigit(static_cast<unsigned char>(msg[pos - 1]));
    const std::size_t after = pos + id.size();
    const bool right = after == msg.size() || !std::isdigit(static_cast<unsigned char>(msg[after]));
    if (left && right) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("empty instance and solution are clean") {
  Instance inst;
  CHECK(validate(inst, Solution::empty_for(inst)).clean());
}

TEST_CASE("unscheduled vessels are reported") {
  Instance inst = base_instance();
  inst.add_vessel(Terminal::NCT, 0, {{{"NW", 58000}}});
  inst.add_vessel(Terminal::CCT, 3, {{{"NW", 30000}}});
  auto report = validate(inst, Solution::empty_for(inst));
  CHECK_FALSE(report.clean());
  CHECK(report.unscheduled_vessels == std::vector<int>{0, 1});
  CHECK(report.violations.empty());
}

TEST_CASE("mismatched sizes are structural") {
  Instance inst = base_instance();
  inst.add_vessel(Terminal::NCT, 0, {{{"NW", 58000}}});
  Solution sol;
  auto report = validate(inst, sol);
  CHECK_FALSE(report.structural.empty());
}

TEST_CASE("departure before loading ends is one timing violation") {
  Instance inst = base_instance();
  int v = inst.add_vessel(Terminal::NCT, 0, {{{"NW", 58000}}});
  Solution sol = slars(inst, {v});
  REQUIRE(validate(inst, sol).clean());
  sol.vessels[v]->departure = sol.stockpiles[0]->reclaim_end - 0.5;
  auto report = validate(inst, sol);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::VesselTiming);
  CHECK(to_string(report.violations[0].kind) == "vessel-timing");
}

TEST_CASE("stacked stockpiles are one pad overlap naming both") {
  GeneratorConfig cfg;
  cfg.vessels = 40;
  cfg.seed = 5;
  Instance inst = generate_instance(cfg);
  Solution sol = slars(inst, inst.eta_order());
  REQUIRE(validate(inst, sol).clean());

  // Move one KCT stockpile onto another that is on the pad at the same time.
  int a = -1, b = -1;
  for (std::size_t i = 0; i < sol.stockpiles.size() && a < 0; ++i) {
    for (std::size_t j = i + 1; j < sol.stockpiles.size(); ++j) {
      const auto& x = sol.stockpiles[i];
      const auto& y = sol.stockpiles[j];
      if (!x->kct || !y->kct || x->kct->pad == y->kct->pad) continue;
      if (x->build_start() < y->reclaim_end && y->build_start() < x->reclaim_end) {
        a = static_cast<int>(i);
        b = static_cast<int>(j);
        break;
      }
    }
  }
  REQUIRE(a >= 0);
  auto& moved = *sol.stockpiles[b]->kct;
  moved.pad = sol.stockpiles[a]->kct->pad;
  moved.position = sol.stockpiles[a]->kct->position;
  moved.reclaimer = sol.stockpiles[a]->kct->reclaimer;
  auto report = validate(inst, sol);
  REQUIRE(report.structural.empty());
  REQUIRE(report.count(ViolationKind::PadOverlap) == 1);
  for (const auto& vio : report.violations) {
    if (vio.kind != ViolationKind::PadOverlap) continue;
    CHECK(mentions(vio.message, a));
    CHECK(mentions(vio.message, b));
  }
}

TEST_CASE("arrival before ETA and short reclaim are caught") {
  Instance inst = base_instance();
  int v = inst.add_vessel(Terminal::NCT, 100, {{{"NW", 58000}}});
  Solution sol = slars(inst, {v});
  REQUIRE(validate(inst, sol).clean());

  Solution early = sol;
  early.vessels[v]->arrival = 99;
  CHECK(validate(inst, early).count(ViolationKind::VesselTiming) >= 1);

  Solution fast = sol;
  fast.stockpiles[0]->reclaim_end -= 1;
  CHECK(validate(inst, fast).count(ViolationKind::ReclaimDuration) == 1);

  Solution light = sol;
  light.stockpiles[0]->arrivals.back().tonnes -= 100;
  CHECK(validate(inst, light).count(ViolationKind::Tonnage) == 1);
}

TEST_CASE("berths are counted") {
  Instance inst = base_instance();
  for (int k = 0; k < 3; ++k) inst.add_vessel(Terminal::CCT, 0, {{{"NW", 20000}}});
  Solution sol = slars(inst, {0, 1, 2});
  REQUIRE(validate(inst, sol).clean());
  // Force all three onto the two CCT berths at once.
  for (int v = 1; v < 3; ++v) {
    const Hours shift = sol.vessels[0]->arrival - sol.vessels[v]->arrival;
    sol.vessels[v]->arrival += shift;
    sol.vessels[v]->departure += shift;
    sol.stockpiles[v]->reclaim_start += shift;
    sol.stockpiles[v]->reclaim_end += shift;
  }
  CHECK(validate(inst, sol).count(ViolationKind::Berths) >= 1);
}
