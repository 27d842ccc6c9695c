#include <doctest.h>

#include <deque>
#include <random>

#include "coalchain/errors.hpp"
#include "coalchain/rail.hpp"

using namespace coalchain;

namespace {

// Plain forward BFS over node names.
int bfs_distance(const RailGraph& g, const std::string& from, const std::string& to) {
  std::map<std::string, int> dist{{from, 0}};
  std::deque<std::string> q{from};
  while (!q.empty()) {
    auto n = q.front();
    q.pop_front();
    if (n == to) return dist[n];
    for (const auto& a : g.arcs()) {
      if (a.from == n && !dist.count(a.to)) {
        dist[a.to] = dist[n] + 1;
        q.push_back(a.to);
      }
    }
  }
  return -1;
}

Instance line_instance(Tonnes arc_cap, Tonnes second_cap = 1e9) {
  Instance inst;
  RailGraph g;
  for (auto n : {"MINE", "MINE2", "J", "CCT", "KCT", "NCT"}) g.add_node(n);
  g.add_arc({"a1", "MINE", "J", arc_cap});
  g.add_arc({"a2", "MINE2", "J", second_cap});
  g.add_arc({"j-c", "J", "CCT", 1e9});
  g.add_arc({"j-k", "J", "KCT", 1e9});
  g.add_arc({"j-n", "J", "NCT", 1e9});
  g.map_load_point("M", "MINE");
  g.map_load_point("M2", "MINE2");
  g.finalize();
  inst.rail = g;
  return inst;
}

}  // namespace

TEST_CASE("default network routes") {
  RailGraph g = RailGraph::default_network();
  const Route& r = g.route("NW", Terminal::CCT);
  CHECK(static_cast<int>(r.arcs.size()) == bfs_distance(g, "NW", "CCT"));
  // The fewer-arc path to CCT branches off at MAI rather than via SAN.
  std::vector<std::string> ids;
  for (int a : r.arcs) ids.push_back(g.arcs()[a].id);
  CHECK(ids == std::vector<std::string>{"NW-WER", "WER-MUSJ", "MUSJ-SINJ", "SINJ-MAI", "MAI-ISL",
                                        "ISL-CCT"});
  for (const auto& lp : g.load_point_names()) {
    for (Terminal t : kTerminals) {
      const Route& route = g.route(lp, t);
      CHECK(g.arcs()[route.arcs.back()].to == to_string(t));
    }
  }
}

TEST_CASE("route ties break on arc ids") {
  RailGraph g;
  for (auto n : {"M", "X", "Y", "CCT", "KCT", "NCT"}) g.add_node(n);
  g.add_arc({"b", "M", "X", 1});
  g.add_arc({"a", "M", "Y", 1});
  g.add_arc({"c", "X", "CCT", 1});
  g.add_arc({"d", "Y", "CCT", 1});
  g.add_arc({"e", "X", "KCT", 1});
  g.add_arc({"f", "X", "NCT", 1});
  g.map_load_point("M", "M");
  g.finalize();
  auto r = g.route("M", Terminal::CCT);
  CHECK(g.arcs()[r.arcs[0]].id == "a");
  g.add_node("Z");
  g.map_load_point("Z", "Z");
  CHECK_THROWS_AS(g.finalize(), InstanceError);
}

TEST_CASE("route lengths equal BFS distance on random graphs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    RailGraph g;
    std::uniform_int_distribution<int> nn(3, 10);
    int n = nn(rng);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
    for (auto t : {"CCT", "KCT", "NCT"}) names.push_back(t);
    for (const auto& s : names) g.add_node(s);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(names.size()) - 1);
    int arcs = 0;
    // A chain guarantees reachability; random extra arcs create alternatives.
    for (int i = 0; i + 1 < n; ++i) g.add_arc({"c" + std::to_string(i), names[i], names[i + 1], 1});
    for (auto t : {"CCT", "KCT", "NCT"}) g.add_arc({std::string("t") + t, names[n - 1], t, 1});
    for (int k = 0; k < 2 * n; ++k) {
      int a = pick(rng), b = pick(rng);
      if (a == b) continue;
      g.add_arc({"x" + std::to_string(arcs++), names[a], names[b], 1});
    }
    g.map_load_point("LP", names[0]);
    g.finalize();
    for (Terminal t : kTerminals) {
      auto r = g.route("LP", t);
      CHECK(static_cast<int>(r.arcs.size()) == bfs_distance(g, names[0], std::string(to_string(t))));
      CHECK(r.arcs == g.resolve_route("LP", t).arcs);
    }
  }
}

TEST_CASE("residual path capacity") {
  Instance inst = line_instance(50000);
  inst.rail = RailGraph();
  RailGraph g;
  for (auto n : {"M", "J", "CCT", "KCT", "NCT"}) g.add_node(n);
  g.add_arc({"m-j", "M", "J", 50000});
  g.add_arc({"j-c", "J", "CCT", 80000});
  g.add_arc({"j-k", "J", "KCT", 80000});
  g.add_arc({"j-n", "J", "NCT", 80000});
  g.map_load_point("M", "M");
  g.finalize();
  inst.rail = g;
  CapacityLedger ledger;
  auto map = ResourceMap::install(inst, ledger);
  const Route& r = inst.rail.route("M", Terminal::CCT);
  CHECK(residual_path_capacity(r, 0, ledger, map) == 50000);
  ledger.reserve(map.arcs[0], 0, 20000);
  CHECK(residual_path_capacity(r, 0, ledger, map) == 30000);
  CHECK(residual_path_capacity(r, 1, ledger, map) == 50000);
}

TEST_CASE("residual matches running sums on random reservations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    CapacityLedger ledger;
    std::vector<Tonnes> caps;
    for (int i = 0; i < 4; ++i) caps.push_back(ledger.add_resource("r", 10000 + 90000 * u(rng)));
    std::vector<std::vector<Tonnes>> sums(4, std::vector<Tonnes>(10, 0.0));
    for (int k = 0; k < 60; ++k) {
      int r = static_cast<int>(u(rng) * 4);
      int d = static_cast<int>(u(rng) * 10);
      Tonnes w = 20000 * u(rng);
      ledger.reserve(r, d, w);
      sums[r][d] += w;
    }
    for (int r = 0; r < 4; ++r)
      for (int d = 0; d < 10; ++d)
        CHECK(ledger.residual(r, d) == std::max(0.0, ledger.capacity(r) - sums[r][d]));
  }
}

TEST_CASE("ledger rollback is bit-exact") {
  CapacityLedger ledger;
  auto r = ledger.add_resource("x", 1000);
  ledger.reserve(r, 3, 0.1);
  ledger.reserve(r, 3, 0.2);
  Tonnes before = ledger.used(r, 3);
  auto mark = ledger.mark();
  ledger.reserve(r, 3, 0.7);
  ledger.reserve(r, 9, 5);
  ledger.rollback(mark);
  CHECK(ledger.used(r, 3) == before);
  CHECK(ledger.used(r, 9) == 0.0);
}

TEST_CASE("greedy railing follows the path residual") {
  Instance inst = line_instance(50000);
  inst.add_vessel(Terminal::NCT, 300, {{{"M", 120000}}});
  CapacityLedger ledger;
  auto map = ResourceMap::install(inst, ledger);
  RailingRequest req{0, Terminal::NCT, std::nullopt, railing_start_day(300), 1000};
  CHECK(req.start_day == 3);
  auto plan = plan_railing(inst, req, ledger, map);
  REQUIRE(plan);
  REQUIRE(plan->arrivals.size() == 3);
  CHECK(plan->arrivals[0].tonnes == 50000);
  CHECK(plan->arrivals[0].time == 72);
  CHECK(plan->arrivals[1].tonnes == 50000);
  CHECK(plan->arrivals[2].tonnes == 20000);
  CHECK(plan->arrivals[2].time == 120);
  CHECK(plan->effective_build_end() == 144);
}

TEST_CASE("components sharing an arc see each other's reservations") {
  Instance inst = line_instance(1e9);
  // Inbound throughput is the shared bottleneck.
  inst.terminals[index(Terminal::NCT)].daily_inbound = 100000;
  inst.add_vessel(Terminal::NCT, 0, {{{"M", 70000}, {"M2", 70000}}});
  CapacityLedger ledger;
  auto map = ResourceMap::install(inst, ledger);
  auto plan = plan_railing(inst, {0, Terminal::NCT, std::nullopt, 0, 100}, ledger, map);
  REQUIRE(plan);
  REQUIRE(plan->arrivals.size() == 3);
  CHECK(plan->arrivals[1].component == 1);
  CHECK(plan->arrivals[1].tonnes == 30000);
  CHECK(plan->arrivals[1].time == 0);
  CHECK(plan->arrivals[2].tonnes == 40000);
  CHECK(plan->arrivals[2].time == 24);
  auto mark = ledger.mark();
  commit_railing(*plan, ledger);
  CHECK(ledger.residual(map.inbound[index(Terminal::NCT)], 0) == 0);
  ledger.rollback(mark);
  CHECK(ledger.residual(map.inbound[index(Terminal::NCT)], 0) == 100000);
}

TEST_CASE("zero-tonnage component rails nothing") {
  Instance inst = line_instance(50000);
  inst.add_vessel(Terminal::CCT, 0, {{{"M", 0}}});
  CapacityLedger ledger;
  auto map = ResourceMap::install(inst, ledger);
  auto plan = plan_railing(inst, {0, Terminal::CCT, std::nullopt, 0, 100}, ledger, map);
  REQUIRE(plan);
  CHECK(plan->arrivals.empty());
}

TEST_CASE("span limit shifts the start") {
  Instance inst = line_instance(50000);
  inst.add_vessel(Terminal::NCT, 0, {{{"M", 200000}}}, 5);
  CapacityLedger ledger;
  auto map = ResourceMap::install(inst, ledger);
  // Days 2 and 4 are nearly full, which stretches early builds past five days.
  ledger.reserve(map.arcs[0], 2, 45000);
  ledger.reserve(map.arcs[0], 4, 45000);
  RailingRequest req{0, Terminal::NCT, std::nullopt, 0, 100};
  auto direct = plan_railing(inst, req, ledger, map);
  REQUIRE_FALSE(direct);
  auto shifted = plan_railing_shifting(inst, req, ledger, map);
  REQUIRE(shifted);
  CHECK(shifted->build_start() == day_start(3));
  CHECK(day_of(shifted->build_last()) == 7);
}

TEST_CASE("railing start day") {
  CHECK(railing_start_day(100) == 0);
  CHECK(railing_start_day(240) == 0);
  CHECK(railing_start_day(241) == 1);
  CHECK(railing_start_day(300, 100) == 5);
  CHECK(railing_start_day(300, 48) == 3);
}
