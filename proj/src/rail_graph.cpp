#include "coalchain/rail_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "coalchain/errors.hpp"

namespace coalchain {

bool operator==(const RailArc& a, const RailArc& b) {
  return a.id == b.id && a.from == b.from && a.to == b.to && a.capacity == b.capacity;
}

bool operator==(const RailGraph& a, const RailGraph& b) {
  return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_ && a.load_points_ == b.load_points_;
}

void RailGraph::add_node(const std::string& name) {
  if (std::find(nodes_.begin(), nodes_.end(), name) != nodes_.end()) {
    throw InputError("duplicate rail node '" + name + "'");
  }
  nodes_.push_back(name);
  routes_.clear();
}

void RailGraph::add_arc(RailArc arc) {
  node_index(arc.from);
  node_index(arc.to);
  if (!(arc.capacity >= 0)) throw InputError("rail arc '" + arc.id + "' has negative capacity");
  for (const auto& a : arcs_) {
    if (a.id == arc.id) throw InputError("duplicate rail arc '" + arc.id + "'");
  }
  arcs_.push_back(std::move(arc));
  routes_.clear();
}

void RailGraph::map_load_point(const std::string& load_point, const std::string& node) {
  node_index(node);
  load_points_[load_point] = node;
  routes_.clear();
}

int RailGraph::node_index(const std::string& name) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) throw InputError("unknown rail node '" + name + "'");
  return static_cast<int>(it - nodes_.begin());
}

bool RailGraph::has_load_point(const std::string& load_point) const {
  return load_points_.count(load_point) != 0;
}

std::vector<std::string> RailGraph::load_point_names() const {
  std::vector<std::string> names;
  for (const auto& [name, node] : load_points_) names.push_back(name);
  return names;
}

Route RailGraph::resolve_route(const std::string& load_point, Terminal terminal) const {
  auto lp = load_points_.find(load_point);
  if (lp == load_points_.end()) throw InstanceError("unknown load point '" + load_point + "'");
  const int source = node_index(lp->second);
  const int target = node_index(std::string(to_string(terminal)));

  // Arc-count distance of every node to the target, by reverse BFS.
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(nodes_.size(), kUnreached);
  std::vector<std::vector<int>> incoming(nodes_.size());
  std::vector<std::vector<int>> outgoing(nodes_.size());
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    incoming[node_index(arcs_[a].to)].push_back(static_cast<int>(a));
    outgoing[node_index(arcs_[a].from)].push_back(static_cast<int>(a));
  }
  std::deque<int> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    int n = queue.front();
    queue.pop_front();
    for (int a : incoming[n]) {
      int from = node_index(arcs_[a].from);
      if (dist[from] == kUnreached) {
        dist[from] = dist[n] + 1;
        queue.push_back(from);
      }
    }
  }
  if (dist[source] == kUnreached) {
    throw InstanceError("load point '" + load_point + "' cannot reach " +
                        std::string(to_string(terminal)));
  }

  // Walk forward along shortest-path arcs, always taking the smallest arc id;
  // this yields the lexicographically smallest arc-id sequence.
  Route route;
  int node = source;
  while (node != target) {
    int best = -1;
    for (int a : outgoing[node]) {
      int to = node_index(arcs_[a].to);
      if (dist[to] != dist[node] - 1) continue;
      if (best < 0 || arcs_[a].id < arcs_[best].id) best = a;
    }
    route.arcs.push_back(best);
    node = node_index(arcs_[best].to);
  }
  return route;
}

void RailGraph::finalize() {
  routes_.clear();
  for (const auto& [lp, node] : load_points_) {
    std::array<Route, 3> r;
    for (Terminal t : kTerminals) r[index(t)] = resolve_route(lp, t);
    routes_.emplace(lp, std::move(r));
  }
}

const Route& RailGraph::route(const std::string& load_point, Terminal terminal) const {
  auto it = routes_.find(load_point);
  if (it == routes_.end()) {
    throw InstanceError("no resolved route for load point '" + load_point +
                        "' (unknown load point or graph not finalized)");
  }
  return it->second[index(terminal)];
}

RailGraph RailGraph::default_network() {
  RailGraph g;
  for (const char* n : {"NW", "ULN", "MUS", "RAV", "NDL", "SIN", "STR", "WER", "MUSJ", "SINJ",
                        "MAI", "SAN", "ISL", "CCT", "KCT", "NCT"}) {
    g.add_node(n);
  }
  // Capacities in t/day. Trunk sections carry most export coal.
  const struct {
    const char* id;
    const char* from;
    const char* to;
    Tonnes cap;
  } arcs[] = {
      {"NW-WER", "NW", "WER", 90000},      {"WER-MUSJ", "WER", "MUSJ", 100000},
      {"ULN-MUSJ", "ULN", "MUSJ", 120000}, {"MUS-MUSJ", "MUS", "MUSJ", 110000},
      {"MUSJ-SINJ", "MUSJ", "SINJ", 280000}, {"RAV-SINJ", "RAV", "SINJ", 100000},
      {"NDL-SINJ", "NDL", "SINJ", 90000},  {"SIN-SINJ", "SIN", "SINJ", 90000},
      {"SINJ-MAI", "SINJ", "MAI", 450000}, {"STR-MAI", "STR", "MAI", 80000},
      {"MAI-SAN", "MAI", "SAN", 520000},   {"MAI-ISL", "MAI", "ISL", 100000},
      {"SAN-ISL", "SAN", "ISL", 60000},    {"ISL-CCT", "ISL", "CCT", 110000},
      {"SAN-KCT", "SAN", "KCT", 500000},   {"SAN-NCT", "SAN", "NCT", 240000},
  };
  for (const auto& a : arcs) g.add_arc({a.id, a.from, a.to, a.cap});
  for (const char* lp : {"NW", "ULN", "MUS", "RAV", "NDL", "SIN", "STR"}) g.map_load_point(lp, lp);
  g.finalize();
  return g;
}

}  // namespace coalchain
