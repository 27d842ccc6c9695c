#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "coalchain/units.hpp"

namespace coalchain {

struct RailArc {
  std::string id;
  std::string from;
  std::string to;
  Tonnes capacity = 0;  // tonnes per day
};

/// Ordered arc indices from a load point's node to a terminal node.
struct Route {
  std::vector<int> arcs;
};

/// Directed rail network. Terminal nodes are named "CCT", "KCT" and "NCT".
/// Mine load points map onto graph nodes.
///
/// Routes are the minimum-arc-count paths; among equally short paths the one
/// whose arc-id sequence is lexicographically smallest wins. `finalize()`
/// resolves and caches every (load point, terminal) route so a finalized
/// graph is safe to share between threads.
class RailGraph {
 public:
  void add_node(const std::string& name);
  void add_arc(RailArc arc);
  void map_load_point(const std::string& load_point, const std::string& node);

  /// Resolves all routes. Throws InstanceError if some load point cannot
  /// reach some terminal.
  void finalize();

  /// Fresh min-arc-count path search (no cache).
  Route resolve_route(const std::string& load_point, Terminal terminal) const;

  /// Cached route; graph must be finalized.
  const Route& route(const std::string& load_point, Terminal terminal) const;

  bool has_load_point(const std::string& load_point) const;

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<RailArc>& arcs() const { return arcs_; }
  const std::map<std::string, std::string>& load_points() const { return load_points_; }
  std::vector<std::string> load_point_names() const;

  /// The built-in network: load-point regions feeding a trunk line to the
  /// port, with a short branch to CCT.
  static RailGraph default_network();

  friend bool operator==(const RailGraph& a, const RailGraph& b);

 private:
  int node_index(const std::string& name) const;

  std::vector<std::string> nodes_;
  std::vector<RailArc> arcs_;
  std::map<std::string, std::string> load_points_;
  std::map<std::string, std::array<Route, 3>> routes_;
};

bool operator==(const RailArc& a, const RailArc& b);

}  // namespace coalchain
