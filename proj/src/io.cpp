#include "coalchain/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coalchain/errors.hpp"

namespace coalchain {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

double number(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number()) throw InputError(std::string("field '") + key + "' must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string("field '") + key + "' must be finite");
  return x;
}

double non_negative(const Json& j, const char* key) {
  double x = number(j, key);
  if (x < 0) throw InputError(std::string("field '") + key + "' must not be negative");
  return x;
}

int integer(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw InputError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_string()) throw InputError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

void check_format(const Json& j, const char* kind) {
  if (!j.is_object() || j.value("format", "") != kind) {
    throw InputError(std::string("not a ") + kind + " file");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw InputError(std::string("unsupported ") + kind + " version");
  }
}

Json terminal_json(const TerminalConfig& c) {
  return {{"berths", c.berths},
          {"daily_inbound", c.daily_inbound},
          {"daily_outbound", c.daily_outbound},
          {"reclaim_rate", c.reclaim_rate},
          {"channel_minutes", c.channel_minutes}};
}

TerminalConfig terminal_from(const Json& j) {
  TerminalConfig c;
  c.berths = integer(j, "berths");
  if (c.berths < 1) throw InputError("a terminal needs at least one berth");
  c.daily_inbound = non_negative(j, "daily_inbound");
  c.daily_outbound = non_negative(j, "daily_outbound");
  c.reclaim_rate = non_negative(j, "reclaim_rate");
  if (c.reclaim_rate <= 0) throw InputError("reclaim rate must be positive");
  c.channel_minutes = non_negative(j, "channel_minutes");
  return c;
}

Json rail_json(const RailGraph& g) {
  Json arcs = Json::array();
  for (const auto& a : g.arcs()) {
    arcs.push_back({{"id", a.id}, {"from", a.from}, {"to", a.to}, {"capacity", a.capacity}});
  }
  Json lps = Json::object();
  for (const auto& [lp, node] : g.load_points()) lps[lp] = node;
  return {{"nodes", g.nodes()}, {"arcs", std::move(arcs)}, {"load_points", std::move(lps)}};
}

RailGraph rail_from(const Json& j) {
  RailGraph g;
  for (const auto& n : j.at("nodes")) g.add_node(n.get<std::string>());
  for (const auto& a : j.at("arcs")) {
    g.add_arc({text(a, "id"), text(a, "from"), text(a, "to"), non_negative(a, "capacity")});
  }
  for (const auto& [lp, node] : j.at("load_points").items()) {
    g.map_load_point(lp, node.get<std::string>());
  }
  g.finalize();
  return g;
}

Json instance_json(const Instance& inst) {
  Json vessels = Json::array();
  for (const auto& v : inst.vessels) {
    vessels.push_back({{"id", v.id},
                       {"terminal", to_string(v.terminal)},
                       {"eta", v.eta},
                       {"stockpiles", v.stockpiles}});
  }
  Json stockpiles = Json::array();
  for (const auto& s : inst.stockpiles) {
    Json comps = Json::array();
    for (const auto& c : s.components) {
      comps.push_back({{"load_point", c.load_point}, {"tonnes", c.tonnes}});
    }
    stockpiles.push_back({{"id", s.id},
                          {"vessel", s.vessel},
                          {"max_build_days", s.max_build_days},
                          {"components", std::move(comps)}});
  }
  Json terminals = Json::object();
  for (Terminal t : kTerminals) terminals[std::string(to_string(t))] = terminal_json(inst.config(t));
  const auto& k = inst.kct;
  Json kct = {{"pad_length", k.pad_length},
              {"ship_loaders", k.ship_loaders},
              {"machine_speed", k.machine_speed},
              {"machine_rate_per_day", k.machine_rate_per_day},
              {"stream_capacity", k.stream_capacity}};
  return {{"format", "coalchain-instance"},
          {"version", kFormatVersion},
          {"seed", inst.seed},
          {"config_hash", inst.config_hash},
          {"warmup_end", inst.warmup_end},
          {"terminals", std::move(terminals)},
          {"kct", std::move(kct)},
          {"rail", rail_json(inst.rail)},
          {"high_tides", inst.tides.high_tides()},
          {"vessels", std::move(vessels)},
          {"stockpiles", std::move(stockpiles)}};
}

Instance instance_from(const Json& j) {
  check_format(j, "coalchain-instance");
  Instance inst;
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.config_hash = text(j, "config_hash");
  inst.warmup_end = number(j, "warmup_end");
  for (Terminal t : kTerminals) {
    inst.terminals[index(t)] = terminal_from(j.at("terminals").at(std::string(to_string(t))));
  }
  const Json& k = j.at("kct");
  inst.kct.pad_length = k.at("pad_length").get<std::array<Metres, 4>>();
  inst.kct.ship_loaders = integer(k, "ship_loaders");
  inst.kct.machine_speed = non_negative(k, "machine_speed");
  inst.kct.machine_rate_per_day = non_negative(k, "machine_rate_per_day");
  inst.kct.stream_capacity = k.at("stream_capacity").get<std::array<Tonnes, 3>>();
  for (Metres len : inst.kct.pad_length) {
    if (!(len > 0)) throw InputError("pad lengths must be positive");
  }
  inst.rail = rail_from(j.at("rail"));
  inst.tides = TideTable(j.at("high_tides").get<std::vector<Hours>>());

  for (const auto& s : j.at("stockpiles")) {
    Stockpile sp;
    sp.id = integer(s, "id");
    sp.vessel = integer(s, "vessel");
    sp.max_build_days = integer(s, "max_build_days");
    if (sp.max_build_days < 1) throw InputError("max_build_days must be at least 1");
    if (sp.id != static_cast<int>(inst.stockpiles.size())) {
      throw InputError("stockpile ids must be 0, 1, 2, ... in file order");
    }
    for (const auto& c : s.at("components")) {
      Component comp{text(c, "load_point"), non_negative(c, "tonnes")};
      if (!inst.rail.has_load_point(comp.load_point)) {
        throw InputError("unknown load point '" + comp.load_point + "'");
      }
      sp.components.push_back(std::move(comp));
    }
    if (sp.components.empty()) throw InputError("stockpile without components");
    inst.stockpiles.push_back(std::move(sp));
  }
  std::vector<int> owner(inst.stockpiles.size(), -1);
  for (const auto& v : j.at("vessels")) {
    Vessel vessel;
    vessel.id = integer(v, "id");
    if (vessel.id != static_cast<int>(inst.vessels.size())) {
      throw InputError("vessel ids must be 0, 1, 2, ... in file order");
    }
    vessel.terminal = parse_terminal(text(v, "terminal"));
    vessel.eta = non_negative(v, "eta");
    vessel.stockpiles = v.at("stockpiles").get<std::vector<int>>();
    if (vessel.stockpiles.empty()) throw InputError("vessel without stockpiles");
    for (int s : vessel.stockpiles) {
      if (s < 0 || s >= static_cast<int>(owner.size()) || owner[s] != -1 ||
          inst.stockpiles[s].vessel != vessel.id) {
        throw InputError("vessel " + std::to_string(vessel.id) + " has a bad stockpile reference");
      }
      owner[s] = vessel.id;
    }
    inst.vessels.push_back(std::move(vessel));
  }
  for (int o : owner) {
    if (o < 0) throw InputError("stockpile not owned by any vessel");
  }
  return inst;
}

Json solution_json(const Solution& sol, const Instance& inst) {
  Json vessels = Json::array();
  for (const auto& v : sol.vessels) {
    if (!v) {
      vessels.push_back(nullptr);
    } else {
      vessels.push_back({{"arrival", v->arrival}, {"departure", v->departure}});
    }
  }
  Json stockpiles = Json::array();
  for (const auto& s : sol.stockpiles) {
    if (!s) {
      stockpiles.push_back(nullptr);
      continue;
    }
    Json arrivals = Json::array();
    for (const auto& a : s->arrivals) {
      arrivals.push_back({{"component", a.component}, {"tonnes", a.tonnes}, {"time", a.time}});
    }
    Json entry = {{"arrivals", std::move(arrivals)},
                  {"reclaim_start", s->reclaim_start},
                  {"reclaim_end", s->reclaim_end}};
    if (s->kct) {
      entry["kct"] = {{"pad", to_string(s->kct->pad)},
                      {"position", s->kct->position},
                      {"reclaimer", to_string(s->kct->reclaimer)}};
    } else {
      entry["kct"] = nullptr;
    }
    stockpiles.push_back(std::move(entry));
  }
  Json objective = std::isfinite(sol.objective) ? Json(sol.objective) : Json(nullptr);
  return {{"format", "coalchain-solution"},
          {"version", kFormatVersion},
          {"seed", sol.seed},
          {"instance_seed", inst.seed},
          {"config_hash", inst.config_hash},
          {"objective", std::move(objective)},
          {"vessels", std::move(vessels)},
          {"stockpiles", std::move(stockpiles)}};
}

Solution solution_from(const Json& j) {
  check_format(j, "coalchain-solution");
  Solution sol;
  sol.seed = j.at("seed").get<std::uint64_t>();
  const Json& obj = j.at("objective");
  sol.objective = obj.is_null() ? std::numeric_limits<double>::infinity() : number(j, "objective");
  for (const auto& v : j.at("vessels")) {
    if (v.is_null()) {
      sol.vessels.emplace_back();
    } else {
      sol.vessels.push_back(VesselSchedule{number(v, "arrival"), number(v, "departure")});
    }
  }
  for (const auto& s : j.at("stockpiles")) {
    if (s.is_null()) {
      sol.stockpiles.emplace_back();
      continue;
    }
    StockpileSchedule sched;
    for (const auto& a : s.at("arrivals")) {
      sched.arrivals.push_back({integer(a, "component"), non_negative(a, "tonnes"), number(a, "time")});
    }
    sched.reclaim_start = number(s, "reclaim_start");
    sched.reclaim_end = number(s, "reclaim_end");
    const Json& k = s.at("kct");
    if (!k.is_null()) {
      sched.kct = KctPlacement{parse_pad(text(k, "pad")), number(k, "position"),
                               parse_reclaimer(text(k, "reclaimer"))};
    }
    sol.stockpiles.push_back(std::move(sched));
  }
  return sol;
}

template <class F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string emit_instance(const Instance& inst) { return instance_json(inst).dump(1) + "\n"; }

Instance parse_instance(std::string_view t) {
  return guarded("instance", [&] { return instance_from(Json::parse(t)); });
}

std::string emit_solution(const Solution& sol, const Instance& inst) {
  return solution_json(sol, inst).dump(1) + "\n";
}

Solution parse_solution(std::string_view t) {
  return guarded("solution", [&] { return solution_from(Json::parse(t)); });
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view t) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << t;
  if (!out) throw InputError("cannot write " + path.string());
}

Instance read_instance(const std::filesystem::path& path) { return parse_instance(read_text(path)); }

void write_instance(const std::filesystem::path& path, const Instance& inst) {
  write_text(path, emit_instance(inst));
}

Solution read_solution(const std::filesystem::path& path) { return parse_solution(read_text(path)); }

void write_solution(const std::filesystem::path& path, const Solution& sol, const Instance& inst) {
  write_text(path, emit_solution(sol, inst));
}

}  // namespace coalchain
