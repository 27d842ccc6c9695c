#include "coalchain/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "coalchain/errors.hpp"

namespace coalchain {

namespace {

// Draws from a discrete distribution with explicit weights (no std::
// discrete_distribution, whose sampling differs between library versions).
std::size_t pick(std::mt19937_64& rng, const double* weights, std::size_t n) {
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) total += weights[i];
  double u = std::uniform_real_distribution<double>(0, total)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return n - 1;
}

// Positive weights summing to one, for splitting a tonnage.
std::vector<double> shares(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> w(n);
  double sum = 0;
  for (double& x : w) sum += (x = u(rng));
  for (double& x : w) x /= sum;
  return w;
}

// Splits an integral tonnage into n positive integral parts.
std::vector<Tonnes> split(std::mt19937_64& rng, Tonnes total, int n) {
  auto w = shares(rng, n);
  std::vector<Tonnes> parts(n);
  Tonnes used = 0;
  for (int i = 0; i + 1 < n; ++i) {
    parts[i] = std::max(1.0, std::round(total * w[i]));
    used += parts[i];
  }
  parts[n - 1] = total - used;
  return parts;
}

}  // namespace

std::string GeneratorConfig::hash() const {
  std::ostringstream os;
  os.precision(17);
  os << vessels << ';' << mean_interarrival << ';' << interarrival_shape << ';' << first_eta << ';'
     << min_tonnes << ';' << max_tonnes << ';' << max_components << ';' << warmup_days;
  for (double x : terminal_mix) os << ';' << x;
  for (double x : mean_tonnes) os << ';' << x;
  for (const auto& row : stockpile_count)
    for (double x : row) os << ';' << x;
  for (const auto& s : short_build_load_points) os << ';' << s;
  // FNV-1a of the canonical text.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

Instance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.vessels <= 0) throw InputError("generator needs at least one vessel");
  if (cfg.min_tonnes <= 0 || cfg.max_tonnes < cfg.min_tonnes) {
    throw InputError("bad tonnage range");
  }
  double mix = 0;
  for (double p : cfg.terminal_mix) {
    if (p < 0) throw InputError("negative terminal probability");
    mix += p;
  }
  if (std::abs(mix - 1.0) > 1e-9) throw InputError("terminal mix must sum to 1");
  if (cfg.mean_interarrival <= 0 || cfg.interarrival_shape <= 0) {
    throw InputError("inter-arrival parameters must be positive");
  }
  if (cfg.max_components < 1) throw InputError("need at least one component per stockpile");

  std::mt19937_64 rng(cfg.seed);
  Instance inst;
  inst.rail = RailGraph::default_network();
  inst.seed = cfg.seed;
  inst.config_hash = cfg.hash();
  inst.warmup_end = cfg.first_eta + cfg.warmup_days * kHoursPerDay;
  const auto load_points = inst.rail.load_point_names();

  std::gamma_distribution<double> gap(cfg.interarrival_shape,
                                      cfg.mean_interarrival / cfg.interarrival_shape);
  Hours eta = cfg.first_eta;
  for (int i = 0; i < cfg.vessels; ++i) {
    if (i > 0) eta += gap(rng);
    const auto t = static_cast<Terminal>(pick(rng, cfg.terminal_mix.data(), 3));
    const Tonnes mean = cfg.mean_tonnes[index(t)];
    // Gamma tonnage (shape 4) truncated to the admissible range by rejection.
    std::gamma_distribution<double> size(4.0, mean / 4.0);
    Tonnes w = 0;
    do {
      w = std::round(size(rng));
    } while (w < cfg.min_tonnes || w > cfg.max_tonnes);
    const auto& counts = cfg.stockpile_count[index(t)];
    int piles = 1 + static_cast<int>(pick(rng, counts.data(), 3));
    piles = std::min(piles, static_cast<int>(w / 5000));  // keep stockpiles sensible
    piles = std::max(piles, 1);
    std::vector<std::vector<Component>> cargo;
    std::vector<bool> short_build;
    for (Tonnes ws : split(rng, w, piles)) {
      int comps = 1 + static_cast<int>(
                          std::uniform_int_distribution<int>(0, cfg.max_components - 1)(rng));
      std::vector<Component> list;
      short_build.push_back(false);
      for (Tonnes wc : split(rng, ws, comps)) {
        const auto& lp = load_points[std::uniform_int_distribution<std::size_t>(
            0, load_points.size() - 1)(rng)];
        if (std::find(cfg.short_build_load_points.begin(), cfg.short_build_load_points.end(),
                      lp) != cfg.short_build_load_points.end()) {
          short_build.back() = true;
        }
        list.push_back({lp, wc});
      }
      cargo.push_back(std::move(list));
    }
    int v = inst.add_vessel(t, eta, cargo);
    for (std::size_t k = 0; k < short_build.size(); ++k) {
      if (short_build[k]) inst.stockpiles[inst.vessels[v].stockpiles[k]].max_build_days = 5;
    }
  }
  Hours first_tide = std::uniform_real_distribution<double>(0, 12.42)(rng);
  inst.tides = TideTable::semi_diurnal(first_tide, eta + 24.0 * 400);
  return inst;
}

StemSummary summarize(const Instance& inst) {
  StemSummary s;
  s.vessels = static_cast<int>(inst.vessels.size());
  if (inst.vessels.empty()) return s;
  s.min_tonnes = std::numeric_limits<Tonnes>::infinity();
  for (const auto& v : inst.vessels) {
    Tonnes w = inst.vessel_tonnes(v.id);
    s.per_terminal[index(v.terminal)] += 1;
    s.stockpiles[index(v.terminal)] += static_cast<int>(v.stockpiles.size());
    s.mean_tonnes[index(v.terminal)] += w;
    s.min_tonnes = std::min(s.min_tonnes, w);
    s.max_tonnes = std::max(s.max_tonnes, w);
  }
  for (Terminal t : kTerminals) {
    if (s.per_terminal[index(t)] > 0) s.mean_tonnes[index(t)] /= s.per_terminal[index(t)];
  }
  std::vector<Hours> etas;
  for (const auto& v : inst.vessels) etas.push_back(v.eta);
  std::sort(etas.begin(), etas.end());
  if (etas.size() > 1) s.mean_eta_gap = (etas.back() - etas.front()) / (etas.size() - 1);
  return s;
}

}  // namespace coalchain
