#include "coalchain/rail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coalchain/errors.hpp"

namespace coalchain {

CapacityLedger::Resource CapacityLedger::add_resource(std::string name, Tonnes daily_capacity) {
  names_.push_back(std::move(name));
  capacity_.push_back(daily_capacity);
  used_.emplace_back();
  return static_cast<Resource>(capacity_.size() - 1);
}

Tonnes CapacityLedger::used(Resource r, int day) const {
  const auto& u = used_[r];
  if (day < 0 || static_cast<std::size_t>(day) >= u.size()) return 0;
  return u[day];
}

Tonnes CapacityLedger::residual(Resource r, int day) const {
  return std::max(0.0, capacity_[r] - used(r, day));
}

void CapacityLedger::reserve(Resource r, int day, Tonnes tonnes) {
  if (day < 0) throw InputError("ledger reservation on a negative day");
  auto& u = used_[r];
  if (static_cast<std::size_t>(day) >= u.size()) u.resize(day + 64, 0.0);
  journal_.push_back({r, day, u[day]});
  u[day] += tonnes;
}

void CapacityLedger::rollback(std::size_t mark) {
  while (journal_.size() > mark) {
    const Entry& e = journal_.back();
    used_[e.resource][e.day] = e.previous;
    journal_.pop_back();
  }
}

ResourceMap ResourceMap::install(const Instance& inst, CapacityLedger& ledger) {
  ResourceMap m;
  for (const auto& arc : inst.rail.arcs()) {
    m.arcs.push_back(ledger.add_resource("arc:" + arc.id, arc.capacity));
  }
  for (Terminal t : kTerminals) {
    m.inbound[index(t)] =
        ledger.add_resource("DIT:" + std::string(to_string(t)), inst.config(t).daily_inbound);
    m.outbound[index(t)] =
        ledger.add_resource("DOT:" + std::string(to_string(t)), inst.config(t).daily_outbound);
  }
  for (std::size_t s = 0; s < 3; ++s) {
    m.streams[s] = ledger.add_resource("DSSC:" + std::to_string(s + 1), inst.kct.stream_capacity[s]);
  }
  return m;
}

Tonnes residual_path_capacity(const Route& route, int day, const CapacityLedger& ledger,
                              const ResourceMap& map) {
  Tonnes r = std::numeric_limits<Tonnes>::infinity();
  for (int arc : route.arcs) r = std::min(r, ledger.residual(map.arcs[arc], day));
  return route.arcs.empty() ? 0.0 : r;
}

Hours RailingPlan::build_start() const {
  Hours t = std::numeric_limits<Hours>::infinity();
  for (const auto& a : arrivals) t = std::min(t, a.time);
  return t;
}

Hours RailingPlan::build_last() const {
  Hours t = -std::numeric_limits<Hours>::infinity();
  for (const auto& a : arrivals) t = std::max(t, a.time);
  return t;
}

Hours RailingPlan::effective_build_end() const {
  return coalchain::effective_build_end(build_start(), build_last());
}

namespace {

// Reservations of earlier components that are not yet in the ledger.
class PendingOverlay {
 public:
  Tonnes get(CapacityLedger::Resource r, int day) const {
    Tonnes sum = 0;
    for (const auto& p : entries_) {
      if (p.resource == r && p.day == day) sum += p.tonnes;
    }
    return sum;
  }
  void add(CapacityLedger::Resource r, int day, Tonnes t) { entries_.push_back({r, day, t}); }
  std::vector<RailingPlan::Reservation> take() { return std::move(entries_); }

 private:
  std::vector<RailingPlan::Reservation> entries_;
};

struct Attempt {
  std::optional<RailingPlan> plan;
  int first_day = -1;  // set when the span rule failed
};

Attempt try_railing(const Instance& inst, const RailingRequest& req, const CapacityLedger& ledger,
                    const ResourceMap& map) {
  const Stockpile& s = inst.stockpiles.at(req.stockpile);
  const int max_days = s.max_build_days;
  PendingOverlay pending;
  RailingPlan plan;
  int first_day = -1;

  auto residual = [&](CapacityLedger::Resource r, int day) {
    return std::max(0.0, ledger.residual(r, day) - pending.get(r, day));
  };

  for (std::size_t ci = 0; ci < s.components.size(); ++ci) {
    const Component& c = s.components[ci];
    Tonnes left = c.tonnes;
    if (left <= kTonneTol) continue;
    const Route& route = inst.rail.route(c.load_point, req.terminal);
    for (int day = req.start_day; left > kTonneTol; ++day) {
      if (day > req.last_day) return {};
      if (first_day >= 0 && day - first_day + 1 > max_days) return {std::nullopt, first_day};
      Tonnes w = left;
      for (int arc : route.arcs) w = std::min(w, residual(map.arcs[arc], day));
      w = std::min(w, residual(map.inbound[index(req.terminal)], day));
      if (req.stream) w = std::min(w, residual(map.streams[index(*req.stream)], day));
      if (w <= kTonneTol) continue;
      if (left - w <= kTonneTol) w = left;
      for (int arc : route.arcs) pending.add(map.arcs[arc], day, w);
      pending.add(map.inbound[index(req.terminal)], day, w);
      if (req.stream) pending.add(map.streams[index(*req.stream)], day, w);
      plan.arrivals.push_back({static_cast<int>(ci), w, day_start(day)});
      left -= w;
      if (first_day < 0 || day < first_day) first_day = day;
    }
  }
  if (first_day >= 0) {
    int last_day = first_day;
    for (const auto& a : plan.arrivals) last_day = std::max(last_day, day_of(a.time));
    if (std::max(last_day - first_day + 1, 3) > max_days) return {std::nullopt, first_day};
  }
  plan.reservations = pending.take();
  return {std::move(plan), -1};
}

}  // namespace

std::optional<RailingPlan> plan_railing(const Instance& inst, const RailingRequest& req,
                                        const CapacityLedger& ledger, const ResourceMap& map) {
  return try_railing(inst, req, ledger, map).plan;
}

std::optional<RailingPlan> plan_railing_shifting(const Instance& inst, RailingRequest req,
                                                 const CapacityLedger& ledger,
                                                 const ResourceMap& map) {
  while (req.start_day <= req.last_day) {
    Attempt a = try_railing(inst, req, ledger, map);
    if (a.plan) return a.plan;
    if (a.first_day < 0) return std::nullopt;
    req.start_day = std::max(req.start_day, a.first_day) + 1;
  }
  return std::nullopt;
}

void commit_railing(const RailingPlan& plan, CapacityLedger& ledger) {
  for (const auto& r : plan.reservations) ledger.reserve(r.resource, r.day, r.tonnes);
}

int railing_start_day(Hours eta, Hours not_before) {
  Hours start = std::max({eta - kMaxLeadHours, not_before, 0.0});
  return static_cast<int>(std::ceil(start / kHoursPerDay - 1e-12));
}

std::optional<Hours> outbound_jump(const CapacityLedger& ledger, CapacityLedger::Resource r,
                                   Hours start, Hours duration, double rate) {
  for (int day = day_of(start); day_start(day) < start + duration - kTimeTol; ++day) {
    Hours lo = std::max(start, day_start(day));
    Hours hi = std::min(start + duration, day_start(day + 1));
    Tonnes left = ledger.residual(r, day);
    if (rate * (hi - lo) > left + kTonneTol) {
      Hours next = day_start(day + 1) - left / rate;
      return std::max(next, std::nextafter(start, std::numeric_limits<Hours>::infinity()));
    }
  }
  return std::nullopt;
}

Hours earliest_outbound_start(const CapacityLedger& ledger, CapacityLedger::Resource r,
                              Hours from, Hours duration, double rate) {
  Hours t = from;
  while (auto j = outbound_jump(ledger, r, t, duration, rate)) t = *j;
  return t;
}

void reserve_outbound(CapacityLedger& ledger, CapacityLedger::Resource r, Hours start,
                      Hours duration, double rate) {
  for (int day = day_of(start); day_start(day) < start + duration - kTimeTol; ++day) {
    Hours lo = std::max(start, day_start(day));
    Hours hi = std::min(start + duration, day_start(day + 1));
    if (hi > lo) ledger.reserve(r, day, rate * (hi - lo));
  }
}

}  // namespace coalchain
