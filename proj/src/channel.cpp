#include "coalchain/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coalchain {

ChannelGeometry ChannelGeometry::for_instance(const Instance& inst) {
  ChannelGeometry g;
  for (Terminal t : kTerminals) g.travel[index(t)] = inst.config(t).channel_hours();
  return g;
}

bool ChannelGeometry::passes(Terminal dest, Terminal via) const {
  return via == dest || travel_to(via) < travel_to(dest);
}

namespace {

bool event_less(const ChannelEvent& a, const ChannelEvent& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.vessel < b.vessel;
}

// Events with time in [lo, hi].
std::pair<std::vector<ChannelEvent>::const_iterator, std::vector<ChannelEvent>::const_iterator>
events_between(const std::vector<ChannelEvent>& ev, Hours lo, Hours hi) {
  auto first = std::lower_bound(ev.begin(), ev.end(), lo,
                                [](const ChannelEvent& e, Hours t) { return e.time < t; });
  auto last = std::upper_bound(first, ev.end(), hi,
                               [](Hours t, const ChannelEvent& e) { return t < e.time; });
  return {first, last};
}

// Conflicts of an arrival at `tx` on one terminal timeline.
bool arrival_conflicts(const std::vector<ChannelEvent>& ev, Hours tx, Hours headway,
                       Hours clearance) {
  auto [first, last] = events_between(ev, tx - clearance - headway, tx + headway);
  for (auto it = first; it != last; ++it) {
    if (it->kind == EventKind::Arrival) {
      if (std::abs(it->time - tx) < headway - kTimeTol) return true;
    } else {
      Hours gap = tx - it->time;
      if (gap > kTimeTol && gap < clearance - kTimeTol) return true;
    }
  }
  return false;
}

bool departure_conflicts(const std::vector<ChannelEvent>& ev, Hours tx, Hours headway,
                         Hours clearance) {
  auto [first, last] = events_between(ev, tx - headway, tx + clearance + headway);
  for (auto it = first; it != last; ++it) {
    if (it->kind == EventKind::Departure) {
      if (std::abs(it->time - tx) < headway - kTimeTol) return true;
    } else {
      Hours gap = it->time - tx;
      if (gap > kTimeTol && gap < clearance - kTimeTol) return true;
    }
  }
  return false;
}

std::pair<Hours, Hours> arrival_transit(const ChannelGeometry& g, Terminal dest, Hours t) {
  return {t - g.travel_to(dest) - g.entry, t};
}

std::pair<Hours, Hours> departure_transit(const ChannelGeometry& g, Terminal dest, Hours t) {
  return {t, t + g.travel_to(dest) + g.entry};
}

void sort_unique(std::vector<Hours>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool ChannelTimeline::transit_fits(Hours start, Hours end) const {
  // Existing transits overlapping the candidate; the maximum overlap inside
  // the candidate occurs at the start of one of them or at the candidate's.
  std::vector<const Transit*> hits;
  for (const Transit& tr : transits_) {
    if (tr.start >= end) break;
    if (tr.end > start) hits.push_back(&tr);
  }
  if (static_cast<int>(hits.size()) < geometry_.max_transits) return true;
  auto count_at = [&](Hours p) {
    int n = 1;  // the candidate itself
    for (const Transit* tr : hits) {
      if (tr->start <= p && p < tr->end) ++n;
    }
    return n;
  };
  if (count_at(start) > geometry_.max_transits) return false;
  for (const Transit* tr : hits) {
    if (tr->start > start && count_at(tr->start) > geometry_.max_transits) return false;
  }
  return true;
}

bool ChannelTimeline::arrival_feasible(Terminal dest, Hours t) const {
  for (Terminal x : kTerminals) {
    if (!geometry_.passes(dest, x)) continue;
    Hours tx = t - geometry_.offset(dest, x);
    if (arrival_conflicts(events_[index(x)], tx, geometry_.headway, geometry_.clearance(x))) {
      return false;
    }
  }
  auto [s, e] = arrival_transit(geometry_, dest, t);
  return transit_fits(s, e);
}

bool ChannelTimeline::departure_feasible(Terminal dest, Hours t, bool cape,
                                         const TideTable& tides) const {
  if (cape && !tides.in_window(t)) return false;
  for (Terminal x : kTerminals) {
    if (!geometry_.passes(dest, x)) continue;
    Hours tx = t + geometry_.offset(dest, x);
    if (departure_conflicts(events_[index(x)], tx, geometry_.headway, geometry_.clearance(x))) {
      return false;
    }
  }
  auto [s, e] = departure_transit(geometry_, dest, t);
  return transit_fits(s, e);
}

std::optional<Hours> ChannelTimeline::next_feasible_arrival(Terminal dest, Hours from,
                                                            Hours horizon) const {
  if (arrival_feasible(dest, from)) return from;
  // Right ends of every conflict region, mapped back to destination time.
  std::vector<Hours> cand;
  for (Terminal x : kTerminals) {
    if (!geometry_.passes(dest, x)) continue;
    Hours off = geometry_.offset(dest, x);
    for (const ChannelEvent& e : events_[index(x)]) {
      Hours c = e.kind == EventKind::Arrival ? e.time + geometry_.headway
                                             : e.time + geometry_.clearance(x);
      c += off;
      if (c > from && c <= horizon) cand.push_back(c);
    }
  }
  Hours span = geometry_.travel_to(dest) + geometry_.entry;
  for (const Transit& tr : transits_) {
    Hours c = tr.end + span;
    if (c > from && c <= horizon) cand.push_back(c);
  }
  sort_unique(cand);
  for (Hours c : cand) {
    if (arrival_feasible(dest, c)) return c;
  }
  return std::nullopt;
}

std::optional<Hours> ChannelTimeline::next_feasible_departure(Terminal dest, Hours from, bool cape,
                                                              const TideTable& tides,
                                                              Hours horizon) const {
  if (departure_feasible(dest, from, cape, tides)) return from;
  std::vector<Hours> cand;
  for (Terminal x : kTerminals) {
    if (!geometry_.passes(dest, x)) continue;
    Hours off = geometry_.offset(dest, x);
    for (const ChannelEvent& e : events_[index(x)]) {
      Hours c = e.kind == EventKind::Departure ? e.time + geometry_.headway : e.time;
      c -= off;
      if (c > from && c <= horizon) cand.push_back(c);
    }
  }
  for (const Transit& tr : transits_) {
    if (tr.end > from && tr.end <= horizon) cand.push_back(tr.end);
  }
  if (cape) {
    for (Hours h : tides.high_tides()) {
      Hours s = TideTable::window_of(h).start;
      if (s > from && s <= horizon) cand.push_back(s);
    }
  }
  sort_unique(cand);
  for (Hours c : cand) {
    if (departure_feasible(dest, c, cape, tides)) return c;
  }
  return std::nullopt;
}

std::optional<Hours> ChannelTimeline::latest_feasible_arrival(Terminal dest, Hours upto,
                                                              Hours not_before) const {
  if (upto < not_before) return std::nullopt;
  if (arrival_feasible(dest, upto)) return upto;
  // Left ends of conflict regions.
  std::vector<Hours> cand;
  for (Terminal x : kTerminals) {
    if (!geometry_.passes(dest, x)) continue;
    Hours off = geometry_.offset(dest, x);
    for (const ChannelEvent& e : events_[index(x)]) {
      Hours c = (e.kind == EventKind::Arrival ? e.time - geometry_.headway : e.time) + off;
      if (c < upto && c >= not_before) cand.push_back(c);
    }
  }
  for (const Transit& tr : transits_) {
    if (tr.start < upto && tr.start >= not_before) cand.push_back(tr.start);
  }
  sort_unique(cand);
  for (auto it = cand.rbegin(); it != cand.rend(); ++it) {
    if (arrival_feasible(dest, *it)) return *it;
  }
  return std::nullopt;
}

void ChannelTimeline::insert_event(Terminal t, ChannelEvent e) {
  auto& ev = events_[index(t)];
  ev.insert(std::upper_bound(ev.begin(), ev.end(), e, event_less), e);
}

void ChannelTimeline::commit(int vessel, Terminal dest, Hours arrival, Hours departure, bool cape,
                             const TideTable& tides) {
  if (!arrival_feasible(dest, arrival)) {
    throw std::logic_error("channel: committing an infeasible arrival of vessel " +
                           std::to_string(vessel));
  }
  for (Terminal x : kTerminals) {
    if (!geometry_.passes(dest, x)) continue;
    insert_event(x, {arrival - geometry_.offset(dest, x), EventKind::Arrival, vessel, x != dest});
  }
  auto add_transit = [&](std::pair<Hours, Hours> iv) {
    Transit tr{iv.first, iv.second, vessel};
    auto pos = std::upper_bound(transits_.begin(), transits_.end(), tr,
                                [](const Transit& a, const Transit& b) {
                                  if (a.start != b.start) return a.start < b.start;
                                  if (a.end != b.end) return a.end < b.end;
                                  return a.vessel < b.vessel;
                                });
    transits_.insert(pos, tr);
  };
  add_transit(arrival_transit(geometry_, dest, arrival));

  if (!departure_feasible(dest, departure, cape, tides)) {
    release(vessel);
    throw std::logic_error("channel: committing an infeasible departure of vessel " +
                           std::to_string(vessel));
  }
  for (Terminal x : kTerminals) {
    if (!geometry_.passes(dest, x)) continue;
    insert_event(x,
                 {departure + geometry_.offset(dest, x), EventKind::Departure, vessel, x != dest});
  }
  add_transit(departure_transit(geometry_, dest, departure));
}

void ChannelTimeline::release(int vessel) {
  for (auto& ev : events_) {
    std::erase_if(ev, [vessel](const ChannelEvent& e) { return e.vessel == vessel; });
  }
  std::erase_if(transits_, [vessel](const Transit& t) { return t.vessel == vessel; });
}

std::vector<std::string> replay_channel(const std::vector<ChannelMove>& moves,
                                        const ChannelGeometry& geometry, const TideTable& tides) {
  std::vector<std::string> out;
  std::array<std::vector<ChannelEvent>, 3> timelines;
  std::vector<Transit> transits;
  for (const ChannelMove& m : moves) {
    for (Terminal x : kTerminals) {
      if (!geometry.passes(m.destination, x)) continue;
      Hours off = geometry.offset(m.destination, x);
      Hours tx = m.kind == EventKind::Arrival ? m.time - off : m.time + off;
      timelines[index(x)].push_back({tx, m.kind, m.vessel, x != m.destination});
    }
    auto iv = m.kind == EventKind::Arrival ? arrival_transit(geometry, m.destination, m.time)
                                           : departure_transit(geometry, m.destination, m.time);
    transits.push_back({iv.first, iv.second, m.vessel});
    if (m.kind == EventKind::Departure && m.cape && !tides.in_window(m.time)) {
      std::ostringstream os;
      os << "cape vessel " << m.vessel << " departs outside a tidal window at " << m.time;
      out.push_back(os.str());
    }
  }

  for (Terminal x : kTerminals) {
    const auto& ev = timelines[index(x)];
    const Hours clearance = geometry.clearance(x);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      for (std::size_t j = 0; j < ev.size(); ++j) {
        if (i == j) continue;
        const ChannelEvent& a = ev[i];
        const ChannelEvent& b = ev[j];
        if (a.kind == b.kind && i < j && std::abs(a.time - b.time) < geometry.headway - kTimeTol) {
          std::ostringstream os;
          os << to_string(x) << ": " << (a.kind == EventKind::Arrival ? "arrivals" : "departures")
             << " of vessels " << a.vessel << " and " << b.vessel << " closer than the headway";
          out.push_back(os.str());
        } else if (a.kind == EventKind::Departure && b.kind == EventKind::Arrival) {
          Hours gap = b.time - a.time;
          if (gap > kTimeTol && gap < clearance - kTimeTol) {
            std::ostringstream os;
            os << to_string(x) << ": arrival of vessel " << b.vessel << " " << gap
               << " h after departure of vessel " << a.vessel;
            out.push_back(os.str());
          }
        }
      }
    }
  }

  for (const Transit& t : transits) {
    int n = 0;
    for (const Transit& o : transits) {
      if (o.start <= t.start && t.start < o.end) ++n;
    }
    if (n > geometry.max_transits) {
      std::ostringstream os;
      os << n << " concurrent channel transits at " << t.start;
      out.push_back(os.str());
    }
  }
  return out;
}

}  // namespace coalchain
