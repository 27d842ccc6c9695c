#include "coalchain/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <tuple>

namespace coalchain {

namespace {
constexpr double kEdgeTol = 1e-9;

bool gap_less(const PadGap& a, const PadGap& b) {
  return std::tie(a.t1, a.y1, a.t2, a.y2) < std::tie(b.t1, b.y1, b.t2, b.y2);
}
}  // namespace

bool PadGap::contains(const PadGap& o) const {
  return t1 <= o.t1 + kEdgeTol && o.t2 <= t2 + kEdgeTol && y1 <= o.y1 + kEdgeTol &&
         o.y2 <= y2 + kEdgeTol;
}

PadGapSet::PadGapSet(Pad pad, Metres length, Hours horizon) : pad_(pad), length_(length) {
  gaps_.push_back({pad, 0, horizon, 0, length});
}

bool PadGapSet::is_free(Hours t1, Hours t2, Metres y1, Metres y2) const {
  PadGap r{pad_, t1, t2, y1, y2};
  return std::any_of(gaps_.begin(), gaps_.end(), [&](const PadGap& g) { return g.contains(r); });
}

void PadGapSet::occupy(Hours t1, Hours t2, Metres y1, Metres y2) {
  std::vector<PadGap> kept;
  std::vector<PadGap> pieces;
  kept.reserve(gaps_.size());
  for (const PadGap& g : gaps_) {
    bool cut = g.t1 < t2 - kEdgeTol && t1 < g.t2 - kEdgeTol && g.y1 < y2 - kEdgeTol &&
               y1 < g.y2 - kEdgeTol;
    if (!cut) {
      kept.push_back(g);
      continue;
    }
    if (t1 - g.t1 > kEdgeTol) pieces.push_back({pad_, g.t1, t1, g.y1, g.y2});
    if (g.t2 - t2 > kEdgeTol) pieces.push_back({pad_, t2, g.t2, g.y1, g.y2});
    if (y1 - g.y1 > kEdgeTol) pieces.push_back({pad_, g.t1, g.t2, g.y1, y1});
    if (g.y2 - y2 > kEdgeTol) pieces.push_back({pad_, g.t1, g.t2, y2, g.y2});
  }
  std::sort(pieces.begin(), pieces.end(), gap_less);
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  // Uncut gaps keep their sorted order, so the survivors are merged in.
  std::vector<PadGap> fresh;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const PadGap& p = pieces[i];
    bool dominated = std::any_of(kept.begin(), kept.end(),
                                 [&](const PadGap& k) { return k.contains(p); });
    for (std::size_t j = 0; j < pieces.size() && !dominated; ++j) {
      if (j != i && pieces[j].contains(p) && !(p.contains(pieces[j]) && j > i)) dominated = true;
    }
    if (!dominated) fresh.push_back(p);
  }
  gaps_.clear();
  gaps_.reserve(kept.size() + fresh.size());
  std::merge(kept.begin(), kept.end(), fresh.begin(), fresh.end(), std::back_inserter(gaps_),
             gap_less);
}

std::vector<PadGap> get_pad_gaps(const PadGapSet& pads, Metres length, Hours earliest_build,
                                 Hours min_span) {
  std::vector<PadGap> out;
  for (const PadGap& g : pads.gaps()) {
    if (g.y2 - g.y1 < length - kEdgeTol) continue;
    Hours from = std::max(g.t1, earliest_build);
    if (g.t2 - from < min_span - kTimeTol) continue;
    out.push_back(g);
  }
  return out;
}

void ReclaimerSchedule::add(const ReclaimJob& job) {
  auto pos = std::upper_bound(jobs_.begin(), jobs_.end(), job,
                              [](const ReclaimJob& a, const ReclaimJob& b) {
                                return a.start < b.start;
                              });
  jobs_.insert(pos, job);
}

void ReclaimerSchedule::remove_stockpile(int stockpile) {
  std::erase_if(jobs_, [stockpile](const ReclaimJob& j) { return j.stockpile == stockpile; });
}

std::vector<ReclaimerGap> all_reclaimer_gaps(const ReclaimerSchedule& r) {
  std::vector<ReclaimerGap> out;
  Hours prev_end = 0;
  Metres prev_pos = r.home();
  for (const ReclaimJob& j : r.jobs()) {
    out.push_back({r.id(), prev_end, prev_pos, j.start, j.position});
    prev_end = j.end;
    prev_pos = j.position;
  }
  out.push_back({r.id(), prev_end, prev_pos, kForever, prev_pos});
  return out;
}

std::vector<ReclaimerGap> get_reclaimer_gaps(const ReclaimerSchedule& r, Hours duration,
                                             double speed, Hours from, Hours until) {
  std::vector<ReclaimerGap> out;
  for (const ReclaimerGap& g : all_reclaimer_gaps(r)) {
    if (g.prev_end > until + kTimeTol) break;
    if (!g.unbounded()) {
      if (g.next_start - duration < from - kTimeTol) continue;
      Hours travel = std::abs(g.next_position - g.prev_position) / speed;
      if (g.next_start - g.prev_end - duration < travel - kTimeTol) continue;
    }
    out.push_back(g);
  }
  return out;
}

namespace {

// y + left*(t - a) for t < a, y for a <= t <= b, y + right*(t - b) for t > b.
struct Bound {
  double y = 0;
  double a = 0;
  double b = 0;
  double left = 0;
  double right = 0;

  static Bound constant(double y) { return {y, 0, 0, 0, 0}; }
  static Bound linear(double y, double t0, double slope) { return {y, t0, t0, slope, slope}; }
  // y + sign * speed * dist(t, [a, b])
  static Bound distance(double y, double a, double b, double sign, double speed) {
    return {y, a, b, -sign * speed, sign * speed};
  }
  double at(double t) const {
    if (t < a) return y + left * (t - a);
    if (t > b) return y + right * (t - b);
    return y;
  }
  double slope_at(double t) const {
    if (t < a) return left;
    if (t > b) return right;
    return a == b ? right : 0.0;
  }
};

// First t' >= t with upper(t') - lower(t') >= -kHeightTol, no later than limit.
std::optional<double> first_nonnegative(const Bound& upper, const Bound& lower, double t,
                                        double limit) {
  std::vector<double> pts{t};
  for (double p : {upper.a, upper.b, lower.a, lower.b}) {
    if (p > t && p <= limit) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double p = pts[i];
    double g = upper.at(p) - lower.at(p);
    if (g >= -kHeightTol) return p;
    double q = i + 1 < pts.size() ? pts[i + 1] : limit;
    double mid = std::isfinite(q) ? 0.5 * (p + q) : p + 1.0;
    double slope = upper.slope_at(mid) - lower.slope_at(mid);
    if (slope > 0) {
      double root = p + (-g) / slope;
      if (root <= q) return std::max(root, std::nextafter(p, kForever));
    }
  }
  return std::nullopt;
}

struct Search {
  std::vector<Bound> lowers;
  std::vector<Bound> uppers;
  double t_lo = 0;
  double t_hi = kForever;
};

Search build_search(const ReclaimContext& ctx, const PadGap& pad, const ReclaimerGap& gap) {
  Search s;
  const double v = ctx.speed;
  const double d = ctx.duration;
  s.lowers.push_back(Bound::constant(pad.y1 + ctx.length / 2));
  s.uppers.push_back(Bound::constant(pad.y2 - ctx.length / 2));
  s.lowers.push_back(Bound::linear(gap.prev_position, gap.prev_end, -v));
  s.uppers.push_back(Bound::linear(gap.prev_position, gap.prev_end, v));
  s.t_lo = std::max(ctx.not_before, gap.prev_end);
  s.t_hi = std::min(ctx.not_after, pad.t2 - d);
  if (!gap.unbounded()) {
    double last = gap.next_start - d;
    s.lowers.push_back(Bound::linear(gap.next_position, last, v));
    s.uppers.push_back(Bound::linear(gap.next_position, last, -v));
    s.t_hi = std::min(s.t_hi, last);
  }
  if (ctx.partner_jobs) {
    for (const ReclaimJob& o : *ctx.partner_jobs) {
      // A partner job on the far side of every admissible position never blocks.
      if (ctx.low_side ? o.position >= pad.y2 : o.position <= pad.y1) continue;
      double reach = std::max(std::abs(pad.y2 - o.position), std::abs(o.position - pad.y1)) / v;
      if (o.end + reach < s.t_lo || o.start - d - reach > s.t_hi) continue;
      if (ctx.low_side) {
        s.uppers.push_back(Bound::distance(o.position, o.start - d, o.end, 1.0, v));
      } else {
        s.lowers.push_back(Bound::distance(o.position, o.start - d, o.end, -1.0, v));
      }
    }
  }
  return s;
}

// Jump past blocked windows and daily outbound limits; nullopt when t is clear.
std::optional<double> time_jump(const ReclaimContext& ctx, double t) {
  const double d = ctx.duration;
  if (ctx.blocked && !ctx.blocked->empty()) {
    const auto& b = *ctx.blocked;
    auto it = std::upper_bound(b.begin(), b.end(), t + kTimeTol,
                               [](double x, const std::pair<Hours, Hours>& iv) {
                                 return x < iv.second;
                               });
    if (it != b.end() && it->first < t + d - kTimeTol) return it->second;
  }
  if (ctx.ledger) return outbound_jump(*ctx.ledger, ctx.outbound, t, d, ctx.rate);
  return std::nullopt;
}

constexpr int kMaxIterations = 1'000'000;

std::optional<LeftmostEdge> run_search(const ReclaimContext& ctx, const Search& s,
                                       std::optional<double> fixed) {
  const Bound pin = Bound::constant(fixed.value_or(0));
  double t = s.t_lo;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if (!(t <= s.t_hi + kTimeTol)) return std::nullopt;
    if (auto j = time_jump(ctx, t)) {
      t = *j;
      continue;
    }
    std::size_t k = 0, m = 0;
    for (std::size_t i = 1; i < s.lowers.size(); ++i) {
      if (s.lowers[i].at(t) > s.lowers[k].at(t)) k = i;
    }
    for (std::size_t i = 1; i < s.uppers.size(); ++i) {
      if (s.uppers[i].at(t) < s.uppers[m].at(t)) m = i;
    }
    double lo = s.lowers[k].at(t);
    double hi = s.uppers[m].at(t);
    std::optional<double> next;
    if (fixed) {
      if (lo > *fixed + kHeightTol) {
        next = first_nonnegative(pin, s.lowers[k], t, s.t_hi);
      } else if (hi < *fixed - kHeightTol) {
        next = first_nonnegative(s.uppers[m], pin, t, s.t_hi);
      } else {
        return LeftmostEdge{t, *fixed, *fixed};
      }
    } else {
      if (lo > hi + kHeightTol) {
        next = first_nonnegative(s.uppers[m], s.lowers[k], t, s.t_hi);
      } else {
        return LeftmostEdge{t, lo, std::max(lo, hi)};
      }
    }
    if (!next) return std::nullopt;
    t = *next;
  }
  throw std::logic_error("reclaim search did not converge");
}

}  // namespace

std::optional<Hours> earliest_reclaim_time(const ReclaimContext& ctx, const PadGap& pad,
                                           const ReclaimerGap& gap, Metres height) {
  Search s = build_search(ctx, pad, gap);
  auto e = run_search(ctx, s, height);
  if (!e) return std::nullopt;
  return e->start;
}

std::optional<LeftmostEdge> earliest_reclaim_edge(const ReclaimContext& ctx, const PadGap& pad,
                                                  const ReclaimerGap& gap) {
  Search s = build_search(ctx, pad, gap);
  return run_search(ctx, s, std::nullopt);
}

std::vector<Metres> get_critical_heights(const ReclaimContext& ctx, const PadGap& pad,
                                         const ReclaimerGap& gap) {
  auto edge = earliest_reclaim_edge(ctx, pad, gap);
  if (!edge) return {};
  return critical_heights(*edge, gap, ctx.partner_jobs);
}

std::vector<Metres> critical_heights(const LeftmostEdge& edge, const ReclaimerGap& gap,
                                     const std::vector<ReclaimJob>* partner_jobs) {
  std::vector<Metres> out{edge.low};
  auto inside = [&](Metres y) { return y > edge.low + kHeightTol && y < edge.high - kHeightTol; };
  if (inside(gap.prev_position)) out.push_back(gap.prev_position);
  if (!gap.unbounded() && inside(gap.next_position)) out.push_back(gap.next_position);
  if (partner_jobs) {
    for (const ReclaimJob& o : *partner_jobs) {
      if (inside(o.position)) out.push_back(o.position);
    }
  }
  if (edge.high > edge.low + kHeightTol) out.push_back(edge.high);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Polygon::Polygon(std::initializer_list<TimePos> pts) {
  for (const TimePos& p : pts) push_back(p);
}

void Polygon::push_back(const TimePos& p) {
  if (size_ == kCapacity) throw std::logic_error("polygon capacity exceeded");
  pts_[size_++] = p;
}

Polygon clip_half_plane(const Polygon& poly, double a, double b, double c) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const TimePos& p = poly[i];
    const TimePos& q = poly[(i + 1) % n];
    double fp = a * p.t + b * p.y - c;
    double fq = a * q.t + b * q.y - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      double r = fp / (fp - fq);
      out.push_back({p.t + r * (q.t - p.t), p.y + r * (q.y - p.y)});
    }
  }
  return out;
}

double polygon_area(const Polygon& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const TimePos& p = poly[i];
    const TimePos& q = poly[(i + 1) % poly.size()];
    s += p.t * q.y - q.t * p.y;
  }
  return std::abs(s) / 2;
}

namespace {

Polygon box(double t1, double t2, double y1, double y2) {
  if (!(t2 > t1) || !(y2 > y1)) return {};
  return {{t1, y1}, {t2, y1}, {t2, y2}, {t1, y2}};
}

// Points reachable after leaving (t0, y0) at speed v: |y - y0| <= v (t - t0).
Polygon after_anchor(Polygon p, double t0, double y0, double v) {
  p = clip_half_plane(p, -v, 1, y0 - v * t0);
  return clip_half_plane(p, -v, -1, -y0 - v * t0);
}

// Points from which (t1, y1) is reachable in time: |y - y1| <= v (t1 - t).
Polygon before_anchor(Polygon p, double t1, double y1, double v) {
  p = clip_half_plane(p, v, 1, y1 + v * t1);
  return clip_half_plane(p, v, -1, v * t1 - y1);
}

}  // namespace

FlexibilityLoss flexibility_loss(const ReclaimerGap& gap, Hours start, Hours duration,
                                 Metres height, double speed, Metres track, bool low_side,
                                 const std::vector<ReclaimerGap>& partner_gaps) {
  const double v = speed;
  const double sweep = track / v;
  const double left = std::max(gap.prev_end, start - sweep);
  const double right = std::min(gap.next_start, start + duration + sweep);
  FlexibilityLoss loss;

  auto own_region = [&](double t1, double t2) {
    Polygon p = box(t1, t2, 0, track);
    p = after_anchor(std::move(p), gap.prev_end, gap.prev_position, v);
    if (!gap.unbounded()) p = before_anchor(std::move(p), gap.next_start, gap.next_position, v);
    return p;
  };
  const Polygon region_before = own_region(left, start);
  const Polygon region_after = own_region(start + duration, right);
  double whole_before = polygon_area(region_before);
  double whole_after = polygon_area(region_after);
  double during = polygon_area(own_region(start, start + duration));
  Polygon g1 = before_anchor(region_before, start, height, v);
  Polygon g2 = after_anchor(region_after, start + duration, height, v);
  loss.before = std::max(0.0, whole_before - polygon_area(g1));
  loss.after = std::max(0.0, whole_after - polygon_area(g2));
  // While the job runs the reclaimer is pinned; the rest of that strip is lost.
  loss.before += during / 2;
  loss.after += during / 2;

  // Region the partner can no longer enter: behind the job, widening at speed v.
  const double t_from = start - sweep;
  const double t_to = start + duration + sweep;
  for (const ReclaimerGap& pg : partner_gaps) {
    if (pg.prev_end >= t_to || pg.next_start <= t_from) continue;
    double t1 = std::max(t_from, pg.prev_end);
    double t2 = std::min(t_to, pg.next_start);
    Polygon p = box(t1, t2, 0, track);
    if (low_side) {
      p = clip_half_plane(std::move(p), 0, 1, height);
      p = clip_half_plane(std::move(p), -v, 1, height - v * start);
      p = clip_half_plane(std::move(p), v, 1, v * (start + duration) + height);
    } else {
      p = clip_half_plane(std::move(p), 0, -1, -height);
      p = clip_half_plane(std::move(p), -v, -1, -height - v * start);
      p = clip_half_plane(std::move(p), v, -1, v * (start + duration) - height);
    }
    p = after_anchor(std::move(p), pg.prev_end, pg.prev_position, v);
    if (!pg.unbounded()) p = before_anchor(std::move(p), pg.next_start, pg.next_position, v);
    loss.partner += polygon_area(p);
  }
  return loss;
}

bool placement_less(const PlacementKey& a, const PlacementKey& b) {
  double fa = std::floor(a.completion);
  double fb = std::floor(b.completion);
  if (fa != fb) return fa < fb;
  if (a.loss != b.loss) return a.loss < b.loss;
  if (a.completion != b.completion) return a.completion < b.completion;
  return std::tie(a.pad, a.position, a.reclaimer, a.build_start) <
         std::tie(b.pad, b.position, b.reclaimer, b.build_start);
}

}  // namespace coalchain
