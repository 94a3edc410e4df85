#include "mobius/polyline.hpp"

#include <algorithm>
#include <cmath>

namespace mobius {

double CoverPolyline::length() const {
  double s = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dx = pts[i + 1].x - pts[i].x;
    const double dy = pts[i + 1].y - pts[i].y;
    s += std::sqrt(dx * dx + dy * dy);
  }
  return s;
}

CoverPolyline resample(const CoverPolyline& line, double max_step) {
  CoverPolyline out;
  out.closure_power = line.closure_power;
  if (line.pts.empty()) return out;
  out.pts.push_back(line.pts.front());
  for (size_t i = 0; i + 1 < line.pts.size(); ++i) {
    const CoverPoint a = line.pts[i];
    const CoverPoint b = line.pts[i + 1];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len = std::sqrt(dx * dx + dy * dy);
    const int n = std::max(1, static_cast<int>(std::ceil(len / max_step)));
    for (int k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      out.pts.push_back({a.x + dx * t, a.y + dy * t});
    }
  }
  return out;
}

namespace {

double quotient_gap(const CoverPoint& a, const CoverPoint& b) {
  return distance(project(a), project(b));
}

struct RefineCtx {
  const PointMap& map;
  double max_gap;
  const ClearanceFn& clearance;
  double gap_floor;
};

bool gap_ok(const RefineCtx& ctx, const CoverPoint& ia, const CoverPoint& ib) {
  const double gap = quotient_gap(ia, ib);
  if (gap > ctx.max_gap) return false;
  if (!ctx.clearance) return true;
  if (gap <= ctx.gap_floor) return true;
  const CoverPoint mid{0.5 * (ia.x + ib.x), 0.5 * (ia.y + ib.y)};
  const double scale = ctx.clearance(project(mid));
  return gap <= std::max(ctx.gap_floor, 0.2 * scale);
}

void map_segment(const RefineCtx& ctx, const CoverPoint& sa,
                 const CoverPoint& sb, const CoverPoint& ia,
                 const CoverPoint& ib, int depth,
                 std::vector<CoverPoint>& out) {
  if (depth <= 0 || gap_ok(ctx, ia, ib)) {
    out.push_back(ib);
    return;
  }
  const CoverPoint mid{0.5 * (sa.x + sb.x), 0.5 * (sa.y + sb.y)};
  const CoverPoint im = ctx.map(mid);
  map_segment(ctx, sa, mid, ia, im, depth - 1, out);
  map_segment(ctx, mid, sb, im, ib, depth - 1, out);
}

}  // namespace

CoverPolyline apply_map_adaptive(const PointMap& map, const CoverPolyline& line,
                                 double max_gap, int max_depth,
                                 const ClearanceFn& clearance,
                                 double gap_floor) {
  CoverPolyline out;
  out.closure_power = line.closure_power;
  if (line.pts.empty()) return out;
  const RefineCtx ctx{map, max_gap, clearance, gap_floor};
  CoverPoint prev_src = line.pts.front();
  CoverPoint prev_img = map(prev_src);
  out.pts.push_back(prev_img);
  for (size_t i = 1; i < line.pts.size(); ++i) {
    const CoverPoint src = line.pts[i];
    const CoverPoint img = map(src);
    map_segment(ctx, prev_src, src, prev_img, img, max_depth, out.pts);
    prev_src = src;
    prev_img = img;
  }
  return out;
}

std::optional<std::pair<double, double>> segment_intersection(
    const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const Vec2 r = a1 - a0;
  const Vec2 s = b1 - b0;
  const double rxs = r.x * s.y - r.y * s.x;
  if (std::abs(rxs) < 1e-15) return std::nullopt;
  const Vec2 qp = b0 - a0;
  const double t = (qp.x * s.y - qp.y * s.x) / rxs;
  const double u = (qp.x * r.y - qp.y * r.x) / rxs;
  if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return std::nullopt;
  return std::make_pair(t, u);
}

namespace {

struct Crossing {
  double t;  // position along the chart segment
  FreeGen gen;
  int sign;
};

// crossings of a chart segment with the two vertical arcs K1, K2
void collect_k_crossings(const Vec2& a, const Vec2& b, const CutSystem& cuts,
                         std::vector<Crossing>& out) {
  const std::array<std::pair<double, FreeGen>, 2> arcs = {
      std::make_pair(cuts.k1_x, FreeGen::G1),
      std::make_pair(cuts.k2_x, FreeGen::G2)};
  for (const auto& [kx, gen] : arcs) {
    const double da = a.x - kx;
    const double db = b.x - kx;
    // vertices exactly on the arc line take the positive side, so a pass
    // through a vertex counts once and a tangency twice (cancelling)
    const bool left_a = da < 0, left_b = db < 0;
    if (left_a == left_b) continue;
    if (da == db) throw DomainError("loop_word: segment along a cut arc");
    const double t = da / (da - db);
    const double y = a.y + t * (b.y - a.y);
    if (y <= cuts.margin || y >= kHalf - cuts.margin) {
      if (y > -cuts.margin && y < kHalf + cuts.margin) {
        throw DomainError("loop_word: crossing too close to a cut endpoint");
      }
      continue;  // clearly below the puncture or beyond the band
    }
    out.push_back({t, gen, db > da ? 1 : -1});
  }
}

}  // namespace

FreeWord loop_word(const CoverPolyline& loop, const CutSystem& cuts) {
  FreeWord word;
  if (loop.pts.size() < 2) return word;
  for (size_t i = 0; i + 1 < loop.pts.size(); ++i) {
    const BandPoint pa = project(loop.pts[i]);
    const BandPoint pb = project(loop.pts[i + 1]);
    Vec2 a = pa.chart();
    Vec2 b = pb.chart();
    std::vector<Crossing> crossings;
    if (std::abs(b.x - a.x) > kHalf) {
      // one branch-cut crossing inside this segment
      const bool exit_right = a.x > 0;
      // unwrap b next to a
      const Vec2 b_unwrapped =
          exit_right ? Vec2{b.x + 1.0, -b.y} : Vec2{b.x - 1.0, -b.y};
      const double edge = exit_right ? kHalf : -kHalf;
      const double t = (edge - a.x) / (b_unwrapped.x - a.x);
      if (!(t > 0.0 && t < 1.0)) {
        throw DomainError("loop_word: inconsistent cut crossing");
      }
      const double ycross = a.y + t * (b_unwrapped.y - a.y);
      if (std::abs(ycross) >= kHalf - cuts.margin) {
        throw DomainError("loop_word: cut crossing at the band corner");
      }
      // split at the cut and collect arc crossings on both chart pieces
      const Vec2 hit{edge, ycross};
      const Vec2 reentry{-edge, -ycross};
      collect_k_crossings(a, hit, cuts, crossings);
      std::sort(crossings.begin(), crossings.end(),
                [](const Crossing& l, const Crossing& r) { return l.t < r.t; });
      for (const auto& c : crossings) word.push(c.gen, c.sign);
      word.push(FreeGen::Gc, exit_right ? 1 : -1);
      crossings.clear();
      collect_k_crossings(reentry, b, cuts, crossings);
      std::sort(crossings.begin(), crossings.end(),
                [](const Crossing& l, const Crossing& r) { return l.t < r.t; });
      for (const auto& c : crossings) word.push(c.gen, c.sign);
      continue;
    }
    collect_k_crossings(a, b, cuts, crossings);
    std::sort(crossings.begin(), crossings.end(),
              [](const Crossing& l, const Crossing& r) { return l.t < r.t; });
    for (const auto& c : crossings) word.push(c.gen, c.sign);
  }
  return reduce(word);
}

}  // namespace mobius
