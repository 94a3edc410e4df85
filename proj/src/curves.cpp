#include "mobius/curves.hpp"

#include <algorithm>
#include <cmath>

namespace mobius {

CurveId curve_id_from_string(const std::string& s) {
  if (s == "c_boundary") return CurveId::Boundary;
  if (s == "c_core_nbhd") return CurveId::CoreNbhd;
  if (s == "c_two_punctures") return CurveId::TwoPunctures;
  throw ConfigError("unknown curve id: " + s);
}

std::string to_string(CurveId id) {
  switch (id) {
    case CurveId::Boundary:
      return "c_boundary";
    case CurveId::CoreNbhd:
      return "c_core_nbhd";
    case CurveId::TwoPunctures:
      return "c_two_punctures";
  }
  return "?";
}

int count_cut_crossings(const CoverPolyline& line) {
  int n = 0;
  for (size_t i = 0; i + 1 < line.pts.size(); ++i) {
    const int a = static_cast<int>(std::floor(line.pts[i].x + kHalf));
    const int b = static_cast<int>(std::floor(line.pts[i + 1].x + kHalf));
    n += std::abs(b - a);
  }
  return n;
}

namespace {

bool in_pieces(const std::vector<Rect>& pieces, const Vec2& p) {
  for (const auto& r : pieces) {
    if (r.contains(p)) return true;
  }
  return false;
}

int count_runs(const std::vector<bool>& member, bool closed) {
  int runs = 0;
  const size_t n = member.size();
  for (size_t i = 0; i < n; ++i) {
    const bool prev = i == 0 ? member[n - 1] : member[i - 1];
    if (member[i] && (!prev || (i == 0 && !closed))) ++runs;
  }
  if (closed && n > 0 && member[0] && member[n - 1] && runs == 0) runs = 1;
  return runs;
}

}  // namespace

std::map<std::string, int> count_branches(const CoverPolyline& line,
                                          const RegionDecomposition& frame) {
  std::map<std::string, int> out;
  const CoverPolyline fine = resample(line, 0.004);
  std::vector<Vec2> chart;
  chart.reserve(fine.pts.size());
  for (const auto& p : fine.pts) chart.push_back(project(p).chart());
  // drop the duplicated closing sample so cyclic runs merge correctly
  const bool closed = true;
  std::vector<Vec2> pts(chart.begin(), chart.end() - 1);
  auto count_for = [&](const std::vector<Rect>& pieces) {
    std::vector<bool> member(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) member[i] = in_pieces(pieces, pts[i]);
    return count_runs(member, closed);
  };
  for (const auto& j : frame.junctions) out[j.name] = count_for(j.pieces);
  for (const auto& s : frame.strips) out[s.name] = count_for(s.pieces);
  return out;
}

double tubular_reach_estimate(const CoverPolyline& line) {
  const double step = 0.01;
  const CoverPolyline fine = resample(line, step);
  std::vector<BandPoint> pts;
  for (const auto& p : fine.pts) pts.push_back(project(p));
  if (!pts.empty()) pts.pop_back();
  const size_t n = pts.size();
  const double total = fine.length();
  double reach = kHalf;
  for (size_t i = 0; i < n; ++i) {
    reach = std::min(reach, kHalf - std::abs(pts[i].y()));  // boundary
  }
  const double arc_guard = 0.1;
  const size_t guard = static_cast<size_t>(arc_guard / step);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + guard; j < n; ++j) {
      const size_t cyc = std::min(j - i, n - (j - i));
      if (cyc < guard) continue;
      reach = std::min(reach, distance(pts[i], pts[j]) / 2.0);
    }
  }
  (void)total;
  return reach;
}

CurveSpec catalog_curve(CurveId id, const RegionDecomposition& frame) {
  CurveSpec c;
  c.id = id;
  switch (id) {
    case CurveId::Boundary: {
      c.level = kHalf - frame.eps / 2.0;
      c.inner_kind = SideKind::MobiusBand;
      c.inner_area = 2.0 * c.level;
      c.polyline.pts = {{-0.25, c.level}, {1.75, c.level}};
      c.polyline.closure_power = 2;
      break;
    }
    case CurveId::CoreNbhd: {
      c.level = 0.25;
      c.inner_kind = SideKind::MobiusBand;
      c.inner_area = 2.0 * c.level;
      c.polyline.pts = {{-0.25, c.level}, {1.75, c.level}};
      c.polyline.closure_power = 2;
      break;
    }
    case CurveId::TwoPunctures: {
      c.center = band_point(0.0, 0.0);
      c.radius = 0.35;
      c.inner_kind = SideKind::Disk;
      c.inner_area = M_PI * c.radius * c.radius;
      const int segs = 256;
      for (int k = 0; k <= segs; ++k) {
        const double th = 2.0 * M_PI * k / segs;
        c.polyline.pts.push_back(
            {c.radius * std::cos(th), c.radius * std::sin(th)});
      }
      c.polyline.closure_power = 0;
      break;
    }
  }
  c.cut_crossings = count_cut_crossings(c.polyline);
  c.branch_count = count_branches(c.polyline, frame);
  for (const auto& [name, cnt] : c.branch_count) {
    c.max_branch = std::max(c.max_branch, cnt);
  }
  c.tubular_reach = tubular_reach_estimate(c.polyline);

  if (id == CurveId::Boundary) {
    // frame curve: contained in N, perpendicular to the cut and the strip
    // leaves, single monotone branch per junction
    c.minimal_position = true;
    const CoverPolyline fine = resample(c.polyline, 0.01);
    for (const auto& p : fine.pts) {
      const Vec2 q = project(p).chart();
      if (frame.v1.contains(q) || frame.v2.contains(q)) {
        c.minimal_position = false;
        break;
      }
    }
  }
  return c;
}

Isotopy supported_twist(const CurveSpec& curve, const TwistOptions& opt) {
  const double xi = opt.xi.value_or(curve.tubular_reach / 2.0);
  if (!(xi > 0) || xi > curve.tubular_reach) {
    throw ConfigError("supported_twist: xi exceeds the tubular reach");
  }
  const double a = curve.inner_area;
  const double d = opt.d.value_or(std::min(a / 8.0, xi / 2.0));
  if (d > xi) {
    throw ConfigError("supported_twist: collar width d=" + std::to_string(d) +
                      " exceeds the xi-neighborhood xi=" + std::to_string(xi));
  }
  if (curve.inner_kind == SideKind::MobiusBand) {
    return band_slide(a, d);
  }
  return disk_slide(curve.center, a, d);
}

// ---------------------------------------------------------------------------

double ContractionMap::Piece::eval(double x) const {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

double ContractionMap::IntervalMap::eval(double x) const {
  for (const auto& p : pieces) {
    if (x <= p.x1 || &p == &pieces.back()) {
      if (x < p.x0) return p.y0;  // clamp (numerical round-off at -1/2)
      return p.eval(x);
    }
  }
  return x;
}

ContractionMap::IntervalMap ContractionMap::build_phi_x(double px, double e0,
                                                        double e1) {
  IntervalMap m;
  const double half = kHalf;
  m.pieces.push_back({-half, -half + e0, -half, -half + e1, 0.5, 0.5});
  m.pieces.push_back({-half + e0, px - e0, -half + e1, px - e1, 0.5, 0.5});
  m.pieces.push_back({px - e0, px + e0, px - e1, px + e1, 0.5, 0.5});
  m.pieces.push_back({px + e0, half - e0, px + e1, half - e1, 0.5, 0.5});
  m.pieces.push_back({half - e0, half, half - e1, half, 0.5, 0.5});
  return m;
}

ContractionMap::IntervalMap ContractionMap::build_phi_y(double e0, double e1) {
  IntervalMap m;
  const double half = kHalf;
  const double s0 = 1.6;  // repelling at the centre line
  m.pieces.push_back({-half, -half + e0, -half, -half + e1, 0.5, 0.5});
  m.pieces.push_back({-half + e0, 0.0, -half + e1, 0.0, 0.5, s0});
  m.pieces.push_back({0.0, half - e0, 0.0, half - e1, s0, 0.5});
  m.pieces.push_back({half - e0, half, half - e1, half, 0.5, 0.5});
  return m;
}

ContractionMap::ContractionMap(double a1, double a2, double eps) {
  const RegionDecomposition d = region_decomposition(a1, a2, eps);
  eps0_ = eps;
  px_ = d.dividing_line_x;
  fx_ = build_phi_x(px_, eps, eps / 2.0);
  fy_ = build_phi_y(eps, eps / 2.0);
  // monotonicity guard
  double prev_x = -kHalf, prev_y = -kHalf;
  for (int i = 1; i <= 2000; ++i) {
    const double x = -kHalf + i * (1.0 / 2000);
    if (fx_.eval(x) <= fx_.eval(prev_x) || fy_.eval(x) <= fy_.eval(prev_y)) {
      throw ConfigError("ContractionMap: interval map not increasing");
    }
    prev_x = x;
    prev_y = x;
  }
}

double ContractionMap::phi_x(double s) const { return fx_.eval(s); }
double ContractionMap::phi_y(double t) const { return fy_.eval(t); }

CoverPoint ContractionMap::apply_cover(const CoverPoint& p) const {
  const int n = static_cast<int>(std::floor(p.x + kHalf));
  const CoverPoint chart = tau_pow(p, -n);
  const CoverPoint mapped{fx_.eval(chart.x), fy_.eval(chart.y)};
  return tau_pow(mapped, n);
}

BandPoint ContractionMap::apply(const BandPoint& p) const {
  return project(apply_cover(p.lift));
}

CoverPolyline ContractionMap::apply(const CoverPolyline& line) const {
  CoverPolyline out;
  out.closure_power = line.closure_power;
  const CoverPolyline fine = resample(line, 0.01);
  out.pts.reserve(fine.pts.size());
  for (const auto& p : fine.pts) out.pts.push_back(apply_cover(p));
  return out;
}

}  // namespace mobius
