#include "mobius/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace mobius {

CoverPoint tau(const CoverPoint& p) { return {p.x + 1.0, -p.y}; }

CoverPoint tau_inverse(const CoverPoint& p) { return {p.x - 1.0, -p.y}; }

CoverPoint tau_pow(const CoverPoint& p, int n) {
  const double flip = (n % 2 == 0) ? 1.0 : -1.0;
  return {p.x + n, flip * p.y};
}

BandPoint project(const CoverPoint& p) {
  if (std::abs(p.y) > kHalf + kPointTol) {
    throw DomainError("project: y outside [-1/2, 1/2]");
  }
  const double y = std::clamp(p.y, -kHalf, kHalf);
  // unique n with x - n in [-1/2, 1/2)
  const int n = static_cast<int>(std::floor(p.x + kHalf));
  return BandPoint{tau_pow({p.x, y}, -n)};
}

BandPoint band_point(double x, double y) { return project({x, y}); }

bool same_point(const BandPoint& p, const BandPoint& q, double tol) {
  // compare within the quotient; near the cut the two edge representatives
  // of one point differ by tau
  return distance(p, q) <= tol;
}

double distance_windowed(const BandPoint& p, const BandPoint& q, int window) {
  double best = std::numeric_limits<double>::infinity();
  for (int n = -window; n <= window; ++n) {
    const CoverPoint s = tau_pow(q.lift, n);
    const double dx = p.lift.x - s.x;
    const double dy = p.lift.y - s.y;
    best = std::min(best, dx * dx + dy * dy);
  }
  return std::sqrt(best);
}

double distance(const BandPoint& p, const BandPoint& q) {
  return distance_windowed(p, q, 1);
}

GeodesicLeg geodesic_interior(const BandPoint& a, const BandPoint& b) {
  if (!a.in_open_chart() || !b.in_open_chart()) {
    throw DomainError("geodesic_interior: endpoint on the branch cut");
  }
  GeodesicLeg leg;
  leg.start = a;
  leg.end = b;
  leg.variant = LegVariant::Interior;
  leg.cover_a = a.lift;
  leg.cover_b = b.lift;
  return leg;
}

GeodesicLeg geodesic_to_branch(const BandPoint& z, double q_y, CutSide side) {
  if (!z.in_open_chart()) {
    throw DomainError("geodesic_to_branch: start not in the open chart");
  }
  if (std::abs(q_y) > kHalf + kPointTol) {
    throw DomainError("geodesic_to_branch: |q_y| > 1/2");
  }
  GeodesicLeg leg;
  leg.start = z;
  leg.variant =
      side == CutSide::Plus ? LegVariant::ToBranchPlus : LegVariant::ToBranchMinus;
  leg.cover_a = z.lift;
  leg.cover_b = side == CutSide::Plus ? CoverPoint{kHalf, q_y}
                                      : CoverPoint{-kHalf, -q_y};
  leg.end = project(leg.cover_b);
  return leg;
}

namespace {

// squared distance between leg points at time t for a fixed deck shift n
double sq_dist_at(const GeodesicLeg& a, const GeodesicLeg& b, int n, double t) {
  const CoverPoint pa = a.at(t);
  const CoverPoint pb = tau_pow(b.at(t), n);
  const double dx = pa.x - pb.x;
  const double dy = pa.y - pb.y;
  return dx * dx + dy * dy;
}

}  // namespace

double min_simultaneous_distance(const GeodesicLeg& a, const GeodesicLeg& b) {
  // For a fixed deck shift the difference vector is affine in t, so the
  // squared distance is a convex quadratic; minimize per shift and take min.
  double best = std::numeric_limits<double>::infinity();
  for (int n = -1; n <= 1; ++n) {
    const Vec2 d0 = {a.cover_a.x - tau_pow(b.cover_a, n).x,
                     a.cover_a.y - tau_pow(b.cover_a, n).y};
    const Vec2 d1 = {a.cover_b.x - tau_pow(b.cover_b, n).x,
                     a.cover_b.y - tau_pow(b.cover_b, n).y};
    const Vec2 v = d1 - d0;
    double t = 0.0;
    const double vv = v.norm2();
    if (vv > 0) t = std::clamp(-d0.dot(v) / vv, 0.0, 1.0);
    for (double tc : {0.0, t, 1.0}) {
      best = std::min(best, sq_dist_at(a, b, n, tc));
    }
  }
  return std::sqrt(best);
}

double min_simultaneous_distance_grid(const GeodesicLeg& a,
                                      const GeodesicLeg& b, int samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const BandPoint pa = project(a.at(t));
    const BandPoint pb = project(b.at(t));
    best = std::min(best, distance(pa, pb));
  }
  return best;
}

RegionDecomposition region_decomposition(double a1, double a2, double eps) {
  if (!(a1 > 0) || !(a2 > 0) || a1 + a2 > 1.0 + kPointTol) {
    throw ConfigError("region_decomposition: need a1, a2 > 0 and a1+a2 <= 1");
  }
  const double s = a1 + a2;
  const double a1s = a1 / s;
  const double a2s = a2 / s;
  if (!(eps > 0) || eps >= std::min(a1s, a2s) / 4.0) {
    throw ConfigError("region_decomposition: need 0 < eps < min(a_i*)/4");
  }

  RegionDecomposition d;
  d.a1 = a1;
  d.a2 = a2;
  d.eps = eps;
  d.a1_star = a1s;
  d.a2_star = a2s;
  const double px = -kHalf + a1s;  // dividing line, and the x of ell'
  d.dividing_line_x = px;

  d.v1 = Rect{-kHalf + eps, -kHalf + eps, px - eps, kHalf - eps};
  d.v2 = Rect{px + eps, -kHalf + eps, kHalf - eps, kHalf - eps};

  // Six strips.  The cut strip straddles x = +-1/2 (two chart pieces); the
  // boundary strips between junctions carry vertical (transverse) leaves,
  // the vertical strips carry horizontal leaves.
  StripSpec bottom_left{"strip_bottom_left",
                        {Rect{-kHalf + eps, -kHalf, px - eps, -kHalf + eps}},
                        LeafDirection::Vertical};
  StripSpec bottom_right{"strip_bottom_right",
                         {Rect{px + eps, -kHalf, kHalf - eps, -kHalf + eps}},
                         LeafDirection::Vertical};
  StripSpec top_left{"strip_top_left",
                     {Rect{-kHalf + eps, kHalf - eps, px - eps, kHalf}},
                     LeafDirection::Vertical};
  StripSpec top_right{"strip_top_right",
                      {Rect{px + eps, kHalf - eps, kHalf - eps, kHalf}},
                      LeafDirection::Vertical};
  StripSpec cut_strip{"strip_cut",
                      {Rect{kHalf - eps, -kHalf + eps, kHalf, kHalf - eps},
                       Rect{-kHalf, -kHalf + eps, -kHalf + eps, kHalf - eps}},
                      LeafDirection::Horizontal};
  StripSpec mid_strip{"strip_dividing",
                      {Rect{px - eps, -kHalf + eps, px + eps, kHalf - eps}},
                      LeafDirection::Horizontal};
  d.strips = {bottom_left, bottom_right, top_left, top_right, cut_strip,
              mid_strip};

  // Four junctions: two glued pairs at the cut corners, two at the ends of
  // the dividing line.
  JunctionSpec cut_a{"junction_cut_a",
                     {Rect{-kHalf, -kHalf, -kHalf + eps, -kHalf + eps},
                      Rect{kHalf - eps, kHalf - eps, kHalf, kHalf}},
                     {"strip_bottom_left", "strip_top_right", "strip_cut"}};
  JunctionSpec cut_b{"junction_cut_b",
                     {Rect{-kHalf, kHalf - eps, -kHalf + eps, kHalf},
                      Rect{kHalf - eps, -kHalf, kHalf, -kHalf + eps}},
                     {"strip_top_left", "strip_bottom_right", "strip_cut"}};
  JunctionSpec div_bottom{
      "junction_div_bottom",
      {Rect{px - eps, -kHalf, px + eps, -kHalf + eps}},
      {"strip_bottom_left", "strip_bottom_right", "strip_dividing"}};
  JunctionSpec div_top{
      "junction_div_top",
      {Rect{px - eps, kHalf - eps, px + eps, kHalf}},
      {"strip_top_left", "strip_top_right", "strip_dividing"}};
  d.junctions = {cut_a, cut_b, div_bottom, div_top};
  return d;
}

std::string describe(const RegionDecomposition& d) {
  std::ostringstream os;
  os.precision(12);
  auto rect = [&os](const Rect& r) {
    os << "[" << r.x0 << "," << r.y0 << "," << r.x1 << "," << r.y1 << "]";
  };
  os << "a1*=" << d.a1_star << " a2*=" << d.a2_star
     << " line_x=" << d.dividing_line_x << "\n";
  os << "V1 ";
  rect(d.v1);
  os << "\nV2 ";
  rect(d.v2);
  os << "\n";
  for (const auto& j : d.junctions) {
    os << j.name;
    for (const auto& r : j.pieces) {
      os << " ";
      rect(r);
    }
    os << "\n";
  }
  for (const auto& s : d.strips) {
    os << s.name << (s.leaves == LeafDirection::Horizontal ? " H" : " V");
    for (const auto& r : s.pieces) {
      os << " ";
      rect(r);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace mobius
