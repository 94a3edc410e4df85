#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobius {

// Geometry of the band M = (R x I)/<tau>, I = [-1/2, 1/2],
// tau(x, y) = (x + 1, -y).  Canonical fundamental domain: x in [-1/2, 1/2).
// The branch cut is the arc pi({1/2} x I) = pi({-1/2} x I); canonical
// representatives of cut points carry x = -1/2.

inline constexpr double kHalf = 0.5;
inline constexpr double kPointTol = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 lerp(const Vec2& a, const Vec2& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point of the covering strip R x I.
struct CoverPoint {
  double x = 0.0;
  double y = 0.0;

  Vec2 vec() const { return {x, y}; }
};

CoverPoint tau(const CoverPoint& p);
CoverPoint tau_inverse(const CoverPoint& p);
CoverPoint tau_pow(const CoverPoint& p, int n);

// Point of M held as its canonical lift, x in [-1/2, 1/2).
struct BandPoint {
  CoverPoint lift;

  double x() const { return lift.x; }
  double y() const { return lift.y; }
  Vec2 chart() const { return {lift.x, lift.y}; }
  bool on_cut(double tol = kPointTol) const { return lift.x < -kHalf + tol; }
  bool in_open_chart(double tol = kPointTol) const {
    return lift.x > -kHalf + tol && lift.x < kHalf - tol;
  }
};

// Quotient map; domain error when |y| > 1/2 (beyond the band).
BandPoint project(const CoverPoint& p);
BandPoint band_point(double x, double y);

bool same_point(const BandPoint& p, const BandPoint& q, double tol = kPointTol);

// Quotient metric: min over deck shifts n in {-1,0,1}; the window is
// sufficient for canonical lifts (tested against |n| <= 3).
double distance(const BandPoint& p, const BandPoint& q);
double distance_windowed(const BandPoint& p, const BandPoint& q, int window);

enum class LegVariant { Interior, ToBranchPlus, ToBranchMinus };

// A chart geodesic: straight segment between cover points, traversed on [0,1].
struct GeodesicLeg {
  BandPoint start;
  BandPoint end;
  LegVariant variant = LegVariant::Interior;
  CoverPoint cover_a;
  CoverPoint cover_b;

  CoverPoint at(double t) const {
    return {cover_a.x + (cover_b.x - cover_a.x) * t,
            cover_a.y + (cover_b.y - cover_a.y) * t};
  }
  double length() const {
    const double dx = cover_b.x - cover_a.x;
    const double dy = cover_b.y - cover_a.y;
    return std::sqrt(dx * dx + dy * dy);
  }
};

// Chord of the disk M-hat between two chart-interior points.
GeodesicLeg geodesic_interior(const BandPoint& a, const BandPoint& b);

enum class CutSide { Plus, Minus };  // exit edge x = +1/2 vs x = -1/2

// Leg from z to the cut point with right-edge coordinate q_y:
// Plus ends at (+1/2, +q_y), Minus at (-1/2, -q_y); both project to the
// same point of the cut.
GeodesicLeg geodesic_to_branch(const BandPoint& z, double q_y, CutSide side);

// Minimum over t of the simultaneous quotient distance between two legs.
double min_simultaneous_distance(const GeodesicLeg& a, const GeodesicLeg& b);
double min_simultaneous_distance_grid(const GeodesicLeg& a,
                                      const GeodesicLeg& b, int samples);

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(const Vec2& p, double tol = 0.0) const {
    return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol &&
           p.y <= y1 + tol;
  }
};

enum class LeafDirection { Horizontal, Vertical };

// One strip of the frame decomposition: rectangle(s) in the chart foliated by
// parallel geodesic arcs crossing it.  Cut-straddling pieces carry two chart
// rectangles glued along x = +-1/2.
struct StripSpec {
  std::string name;
  std::vector<Rect> pieces;
  LeafDirection leaves = LeafDirection::Vertical;
};

struct JunctionSpec {
  std::string name;
  std::vector<Rect> pieces;
  std::vector<std::string> adjacent_strips;
};

// Conv. of the dividing line: V_1, V_2 and the frame N with 4 junctions and
// 6 strips.
struct RegionDecomposition {
  double a1 = 0, a2 = 0, eps = 0;
  double a1_star = 0, a2_star = 0;
  double dividing_line_x = 0;
  Rect v1, v2;
  std::vector<JunctionSpec> junctions;
  std::vector<StripSpec> strips;

  double area_v1() const { return v1.area(); }
  double area_v2() const { return v2.area(); }
  double area_n() const { return 1.0 - area_v1() - area_v2(); }
};

RegionDecomposition region_decomposition(double a1, double a2, double eps);

std::string describe(const RegionDecomposition& d);  // corner-list text

}  // namespace mobius
