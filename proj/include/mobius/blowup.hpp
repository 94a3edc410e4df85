#pragma once

#include <optional>

#include "mobius/geometry.hpp"
#include "mobius/isotopy.hpp"

namespace mobius {

// Compactification machinery for X_2(M): injectivity radius, exponential
// maps with defining half-planes, the blow-up embedding into TM, and the
// extension of C^1 maps to the blown-up diagonal.

double injectivity_radius();  // 1/2 for the flat band

// true when B_r(x) meets tau^n(B_r(x)) for some lift x of p and n != 0
bool deck_ball_overlap(const BandPoint& p, double r);

// H_p = {v : v . normal <= offset}; absent when p is at least 1/2 from
// the boundary
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;

  bool contains(const Vec2& v, double tol = 1e-12) const {
    return v.dot(normal) <= offset + tol;
  }
};

std::optional<HalfPlane> defining_half_plane(const BandPoint& p);

// straight-line exponential; domain error when |v| >= 1/2 or v leaves the
// defining half-plane
BandPoint exp_map(const BandPoint& p, const Vec2& v);

struct BlowupPoint {
  BandPoint p;
  BandPoint q;
  Vec2 ray;  // unit direction in T_p M; free data when p == q

  static BlowupPoint off_diagonal(const BandPoint& p, const BandPoint& q);
  static BlowupPoint diagonal(const BandPoint& p, const Vec2& direction);
};

// Bl_eps(p,q,R) = e^{d(p,q)} v_R; domain error when d(p,q) > eps
Vec2 blowup_embed(const BlowupPoint& pt, double eps = 0.25);

// action of a C^1 time-1 map on the blow-up: pairs map as pairs, diagonal
// rays push forward by the differential
BlowupPoint extend_action(const Isotopy& f, const BlowupPoint& pt);

// differential of the time-1 map in canonical chart frames (deck flip folded
// in when the image reprojects across the cut)
Mat2 chart_differential(const Isotopy& f, const BandPoint& p);

}  // namespace mobius
