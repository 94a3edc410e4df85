#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mobius/freegroup.hpp"
#include "mobius/geometry.hpp"

namespace mobius {

// Polyline in the covering strip.  A closed curve on the band ends at
// tau^closure_power of its start.
struct CoverPolyline {
  std::vector<CoverPoint> pts;
  int closure_power = 0;

  double length() const;
};

CoverPolyline resample(const CoverPolyline& line, double max_step);

using PointMap = std::function<CoverPoint(const CoverPoint&)>;  // tau-equivariant

// local feature scale at an image point; the refinement keeps image gaps
// below a fraction of it (used to resolve hair-thin features near the
// marked points)
using ClearanceFn = std::function<double(const BandPoint&)>;

// Maps vertices and subdivides source segments until consecutive image
// points are closer than max_gap (in the quotient) and than a fraction of
// the local clearance, down to the floor.
CoverPolyline apply_map_adaptive(const PointMap& map, const CoverPolyline& line,
                                 double max_gap, int max_depth = 40,
                                 const ClearanceFn& clearance = nullptr,
                                 double gap_floor = 2e-5);

// Cut system for pi_1(M \ {z1bar, z2bar}, b), b = pi(0, -1/2):
//   Gc dual to the branch cut, G1/G2 dual to the vertical arcs
//   K_i from z_i bar straight up to the boundary.
struct CutSystem {
  double k1_x = -0.25;
  double k2_x = 0.25;
  double margin = 1e-7;  // crossing clearance demanded near arc endpoints
};

// Crossing word of a closed loop (based near b, transverse to the cuts).
// Throws DomainError when a crossing is too close to an arc endpoint to
// classify.
FreeWord loop_word(const CoverPolyline& loop, const CutSystem& cuts = {});

// Proper intersection of open segments (a0,a1) x (b0,b1); returns the
// parameter pair (s toward a1, t toward b1).
std::optional<std::pair<double, double>> segment_intersection(
    const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

}  // namespace mobius
