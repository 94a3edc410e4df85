#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobius/geometry.hpp"
#include "mobius/isotopy.hpp"
#include "mobius/polyline.hpp"

namespace mobius {

enum class CurveId { Boundary, CoreNbhd, TwoPunctures };

CurveId curve_id_from_string(const std::string& s);
std::string to_string(CurveId id);

enum class SideKind { MobiusBand, Disk };

// Catalog entry for a two-sided simple closed curve, with the data the twist
// constructions and winding bounds consume.  Stored invariants are re-derived
// from the polyline at load.
struct CurveSpec {
  CurveId id;
  CoverPolyline polyline;

  SideKind inner_kind;
  double inner_area = 0.0;
  // Mobius side: |y| <= level; disk side: |p - center| <= radius
  double level = 0.0;
  BandPoint center;
  double radius = 0.0;

  int cut_crossings = 0;                    // |c ^ ell|
  std::map<std::string, int> branch_count;  // per junction/strip of the frame
  int max_branch = 0;                       // n(c)
  bool minimal_position = false;            // certificate for frame curves

  double tubular_reach = 0.0;
};

// Catalog curves with respect to the given frame decomposition:
//  - Boundary: boundary-parallel circle at height 1/2 - eps/2 (inner side
//    is the wide sub-band);
//  - CoreNbhd: boundary of the width-1/2 sub-band;
//  - TwoPunctures: round circle about pi(0,0) enclosing both marked points.
CurveSpec catalog_curve(CurveId id, const RegionDecomposition& frame);

int count_cut_crossings(const CoverPolyline& line);
std::map<std::string, int> count_branches(const CoverPolyline& line,
                                          const RegionDecomposition& frame);
// half the minimum distance between non-adjacent samples (and the boundary)
double tubular_reach_estimate(const CoverPolyline& line);

struct TwistOptions {
  std::optional<double> xi;  // default: reach / 2
  std::optional<double> d;   // default: min(a/8, xi/2)
};

// xi-supported Dehn twist along a catalog curve: the sliding isotopy of the
// inner side transported by the (closed-form) density-preserving embedding,
// extended by the identity.
Isotopy supported_twist(const CurveSpec& curve, const TwistOptions& opt = {});

// The contraction L: interval maps (phi_x, phi_y) with linear zones around
// the attracting fixed points, halving the frame width per application.
class ContractionMap {
 public:
  ContractionMap(double a1, double a2, double eps);

  double phi_x(double s) const;
  double phi_y(double t) const;
  CoverPoint apply_cover(const CoverPoint& p) const;
  BandPoint apply(const BandPoint& p) const;
  CoverPolyline apply(const CoverPolyline& line) const;

  double eps0() const { return eps0_; }

 private:
  struct Piece {  // cubic Hermite on [x0, x1] -> [y0, y1], slopes m0, m1
    double x0, x1, y0, y1, m0, m1;
    double eval(double x) const;
  };
  struct IntervalMap {
    std::vector<Piece> pieces;  // ordered; linear pieces have m0 == m1
    double eval(double x) const;
  };
  static IntervalMap build_phi_x(double px, double e0, double e1);
  static IntervalMap build_phi_y(double e0, double e1);

  double eps0_, px_;
  IntervalMap fx_, fy_;
};

}  // namespace mobius
