#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobius/braid.hpp"
#include "mobius/curves.hpp"
#include "mobius/gentable.hpp"
#include "mobius/isotopy.hpp"
#include "mobius/polyline.hpp"

namespace mobius {

using Config = std::pair<BandPoint, BandPoint>;

struct TraceOptions {
  double collision_tol = 1e-6;
  double winding_tol = 1e-3 * M_PI;  // integrality tolerance for Delta theta
  double perturb_magnitude = 1e-7;
  int max_perturb_attempts = 8;
  double max_step = 0.02;  // spatial refinement bound on strand samples
  uint64_t seed = 0;
};

struct CrossingEvent {
  int strand = 0;  // 1 or 2
  double time = 0;
  double r_q = 0;  // right-edge coordinate of the crossing point of ell
  int side = 0;    // +1: lift exits through x = +1/2; -1: through x = -1/2
  bool lasso_out = false;  // parked strand's closing interleaves the exit leg
  bool lasso_in = false;   // ... interleaves the return leg
  double y_at_crossing = 0;  // chart y at the exit
};

struct Omega4Result {
  bool ok = false;
  double certificate = 0.0;  // min simultaneous distance of the closure legs
};

// z lies in Omega^4: both points off the cut and the simultaneous geodesic
// legs from the base configuration stay collision-free.
Omega4Result check_omega4(const Config& z, const MarkedPoints& marked = {},
                          double tol = 1e-6);

struct ExtractionReport {
  bool ok = false;
  std::string failure;
  BraidWord word;
  std::vector<CrossingEvent> events;
  std::vector<int> segment_twists;  // A-exponent per inter-event segment
  double omega4_in = 0.0;           // certificates for both closure pairs
  double omega4_out = 0.0;
  double max_winding_residual = 0.0;
  int perturbations = 0;
  int samples = 0;   // refined common-grid size
  int q_upper = 0;   // factorization-length bound on the c-generated norm
  std::array<int, 2> signed_crossings{0, 0};

  std::string serialize() const;  // structured record for golden tests
};

// Gambaudo-Ghys cocycle braid gamma(f; z) compiled from the isotopy
// trajectories by branch-cut event splitting and relative winding counts.
ExtractionReport trace(const Isotopy& f, const Config& z,
                       const GeneratorTable& table,
                       const TraceOptions& opt = {});

// Relative winding of two chart paths closed by base geodesic legs, in
// half-turns (B exponent); exchanged endpoints close to the swapped base.
struct SegmentBraidResult {
  bool ok = false;
  std::string failure;
  int half_turns = 0;
  double residual = 0.0;
};
SegmentBraidResult segment_braid(
    const std::function<CoverPoint(double)>& path1,
    const std::function<CoverPoint(double)>& path2,
    const MarkedPoints& marked = {});

// beta_m(gamma, u): strand m travels the closed-up regular curve, the other
// strand makes a geodesic excursion to u and back.
ExtractionReport beta_braid(const CoverPolyline& path, const BandPoint& u,
                            int strand, const GeneratorTable& table,
                            const TraceOptions& opt = {});

// bounded conjugacy search; empty optional = bounded-unknown
std::optional<bool> conjugate_in_p2(const GeneratorTable& t,
                                    const BraidWord& w1, const BraidWord& w2,
                                    int radius, bool pure_only = true);

// CSV rows (t, strand, x, y) of the trajectory under f
std::string trajectory_csv(const Isotopy& f, const Config& z, int samples);

}  // namespace mobius
