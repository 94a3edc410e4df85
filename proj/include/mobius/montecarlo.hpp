#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mobius/curves.hpp"
#include "mobius/norms.hpp"
#include "mobius/tracer.hpp"

namespace mobius {

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int n_samples = 0;
  int n_accepted = 0;
  int n_rejected = 0;
  uint64_t seed = 0;
  bool flagged = false;  // rejection rate above 1%

  double integral(double mass = 1.0) const { return mean * mass; }
};

struct McOptions {
  int workers = 1;
  bool keep_samples = false;  // fill per-sample values for CSV export
};

// G^o(phi)(f) by uniform sampling of z over the unit-area chart square,
// rejecting configurations the tracer cannot certify.  Deterministic for a
// fixed seed regardless of the worker count.
McEstimate mc_estimate(const GeneratorTable& table, const Quasimorphism& phi,
                       const Isotopy& f, int n, uint64_t seed,
                       const McOptions& opt = {},
                       std::vector<double>* samples_out = nullptr);

// sampling restricted to z in U x U for a union of rectangles
McEstimate mc_estimate_restricted(const GeneratorTable& table,
                                  const Quasimorphism& phi, const Isotopy& f,
                                  const std::vector<Rect>& region, int n,
                                  uint64_t seed, const McOptions& opt = {});

struct HomogenizedStepEstimate {
  int p;
  McEstimate raw;      // G^o(phi)(f^p)
  double value;        // raw.mean / p
  double stderr_;      // raw.stderr / p
};

struct HomogenizedEstimate {
  std::vector<HomogenizedStepEstimate> steps;
  double extrapolated = 0.0;   // last value
  double max_slope_dev = 0.0;  // max |value_p - value_1|
};

HomogenizedEstimate homogenized_estimate(const GeneratorTable& table,
                                         const Quasimorphism& phi,
                                         const Isotopy& f, int p_max, int n,
                                         uint64_t seed,
                                         const McOptions& opt = {});

// closed-form flux oracle: 2 * integral of the (a/2, d)-bump profile
double band_flux_oracle(double a, double d);

struct InjectivityConfig {
  double a1 = 0.5, a2 = 0.5, eps = 1.0 / 16.0;
  double b1 = 0.3, b2 = 0.3;
  CurveId curve = CurveId::Boundary;
  int twist_exponent = 1;
  QuasimorphismSpec phi = {};  // defaults to h-sum
  int level = 1;               // contraction level of the frame
  int n = 10000;
  int k_samples = 200;  // traces used for the factorization bound K
  uint64_t seed = 1;
  int workers = 1;
};

struct InjectivityReport {
  bool valid = false;
  std::string notes;
  double a1, a2, eps, b1, b2;
  std::string phi_name;
  double phi_ij[2][2] = {{0, 0}, {0, 0}};
  double core_f = 0.0;          // Eq. core
  double k_bound = 0.0;         // factorization bound on q_R
  double m_bound = 0.0;         // max |phi(s^{+-1})|
  double defect = 0.0;
  double remainder_bound = 0.0;  // Eq. remainder
  McEstimate restricted;         // integral over X_2(U)
  double restricted_integral = 0.0;
  double restricted_stderr = 0.0;
  McEstimate full;
  bool verdict_nonzero = false;   // measured: |full| > 3 stderr
  bool paper_criterion = false;   // |F| > remainder + 3 stderr
  std::string serialize() const;  // JSON
};

InjectivityReport injectivity_experiment(const GeneratorTable& table,
                                         const InjectivityConfig& cfg);

struct NormSurveyLevel {
  int level = 0;
  double eps = 0.0;
  int branch_max = 0;      // n(k_i)
  int cut_crossings = 0;   // N_i
  int base_word_cost = 0;  // C: max factorization cost of the four base words
  int max_q_upper = 0;     // over sampled traces
  double formula_bound = 0.0;
  int failures = 0;
  bool contraction_consistent = false;  // L(k_{i-1}) matches level-i curve
};

std::vector<NormSurveyLevel> norm_survey(const GeneratorTable& table,
                                         CurveId id, int n_levels, int samples,
                                         uint64_t seed, double a1 = 0.5,
                                         double a2 = 0.5,
                                         double eps = 1.0 / 16.0,
                                         int workers = 1);

}  // namespace mobius
