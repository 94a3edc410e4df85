#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mobius/braid.hpp"
#include "mobius/freegroup.hpp"
#include "mobius/geometry.hpp"

namespace mobius {

struct DerivationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Marked points; defaults z1bar = pi(-1/4, 0), z2bar = pi(1/4, 0).
struct MarkedPoints {
  BandPoint z1 = band_point(-0.25, 0.0);
  BandPoint z2 = band_point(0.25, 0.0);
};

// Crossing-letter classes at the branch cut: keyed by the strand, the sign
// of the right-edge coordinate r_q of the crossing point, and whether the
// parked strand's closing segment interleaves the outgoing / returning legs
// of the crossing journey (the "lasso" reading of the four-braid
// classification; distinct keys may share a value).
struct EtaKey {
  int strand;  // 1 or 2
  bool r_positive;
  bool lasso_out;
  bool lasso_in;
};

struct LassoFlags {
  bool out = false;
  bool in = false;
};

// timing-interleaved intersections between the excursion to v and the two
// geodesic legs of an eta journey exiting at right-edge height r_q
LassoFlags eta_lasso_flags(int strand, double r_q, const Vec2& v_chart,
                           const MarkedPoints& marked = {});

// Faithful action of B2(M) on F3 = pi_1(M \ {z1bar, z2bar}) plus the derived
// crossing-letter table and splitting data.  Immutable after derivation.
class GeneratorTable {
 public:
  FreeEndo act_letter(BraidGen g, int sign) const;
  FreeEndo act(const BraidWord& w) const;
  bool equal(const BraidWord& a, const BraidWord& b) const;
  bool is_trivial(const BraidWord& w) const { return act(w).is_identity(); }

  const FreeWord& boundary_word() const { return delta_; }
  const BraidWord& eta_word(const EtaKey& k) const;
  const MarkedPoints& marked() const { return marked_; }

  // shortlex representative by BFS over the endomorphism ball, if within
  // radius; used by derivation and the norm utilities
  std::optional<BraidWord> find_word(const FreeEndo& e, int radius) const;

  // conjugation data for the F2 x| Z splitting: images of A and rho3 under
  // conjugation by rho2^{+-1}, as words over {A, rho3}
  const BraidWord& conj_by_r2(BraidGen g, int dir) const;  // dir = +1 or -1
  // pure words for B rho_i B^{-1} and B^{-1} rho_i B
  const BraidWord& conj_by_b(BraidGen g, int dir) const;

  // exponent-sum action of rho2-conjugation on ab(F2) = Z^2 (A, rho3 basis)
  std::array<std::array<int, 2>, 2> splitting_matrix() const;
  bool a_exponent_preserved() const;

  const std::vector<std::string>& derivation_log() const { return log_; }

  std::string serialize() const;                  // structured text (JSON)
  static GeneratorTable deserialize(const std::string& text);

  void validate() const;  // relation oracles; throws DerivationError

  friend GeneratorTable derive_generator_table();

 private:
  MarkedPoints marked_;
  std::array<FreeEndo, 3> gen_endo_;      // B, R2, R3
  std::array<FreeEndo, 3> gen_endo_inv_;  // traced inverses
  FreeWord delta_;
  // eta[strand-1][r_positive][lasso_out][lasso_in]; uncovered classes empty
  BraidWord eta_[2][2][2][2];
  bool eta_covered_[2][2][2][2] = {};
  BraidWord conj_r2_[2][2];  // [A or rho3][dir>0]
  BraidWord conj_b_[2][2];   // [rho2 or rho3][dir>0]
  std::vector<std::string> log_;

  mutable std::unordered_map<std::string, BraidWord> ball_;
  mutable int ball_radius_ = 0;
  void ensure_ball(int radius) const;
};

// Runs the geometric tracing of the generator isotopies on the pi_1 basis
// loops, resolves the sign conventions against the stated relations, and
// derives the crossing-letter table.  Throws DerivationError naming the
// failing relation otherwise.
GeneratorTable derive_generator_table();

// process-wide cached table (derivation is deterministic)
const GeneratorTable& shared_table();

}  // namespace mobius
