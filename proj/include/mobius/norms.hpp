#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mobius/braid.hpp"
#include "mobius/gentable.hpp"

namespace mobius {

// Subset of the alphabet as a generating / c-generating set.
struct GenSet {
  bool use_b = true;
  bool use_r2 = true;
  bool use_r3 = true;

  std::vector<std::pair<BraidGen, int>> letters() const;
};

struct LengthResult {
  std::optional<int> value;  // empty: cap exceeded (bounded-unknown)
  int cap = 0;
};

// exact word length by breadth-first search over the endomorphism ball
LengthResult word_length(const GeneratorTable& t, const BraidWord& w,
                         const GenSet& s = {}, int cap = 5);

// conjugation-generated norm: exact small search (products of at most
// max_factors conjugates with conjugator length <= conj_radius)
LengthResult c_norm_exact_small(const GeneratorTable& t, const BraidWord& w,
                                const GenSet& s, int conj_radius,
                                int max_factors);

// upper bound: every letter is a conjugate of a generator
int c_norm_upper(const BraidWord& w);

// ---------------------------------------------------------------------------
// F2 x| Z normal form for pure words: w = kernel(A, rho3) * rho2^k

enum class KernelGen : uint8_t { A = 0, R3 = 1 };

struct KernelLetter {
  KernelGen gen;
  int8_t sign;
  bool operator==(const KernelLetter& o) const = default;
};

struct KernelWord {
  std::vector<KernelLetter> letters;

  void push(KernelGen g, int sign);
  int a_exponent_sum() const;
  BraidWord to_braid() const;
  static KernelWord from_braid(const BraidWord& w);  // expects B-pairs
};

struct NormalForm {
  KernelWord kernel;
  int r2_exponent = 0;
};

NormalForm normal_form(const GeneratorTable& t, const BraidWord& pure_word);

// signed count of target occurrences in the reduced kernel word
int brooks_count(const KernelWord& u, const KernelWord& target);

// ---------------------------------------------------------------------------
// Quasimorphism specifications

enum class HomKind { H1, H2, HSum, PhiA };

struct CountingSpec {
  std::string target = "A";  // kernel word over {A, R3}, e.g. "A R3"
  int p_max = 4;             // homogenization power cap
  int defect_samples = 200;  // pairs sampled for the empirical defect
};

struct QuasimorphismSpec {
  std::variant<HomKind, CountingSpec> kind = HomKind::HSum;

  std::string name() const;
};

class Quasimorphism {
 public:
  Quasimorphism(const GeneratorTable& t, QuasimorphismSpec spec);

  double operator()(const BraidWord& w) const;  // pure words
  double defect() const { return defect_; }
  bool defect_is_empirical() const { return empirical_; }
  // max |phi(s^{+-1})| over the c-generating alphabet, using the
  // homogenized extension on the non-pure letter B
  double generator_bound() const;
  const QuasimorphismSpec& spec() const { return spec_; }

 private:
  const GeneratorTable& table_;
  QuasimorphismSpec spec_;
  double defect_ = 0.0;
  bool empirical_ = false;
};

struct HomogenizeStep {
  int p;
  double value;    // phi(w^p) / p
  double bracket;  // D(phi) / p
};

std::vector<HomogenizeStep> homogenize(const Quasimorphism& phi,
                                       const BraidWord& w, int p_max);

// empirical defect over sampled pairs from the radius ball
double empirical_defect(const GeneratorTable& t,
                        const std::function<double(const BraidWord&)>& phi,
                        int samples, uint64_t seed, int radius = 4);

// random pure word from the radius ball (uniform over a cached enumeration)
BraidWord random_pure_word(const GeneratorTable& t, int radius, uint64_t seed);

}  // namespace mobius
