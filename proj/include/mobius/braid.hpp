#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mobius {

// Words of B2(M) over the alphabet {B, rho2, rho3}.  Serialized over
// {B, b, R2, r2, R3, r3} with upper case for positive letters.

enum class BraidGen : uint8_t { B = 0, R2 = 1, R3 = 2 };

struct BraidLetter {
  BraidGen gen;
  int8_t sign;

  bool operator==(const BraidLetter& o) const = default;
};

struct BraidWord {
  std::vector<BraidLetter> letters;

  bool operator==(const BraidWord& o) const = default;
  bool empty() const { return letters.empty(); }
  size_t size() const { return letters.size(); }

  void push(BraidGen g, int sign);  // free reduction at the tail
  BraidWord inverse() const;
  BraidWord operator*(const BraidWord& o) const;  // left factor first in time
  BraidWord power(int p) const;

  int b_count() const;          // number of B letters (any sign)
  bool is_pure() const { return b_count() % 2 == 0; }

  std::string str() const;
  static BraidWord parse(const std::string& s);

  static BraidWord gen(BraidGen g, int sign = 1);
  static BraidWord A(int exponent = 1);  // derived letter A = B^2
};

BraidWord multiply(const BraidWord& a, const BraidWord& b);
BraidWord conjugate(const BraidWord& g, const BraidWord& w);  // g w g^-1

// Fadell-Neuwirth strand-forgetting homomorphisms on P2(M), computed by a
// letter scan that tracks which strand currently occupies each slot.
// Non-pure input is a domain error; use h_sum_homogenized on B2(M).
int h1(const BraidWord& w);
int h2(const BraidWord& w);
int h_sum(const BraidWord& w);            // h1 + h2, pure words
double h_sum_homogenized(const BraidWord& w);  // H(w^2)/2, any word

}  // namespace mobius
