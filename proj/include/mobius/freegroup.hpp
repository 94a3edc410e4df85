#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mobius {

// Free group F3 = pi_1(M \ {z1bar, z2bar}, basepoint on the boundary).
// Generators: Gc (loop through the branch cut), G1 and G2 (loops around the
// marked points, dual to the vertical cut arcs K1, K2).

enum class FreeGen : uint8_t { Gc = 0, G1 = 1, G2 = 2 };

struct FreeLetter {
  FreeGen gen;
  int8_t sign;  // +1 or -1

  bool operator==(const FreeLetter& o) const = default;
};

struct FreeWord {
  std::vector<FreeLetter> letters;

  bool operator==(const FreeWord& o) const = default;
  bool empty() const { return letters.empty(); }
  size_t size() const { return letters.size(); }

  void push(FreeGen g, int sign);  // with free reduction at the tail
  FreeWord inverse() const;
  FreeWord operator*(const FreeWord& o) const;

  std::string str() const;  // e.g. "c C 1 2" style tokens
  static FreeWord parse(const std::string& s);
};

FreeWord reduce(const FreeWord& w);

// Endomorphism of F3 given by generator images.
struct FreeEndo {
  std::array<FreeWord, 3> image;  // of Gc, G1, G2

  bool operator==(const FreeEndo& o) const = default;

  FreeWord apply(const FreeWord& w) const;
  static FreeEndo identity();
  bool is_identity() const;
  std::string key() const;  // canonical string for hashing
};

// first then second: (compose(a,b))(w) = b.apply(a.apply(w)) on loops,
// evaluated image-wise so that compose(a,b).apply(w) == b.apply(a.apply(w)).
FreeEndo compose(const FreeEndo& first, const FreeEndo& second);

}  // namespace mobius
