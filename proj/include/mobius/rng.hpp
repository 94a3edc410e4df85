#pragma once

#include <cstdint>

namespace mobius {

// splitmix64; deterministic across platforms, cheap to fork per sample
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

  // independent stream for sample index i under a master seed
  static Rng fork(uint64_t master, uint64_t i) {
    Rng r(master ^ (0x9e3779b97f4a7c15ULL * (i + 0x51ed2701)));
    r.next();
    return r;
  }

 private:
  uint64_t state_;
};

}  // namespace mobius
