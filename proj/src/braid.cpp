#include "mobius/braid.hpp"

#include <stdexcept>

#include "mobius/geometry.hpp"

namespace mobius {

void BraidWord::push(BraidGen g, int sign) {
  if (!letters.empty() && letters.back().gen == g &&
      letters.back().sign == -sign) {
    letters.pop_back();
    return;
  }
  letters.push_back({g, static_cast<int8_t>(sign)});
}

BraidWord BraidWord::inverse() const {
  BraidWord out;
  out.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    out.letters.push_back({it->gen, static_cast<int8_t>(-it->sign)});
  }
  return out;
}

BraidWord BraidWord::operator*(const BraidWord& o) const {
  BraidWord out = *this;
  for (const auto& l : o.letters) out.push(l.gen, l.sign);
  return out;
}

BraidWord BraidWord::power(int p) const {
  BraidWord out;
  const BraidWord& base = p >= 0 ? *this : this->inverse();
  const int n = p >= 0 ? p : -p;
  for (int i = 0; i < n; ++i) out = out * base;
  return out;
}

int BraidWord::b_count() const {
  int c = 0;
  for (const auto& l : letters) {
    if (l.gen == BraidGen::B) ++c;
  }
  return c;
}

std::string BraidWord::str() const {
  std::string s;
  for (const auto& l : letters) {
    switch (l.gen) {
      case BraidGen::B:
        s += (l.sign > 0 ? "B" : "b");
        break;
      case BraidGen::R2:
        s += (l.sign > 0 ? "R2" : "r2");
        break;
      case BraidGen::R3:
        s += (l.sign > 0 ? "R3" : "r3");
        break;
    }
  }
  return s.empty() ? "e" : s;
}

BraidWord BraidWord::parse(const std::string& s) {
  BraidWord w;
  if (s == "e") return w;
  for (size_t i = 0; i < s.size();) {
    const char c = s[i];
    if (c == ' ') {
      ++i;
      continue;
    }
    if (c == 'B' || c == 'b') {
      w.push(BraidGen::B, c == 'B' ? 1 : -1);
      ++i;
      continue;
    }
    if ((c == 'R' || c == 'r') && i + 1 < s.size()) {
      const char d = s[i + 1];
      if (d == '2') {
        w.push(BraidGen::R2, c == 'R' ? 1 : -1);
      } else if (d == '3') {
        w.push(BraidGen::R3, c == 'R' ? 1 : -1);
      } else {
        throw std::runtime_error("BraidWord::parse: bad generator index");
      }
      i += 2;
      continue;
    }
    throw std::runtime_error("BraidWord::parse: bad letter");
  }
  return w;
}

BraidWord BraidWord::gen(BraidGen g, int sign) {
  BraidWord w;
  w.push(g, sign);
  return w;
}

BraidWord BraidWord::A(int exponent) {
  BraidWord w;
  const int sign = exponent >= 0 ? 1 : -1;
  for (int i = 0; i < 2 * std::abs(exponent); ++i) w.push(BraidGen::B, sign);
  return w;
}

BraidWord multiply(const BraidWord& a, const BraidWord& b) { return a * b; }

BraidWord conjugate(const BraidWord& g, const BraidWord& w) {
  return g * w * g.inverse();
}

namespace {

// Letters act in time order; after an odd number of B letters the slots
// hold swapped strands, so a slot-1 move counts for strand 2.
void h_scan(const BraidWord& w, int& out1, int& out2) {
  int parity = 0;
  out1 = 0;
  out2 = 0;
  for (const auto& l : w.letters) {
    switch (l.gen) {
      case BraidGen::B:
        parity ^= 1;
        break;
      case BraidGen::R2:
        (parity == 0 ? out1 : out2) += l.sign;
        break;
      case BraidGen::R3:
        (parity == 0 ? out2 : out1) += l.sign;
        break;
    }
  }
  if (parity != 0) {
    throw DomainError("h1/h2: word is not pure");
  }
}

}  // namespace

int h1(const BraidWord& w) {
  int a, b;
  h_scan(w, a, b);
  return a;
}

int h2(const BraidWord& w) {
  int a, b;
  h_scan(w, a, b);
  return b;
}

int h_sum(const BraidWord& w) {
  int a, b;
  h_scan(w, a, b);
  return a + b;
}

double h_sum_homogenized(const BraidWord& w) {
  if (w.is_pure()) return static_cast<double>(h_sum(w));
  return 0.5 * h_sum(w * w);
}

}  // namespace mobius
