#include "mobius/freegroup.hpp"

#include <sstream>
#include <stdexcept>

namespace mobius {

void FreeWord::push(FreeGen g, int sign) {
  if (!letters.empty() && letters.back().gen == g &&
      letters.back().sign == -sign) {
    letters.pop_back();
    return;
  }
  letters.push_back({g, static_cast<int8_t>(sign)});
}

FreeWord reduce(const FreeWord& w) {
  FreeWord out;
  out.letters.reserve(w.letters.size());
  for (const auto& l : w.letters) out.push(l.gen, l.sign);
  return out;
}

FreeWord FreeWord::inverse() const {
  FreeWord out;
  out.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    out.letters.push_back({it->gen, static_cast<int8_t>(-it->sign)});
  }
  return out;
}

FreeWord FreeWord::operator*(const FreeWord& o) const {
  FreeWord out = *this;
  for (const auto& l : o.letters) out.push(l.gen, l.sign);
  return out;
}

namespace {
constexpr char kChar[3] = {'c', '1', '2'};
}

std::string FreeWord::str() const {
  std::string s;
  s.reserve(letters.size() * 2);
  for (const auto& l : letters) {
    char c = kChar[static_cast<int>(l.gen)];
    if (l.sign > 0) {
      s.push_back(c);
    } else {
      s.push_back('-');
      s.push_back(c);
    }
  }
  return s;
}

FreeWord FreeWord::parse(const std::string& s) {
  FreeWord w;
  int sign = 1;
  for (char c : s) {
    if (c == ' ') continue;
    if (c == '-') {
      sign = -1;
      continue;
    }
    FreeGen g;
    switch (c) {
      case 'c':
        g = FreeGen::Gc;
        break;
      case '1':
        g = FreeGen::G1;
        break;
      case '2':
        g = FreeGen::G2;
        break;
      default:
        throw std::runtime_error("FreeWord::parse: bad letter");
    }
    w.push(g, sign);
    sign = 1;
  }
  return w;
}

FreeWord FreeEndo::apply(const FreeWord& w) const {
  FreeWord out;
  for (const auto& l : w.letters) {
    const FreeWord& im = image[static_cast<int>(l.gen)];
    if (l.sign > 0) {
      for (const auto& m : im.letters) out.push(m.gen, m.sign);
    } else {
      for (auto it = im.letters.rbegin(); it != im.letters.rend(); ++it) {
        out.push(it->gen, -it->sign);
      }
    }
  }
  return out;
}

FreeEndo FreeEndo::identity() {
  FreeEndo e;
  for (int i = 0; i < 3; ++i) {
    e.image[i].letters = {{static_cast<FreeGen>(i), 1}};
  }
  return e;
}

bool FreeEndo::is_identity() const { return *this == identity(); }

std::string FreeEndo::key() const {
  return image[0].str() + "|" + image[1].str() + "|" + image[2].str();
}

FreeEndo compose(const FreeEndo& first, const FreeEndo& second) {
  FreeEndo out;
  for (int i = 0; i < 3; ++i) out.image[i] = second.apply(first.image[i]);
  return out;
}

}  // namespace mobius
