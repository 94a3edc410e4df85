#include "mobius/norms.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "mobius/rng.hpp"

namespace mobius {

std::vector<std::pair<BraidGen, int>> GenSet::letters() const {
  std::vector<std::pair<BraidGen, int>> out;
  if (use_b) {
    out.emplace_back(BraidGen::B, 1);
    out.emplace_back(BraidGen::B, -1);
  }
  if (use_r2) {
    out.emplace_back(BraidGen::R2, 1);
    out.emplace_back(BraidGen::R2, -1);
  }
  if (use_r3) {
    out.emplace_back(BraidGen::R3, 1);
    out.emplace_back(BraidGen::R3, -1);
  }
  return out;
}

LengthResult word_length(const GeneratorTable& t, const BraidWord& w,
                         const GenSet& s, int cap) {
  const FreeEndo target = t.act(w);
  LengthResult res;
  res.cap = cap;
  if (target.is_identity()) {
    res.value = 0;
    return res;
  }
  const auto letters = s.letters();
  std::unordered_set<std::string> seen;
  std::deque<FreeEndo> frontier;
  frontier.push_back(FreeEndo::identity());
  seen.insert(FreeEndo::identity().key());
  for (int depth = 1; depth <= cap; ++depth) {
    std::deque<FreeEndo> next;
    for (const auto& node : frontier) {
      for (const auto& [g, sign] : letters) {
        FreeEndo child = compose(node, t.act_letter(g, sign));
        if (child == target) {
          res.value = depth;
          return res;
        }
        if (seen.insert(child.key()).second) next.push_back(std::move(child));
      }
    }
    frontier.swap(next);
  }
  return res;
}

LengthResult c_norm_exact_small(const GeneratorTable& t, const BraidWord& w,
                                const GenSet& s, int conj_radius,
                                int max_factors) {
  const FreeEndo target = t.act(w);
  LengthResult res;
  res.cap = max_factors;
  if (target.is_identity()) {
    res.value = 0;
    return res;
  }
  // distinct conjugated-letter endomorphisms g s g^-1, |g| <= conj_radius
  std::vector<FreeEndo> conj_letters;
  {
    std::unordered_set<std::string> seen;
    std::deque<std::pair<FreeEndo, FreeEndo>> conjs;  // (E_g, E_{g^-1})
    conjs.emplace_back(FreeEndo::identity(), FreeEndo::identity());
    std::unordered_set<std::string> conj_seen{FreeEndo::identity().key()};
    const auto all_letters = GenSet{}.letters();
    std::deque<std::pair<FreeEndo, FreeEndo>> frontier = conjs;
    for (int depth = 0; depth < conj_radius; ++depth) {
      std::deque<std::pair<FreeEndo, FreeEndo>> next;
      for (const auto& [eg, eginv] : frontier) {
        for (const auto& [g, sign] : all_letters) {
          FreeEndo child = compose(eg, t.act_letter(g, sign));
          if (!conj_seen.insert(child.key()).second) continue;
          FreeEndo child_inv = compose(t.act_letter(g, -sign), eginv);
          next.emplace_back(child, child_inv);
          conjs.emplace_back(child, child_inv);
        }
      }
      frontier.swap(next);
    }
    for (const auto& [eg, eginv] : conjs) {
      for (const auto& [g, sign] : s.letters()) {
        FreeEndo conj = compose(compose(eg, t.act_letter(g, sign)), eginv);
        if (seen.insert(conj.key()).second) conj_letters.push_back(conj);
      }
    }
  }
  std::unordered_set<std::string> seen{FreeEndo::identity().key()};
  std::deque<FreeEndo> frontier{FreeEndo::identity()};
  for (int depth = 1; depth <= max_factors; ++depth) {
    std::deque<FreeEndo> next;
    for (const auto& node : frontier) {
      for (const auto& cl : conj_letters) {
        FreeEndo child = compose(node, cl);
        if (child == target) {
          res.value = depth;
          return res;
        }
        if (seen.insert(child.key()).second) next.push_back(std::move(child));
      }
    }
    frontier.swap(next);
  }
  return res;
}

int c_norm_upper(const BraidWord& w) { return static_cast<int>(w.size()); }

// ---------------------------------------------------------------------------

void KernelWord::push(KernelGen g, int sign) {
  if (!letters.empty() && letters.back().gen == g &&
      letters.back().sign == -sign) {
    letters.pop_back();
    return;
  }
  letters.push_back({g, static_cast<int8_t>(sign)});
}

int KernelWord::a_exponent_sum() const {
  int s = 0;
  for (const auto& l : letters) {
    if (l.gen == KernelGen::A) s += l.sign;
  }
  return s;
}

BraidWord KernelWord::to_braid() const {
  BraidWord out;
  for (const auto& l : letters) {
    if (l.gen == KernelGen::A) {
      out.push(BraidGen::B, l.sign);
      out.push(BraidGen::B, l.sign);
    } else {
      out.push(BraidGen::R3, l.sign);
    }
  }
  return out;
}

KernelWord KernelWord::from_braid(const BraidWord& w) {
  KernelWord out;
  int pending = 0;  // one unpaired B of this sign
  for (const auto& l : w.letters) {
    if (l.gen == BraidGen::R3) {
      if (pending != 0) throw DomainError("from_braid: unpaired B letter");
      out.push(KernelGen::R3, l.sign);
    } else if (l.gen == BraidGen::B) {
      if (pending == 0) {
        pending = l.sign;
      } else if (pending == l.sign) {
        out.push(KernelGen::A, l.sign);
        pending = 0;
      } else {
        throw DomainError("from_braid: cancelling B pair");
      }
    } else {
      throw DomainError("from_braid: rho2 letter in kernel word");
    }
  }
  if (pending != 0) throw DomainError("from_braid: odd B count");
  return out;
}

namespace {

KernelWord substitute(const KernelWord& w, const KernelWord& image_a,
                      const KernelWord& image_r3) {
  KernelWord out;
  for (const auto& l : w.letters) {
    const KernelWord& im = l.gen == KernelGen::A ? image_a : image_r3;
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

// rho2^k x rho2^{-k} on kernel words
KernelWord conj_power(const GeneratorTable& t, const KernelWord& w, int k) {
  if (k == 0) return w;
  // +1 push uses rho2 x rho2^-1 (accessor dir = -1)
  const int dir = k > 0 ? -1 : 1;
  const KernelWord ia = KernelWord::from_braid(t.conj_by_r2(BraidGen::B, dir));
  const KernelWord ir3 =
      KernelWord::from_braid(t.conj_by_r2(BraidGen::R3, dir));
  KernelWord out = w;
  for (int i = 0; i < std::abs(k); ++i) {
    out = substitute(out, ia, ir3);
    if (out.letters.size() > 2'000'000) {
      throw DomainError("normal_form: kernel word growth cap exceeded");
    }
  }
  return out;
}

}  // namespace

NormalForm normal_form(const GeneratorTable& t, const BraidWord& pure_word) {
  if (!pure_word.is_pure()) throw DomainError("normal_form: word not pure");
  // Schreier rewriting over the index-two subgroup with coset reps {e, B}
  std::vector<std::pair<int, int>> pure_letters;  // (0=A,1=rho2,2=rho3, sign)
  int coset = 0;
  auto emit_braid = [&](const BraidWord& w, int sign) {
    const BraidWord use = sign > 0 ? w : w.inverse();
    // words over {A, rho2, rho3}: B letters appear in same-sign pairs
    int pending = 0;
    for (const auto& l : use.letters) {
      if (l.gen == BraidGen::B) {
        if (pending == 0) {
          pending = l.sign;
        } else {
          pure_letters.emplace_back(0, l.sign);
          pending = 0;
        }
      } else {
        pure_letters.emplace_back(l.gen == BraidGen::R2 ? 1 : 2, l.sign);
      }
    }
  };
  for (const auto& l : pure_word.letters) {
    if (l.gen == BraidGen::B) {
      if (l.sign > 0) {
        if (coset == 0) {
          coset = 1;
        } else {
          pure_letters.emplace_back(0, 1);
          coset = 0;
        }
      } else {
        if (coset == 0) {
          pure_letters.emplace_back(0, -1);
          coset = 1;
        } else {
          coset = 0;
        }
      }
    } else {
      const int gi = l.gen == BraidGen::R2 ? 0 : 1;
      if (coset == 0) {
        pure_letters.emplace_back(l.gen == BraidGen::R2 ? 1 : 2, l.sign);
      } else {
        emit_braid(t.conj_by_b(l.gen, 1), l.sign);
      }
      (void)gi;
    }
  }
  if (coset != 0) throw DomainError("normal_form: coset scan ended off-base");

  NormalForm nf;
  int k = 0;
  for (const auto& [gi, sign] : pure_letters) {
    if (gi == 1) {
      k += sign;
      continue;
    }
    KernelWord x;
    x.push(gi == 0 ? KernelGen::A : KernelGen::R3, sign);
    const KernelWord moved = conj_power(t, x, k);
    for (const auto& m : moved.letters) nf.kernel.push(m.gen, m.sign);
  }
  nf.r2_exponent = k;
  return nf;
}

int brooks_count(const KernelWord& u, const KernelWord& target) {
  if (target.letters.empty()) return 0;
  const KernelWord inv = [&] {
    KernelWord w;
    for (auto it = target.letters.rbegin(); it != target.letters.rend(); ++it) {
      w.letters.push_back({it->gen, static_cast<int8_t>(-it->sign)});
    }
    return w;
  }();
  auto count = [&](const KernelWord& pat) {
    if (u.letters.size() < pat.letters.size()) return 0;
    int c = 0;
    for (size_t i = 0; i + pat.letters.size() <= u.letters.size(); ++i) {
      bool ok = true;
      for (size_t j = 0; j < pat.letters.size(); ++j) {
        if (!(u.letters[i + j] == pat.letters[j])) {
          ok = false;
          break;
        }
      }
      if (ok) ++c;
    }
    return c;
  };
  return count(target) - count(inv);
}

// ---------------------------------------------------------------------------

namespace {

KernelWord parse_kernel(const std::string& s) {
  KernelWord w;
  int sign = 1;
  for (size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == ' ') continue;
    if (c == '-') {
      sign = -1;
      continue;
    }
    if (c == 'A' || c == 'a') {
      w.push(KernelGen::A, c == 'A' ? sign : -sign);
    } else if (c == 'R' && i + 1 < s.size() && s[i + 1] == '3') {
      w.push(KernelGen::R3, sign);
      ++i;
    } else if (c == 'r' && i + 1 < s.size() && s[i + 1] == '3') {
      w.push(KernelGen::R3, -sign);
      ++i;
    } else {
      throw DomainError("counting target: bad kernel letter");
    }
    sign = 1;
  }
  return w;
}

}  // namespace

std::string QuasimorphismSpec::name() const {
  if (const auto* h = std::get_if<HomKind>(&kind)) {
    switch (*h) {
      case HomKind::H1:
        return "h1";
      case HomKind::H2:
        return "h2";
      case HomKind::HSum:
        return "h-sum";
      case HomKind::PhiA:
        return "phi-A";
    }
  }
  return "count(" + std::get<CountingSpec>(kind).target + ")";
}

Quasimorphism::Quasimorphism(const GeneratorTable& t, QuasimorphismSpec spec)
    : table_(t), spec_(std::move(spec)) {
  if (const auto* c = std::get_if<CountingSpec>(&spec_.kind)) {
    empirical_ = true;
    const KernelWord target = parse_kernel(c->target);
    auto phi = [&](const BraidWord& w) {
      return static_cast<double>(
          brooks_count(normal_form(table_, w).kernel, target));
    };
    defect_ = empirical_defect(table_, phi, c->defect_samples, 0x5eedULL);
  } else if (std::get<HomKind>(spec_.kind) == HomKind::PhiA &&
             !t.a_exponent_preserved()) {
    // exposed as a counting quasimorphism when the A-exponent is not a
    // class function of the splitting
    empirical_ = true;
    auto phi = [&](const BraidWord& w) {
      return static_cast<double>(
          normal_form(table_, w).kernel.a_exponent_sum());
    };
    defect_ = empirical_defect(table_, phi, 200, 0x5eedULL);
  }
}

double Quasimorphism::operator()(const BraidWord& w) const {
  if (const auto* h = std::get_if<HomKind>(&spec_.kind)) {
    switch (*h) {
      case HomKind::H1:
        return h1(w);
      case HomKind::H2:
        return h2(w);
      case HomKind::HSum:
        return h_sum(w);
      case HomKind::PhiA:
        return normal_form(table_, w).kernel.a_exponent_sum();
    }
  }
  const auto& c = std::get<CountingSpec>(spec_.kind);
  return brooks_count(normal_form(table_, w).kernel, parse_kernel(c.target));
}

double Quasimorphism::generator_bound() const {
  double m = 0.0;
  for (const auto& g : {BraidGen::B, BraidGen::R2, BraidGen::R3}) {
    for (int sign : {1, -1}) {
      const BraidWord w = BraidWord::gen(g, sign);
      double v;
      if (w.is_pure()) {
        v = (*this)(w);
      } else {
        v = 0.5 * (*this)(w * w);  // homogenized extension on B
      }
      m = std::max(m, std::abs(v));
    }
  }
  return m;
}

std::vector<HomogenizeStep> homogenize(const Quasimorphism& phi,
                                       const BraidWord& w, int p_max) {
  std::vector<HomogenizeStep> steps;
  for (int p = 1; p <= p_max; ++p) {
    const double v = phi(w.power(p)) / p;
    steps.push_back({p, v, phi.defect() / p});
  }
  return steps;
}

BraidWord random_pure_word(const GeneratorTable& t, int radius, uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    BraidWord w;
    const int len = 1 + rng.uniform_int(radius);
    for (int i = 0; i < len; ++i) {
      const int g = rng.uniform_int(3);
      w.push(static_cast<BraidGen>(g), rng.uniform_int(2) ? 1 : -1);
    }
    if (w.is_pure()) return w;
    w.push(BraidGen::B, rng.uniform_int(2) ? 1 : -1);
    if (w.is_pure()) return w;
  }
  return BraidWord::A(1);
}

double empirical_defect(const GeneratorTable& t,
                        const std::function<double(const BraidWord&)>& phi,
                        int samples, uint64_t seed, int radius) {
  double d = 0.0;
  for (int i = 0; i < samples; ++i) {
    const BraidWord g = random_pure_word(t, radius, seed ^ (2 * i + 1));
    const BraidWord h = random_pure_word(t, radius, seed ^ (2 * i + 2));
    d = std::max(d, std::abs(phi(g * h) - phi(g) - phi(h)));
  }
  return d;
}

}  // namespace mobius
