#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "mobius/gentable.hpp"
#include "mobius/isotopy.hpp"
#include "mobius/polyline.hpp"

namespace mobius {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Ambient realization of strand motions: compositions of small closed-form
// moves x -> x + beta(|x - c|/R) * delta, each a diffeomorphism of M.

double bump(double u) {
  if (u >= 1.0) return 0.0;
  if (u <= 0.0) return 1.0;
  const double s = u * u * u * (u * (u * 6.0 - 15.0) + 10.0);  // quintic step
  return 1.0 - s;
}

struct MicroMove {
  CoverPoint c;
  Vec2 delta;
  double radius;
};

CoverPoint apply_micro(const MicroMove& m, const CoverPoint& p) {
  for (int n = -4; n <= 4; ++n) {
    const CoverPoint cn = tau_pow(m.c, n);
    const double dx = p.x - cn.x;
    if (std::abs(dx) >= m.radius) continue;
    const double dy = p.y - cn.y;
    const double r = std::sqrt(dx * dx + dy * dy);
    if (r >= m.radius) continue;
    const double f = bump(r / m.radius);
    const double flip = (n % 2 == 0) ? 1.0 : -1.0;
    return {p.x + f * m.delta.x, p.y + f * flip * m.delta.y};
  }
  return p;
}

PointMap chain_map(std::shared_ptr<std::vector<MicroMove>> moves) {
  return [moves](const CoverPoint& p) {
    CoverPoint q = p;
    for (const auto& m : *moves) q = apply_micro(m, q);
    return q;
  };
}

constexpr double kDragRadius = 0.06;
constexpr double kEtaRadius = 0.04;

// static obstacles a single-strand drag must not touch: the basepoint and,
// when given, the parked puncture
void check_drag_clearance(const std::vector<MicroMove>& moves,
                          const std::vector<BandPoint>& obstacles) {
  for (const auto& m : moves) {
    const BandPoint c = project(m.c);
    for (const auto& ob : obstacles) {
      if (distance(c, ob) < m.radius * 1.15) {
        throw DerivationError("drag journey too close to a fixed point");
      }
    }
  }
}

std::shared_ptr<std::vector<MicroMove>> drag_moves(const CoverPolyline& journey,
                                                   double radius) {
  auto moves = std::make_shared<std::vector<MicroMove>>();
  const CoverPolyline fine = resample(journey, radius / 4.0);
  for (size_t i = 0; i + 1 < fine.pts.size(); ++i) {
    const Vec2 d = fine.pts[i + 1].vec() - fine.pts[i].vec();
    moves->push_back({fine.pts[i], d, radius});
  }
  return moves;
}

// simultaneous two-strand motion with matched time grids; returns nullptr
// when the strands come too close for disjoint supports
std::shared_ptr<std::vector<MicroMove>> interleaved_moves(
    const std::vector<CoverPoint>& path1, const std::vector<CoverPoint>& path2,
    double radius) {
  auto moves = std::make_shared<std::vector<MicroMove>>();
  const size_t n = path1.size();
  for (size_t k = 0; k < n; ++k) {
    if (distance(project(path1[k]), project(path2[k])) < 2.5 * radius) {
      return nullptr;
    }
  }
  for (size_t k = 0; k + 1 < n; ++k) {
    moves->push_back({path1[k], path1[k + 1].vec() - path1[k].vec(), radius});
    moves->push_back({path2[k], path2[k + 1].vec() - path2[k].vec(), radius});
  }
  return moves;
}

std::vector<CoverPoint> timed_two_leg_path(const CoverPoint& a,
                                           const CoverPoint& mid,
                                           const CoverPoint& b, int half_steps) {
  std::vector<CoverPoint> out;
  out.reserve(2 * half_steps + 1);
  for (int k = 0; k <= half_steps; ++k) {
    const double t = static_cast<double>(k) / half_steps;
    out.push_back({a.x + (mid.x - a.x) * t, a.y + (mid.y - a.y) * t});
  }
  for (int k = 1; k <= half_steps; ++k) {
    const double t = static_cast<double>(k) / half_steps;
    out.push_back({mid.x + (b.x - mid.x) * t, mid.y + (b.y - mid.y) * t});
  }
  return out;
}

// ---------------------------------------------------------------------------
// pi_1 basis loops at b = pi(0, -1/2) and endomorphism tracing

const std::array<CoverPolyline, 3>& basis_loops() {
  static const std::array<CoverPolyline, 3> loops = [] {
    std::array<CoverPolyline, 3> l;
    l[0].pts = {{0.0, -0.5}, {0.4, -0.35}, {0.55, -0.35}, {0.55, 0.4}, {1.0, 0.5}};
    l[0].closure_power = 1;  // crosses the branch cut once
    l[1].pts = {{0.0, -0.5}, {-0.4, -0.2}, {-0.4, 0.25},
                {-0.1, 0.25}, {-0.1, -0.2}, {0.0, -0.5}};
    l[2].pts = {{0.0, -0.5}, {0.1, -0.2}, {0.1, 0.25},
                {0.4, 0.25}, {0.4, -0.2}, {0.0, -0.5}};
    return l;
  }();
  return loops;
}

// features pinch against the marked points, so the refinement scale is the
// distance to the nearer of them
ClearanceFn puncture_clearance() {
  const MarkedPoints mk;
  return [mk](const BandPoint& p) {
    return std::min(distance(p, mk.z1), distance(p, mk.z2));
  };
}

FreeEndo trace_endo(const PointMap& time1) {
  static const ClearanceFn clearance = puncture_clearance();
  FreeEndo e;
  for (int i = 0; i < 3; ++i) {
    const CoverPolyline coarse = resample(basis_loops()[i], 0.1);
    const CoverPolyline image =
        apply_map_adaptive(time1, coarse, 0.01, 40, clearance);
    e.image[i] = loop_word(image);
  }
  return e;
}

PointMap iso_time1(const Isotopy& iso) {
  return [iso](const CoverPoint& p) { return iso.eval_cover(1.0, p); };
}

// ---------------------------------------------------------------------------
// generator journeys (cover polylines); variants differ in the side of the
// cut the journey leaves through / the side of the band it travels on

CoverPolyline rho2_journey(double r) {
  CoverPolyline j;
  j.pts = {{-0.25, 0.0}, {0.5, r}, {0.75, 0.0}};
  j.closure_power = 1;
  return j;
}

CoverPolyline rho3_journey(double r) {
  CoverPolyline j;
  j.pts = {{0.25, 0.0}, {0.5, r}, {1.25, 0.0}};
  j.closure_power = 1;
  return j;
}

CoverPolyline boundary_parallel_journey(double x0, double dy, int dir) {
  CoverPolyline j;
  j.pts = {{x0, 0.0},
           {x0, dy},
           {x0 + 2.0 * dir, dy},
           {x0 + 2.0 * dir, 0.0}};
  j.closure_power = 2 * dir;
  return j;
}

CoverPolyline reversed(const CoverPolyline& line) {
  CoverPolyline out;
  out.pts.assign(line.pts.rbegin(), line.pts.rend());
  out.closure_power = -line.closure_power;
  return out;
}

struct EtaSample {
  int strand;
  double r_q;
  Vec2 v;
  LassoFlags lasso;
  FreeEndo endo;
};

}  // namespace

// ---------------------------------------------------------------------------

LassoFlags eta_lasso_flags(int strand, double r_q, const Vec2& v_chart,
                           const MarkedPoints& marked) {
  const Vec2 zi = (strand == 1 ? marked.z1 : marked.z2).chart();
  const Vec2 ze = (strand == 1 ? marked.z2 : marked.z1).chart();
  const Vec2 exit{kHalf, r_q};
  const Vec2 reentry{-kHalf, -r_q};
  LassoFlags f;
  // outbound leg zi -> exit vs excursion ze -> v; interleaved when the
  // excursion reaches the intersection point first
  if (auto hit = segment_intersection(ze, v_chart, zi, exit)) {
    if (hit->first < hit->second) f.out = true;
  }
  // inbound leg reentry -> zi; interleaved when mu_i + lambda_e < 1
  if (auto hit = segment_intersection(ze, v_chart, reentry, zi)) {
    if (hit->first + hit->second < 1.0) f.in = true;
  }
  return f;
}

FreeEndo GeneratorTable::act_letter(BraidGen g, int sign) const {
  const int i = static_cast<int>(g);
  return sign > 0 ? gen_endo_[i] : gen_endo_inv_[i];
}

FreeEndo GeneratorTable::act(const BraidWord& w) const {
  FreeEndo e = FreeEndo::identity();
  for (const auto& l : w.letters) e = compose(e, act_letter(l.gen, l.sign));
  return e;
}

bool GeneratorTable::equal(const BraidWord& a, const BraidWord& b) const {
  return act(a) == act(b);
}

const BraidWord& GeneratorTable::eta_word(const EtaKey& k) const {
  const int s = k.strand - 1;
  const int r = k.r_positive ? 1 : 0;
  const int lo = k.lasso_out ? 1 : 0;
  const int li = k.lasso_in ? 1 : 0;
  if (!eta_covered_[s][r][lo][li]) {
    throw DerivationError("eta class (strand " + std::to_string(k.strand) +
                          ", r" + (r ? std::string("+") : std::string("-")) +
                          ", out " + std::to_string(lo) + ", in " +
                          std::to_string(li) + ") was not derived");
  }
  return eta_[s][r][lo][li];
}

void GeneratorTable::ensure_ball(int radius) const {
  if (ball_radius_ >= radius) return;
  ball_.clear();
  struct Node {
    FreeEndo endo;
    BraidWord word;
  };
  std::deque<Node> frontier;
  frontier.push_back({FreeEndo::identity(), {}});
  ball_[FreeEndo::identity().key()] = BraidWord{};
  const std::array<std::pair<BraidGen, int>, 6> letters = {
      std::make_pair(BraidGen::B, 1),  std::make_pair(BraidGen::B, -1),
      std::make_pair(BraidGen::R2, 1), std::make_pair(BraidGen::R2, -1),
      std::make_pair(BraidGen::R3, 1), std::make_pair(BraidGen::R3, -1)};
  for (int depth = 0; depth < radius; ++depth) {
    std::deque<Node> next;
    for (const auto& node : frontier) {
      for (const auto& [g, s] : letters) {
        if (!node.word.letters.empty()) {
          const auto& last = node.word.letters.back();
          if (last.gen == g && last.sign == -s) continue;
        }
        Node child;
        child.word = node.word;
        child.word.letters.push_back({g, static_cast<int8_t>(s)});
        child.endo = compose(node.endo, act_letter(g, s));
        const std::string key = child.endo.key();
        if (ball_.emplace(key, child.word).second) {
          next.push_back(std::move(child));
        }
      }
    }
    frontier.swap(next);
  }
  ball_radius_ = radius;
}

std::optional<BraidWord> GeneratorTable::find_word(const FreeEndo& e,
                                                   int radius) const {
  ensure_ball(radius);
  const auto it = ball_.find(e.key());
  if (it == ball_.end()) return std::nullopt;
  return it->second;
}

const BraidWord& GeneratorTable::conj_by_r2(BraidGen g, int dir) const {
  const int gi = g == BraidGen::B ? 0 : (g == BraidGen::R3 ? 1 : -1);
  if (gi < 0) throw DomainError("conj_by_r2: want A (as B) or rho3");
  return conj_r2_[gi][dir > 0 ? 1 : 0];
}

const BraidWord& GeneratorTable::conj_by_b(BraidGen g, int dir) const {
  const int gi = g == BraidGen::R2 ? 0 : (g == BraidGen::R3 ? 1 : -1);
  if (gi < 0) throw DomainError("conj_by_b: want rho2 or rho3");
  return conj_b_[gi][dir > 0 ? 1 : 0];
}

std::array<std::array<int, 2>, 2> GeneratorTable::splitting_matrix() const {
  // exponent sums on ab(F2): the A-exponent is half the B-sign sum
  std::array<std::array<int, 2>, 2> m{};
  for (int gi = 0; gi < 2; ++gi) {
    const BraidWord& w = conj_r2_[gi][1];
    int bsum = 0, er3 = 0;
    for (const auto& l : w.letters) {
      if (l.gen == BraidGen::B) {
        bsum += l.sign;
      } else if (l.gen == BraidGen::R3) {
        er3 += l.sign;
      }
    }
    m[gi][0] = bsum / 2;
    m[gi][1] = er3;
  }
  return m;
}

bool GeneratorTable::a_exponent_preserved() const {
  const auto m = splitting_matrix();
  return m[0][0] == 1 && m[1][0] == 0;
}

void GeneratorTable::validate() const {
  // A = B^2 against an independently traced full rotation is re-checked at
  // derivation time; here validate the invertibility and table relations.
  for (int i = 0; i < 3; ++i) {
    if (!compose(gen_endo_[i], gen_endo_inv_[i]).is_identity() ||
        !compose(gen_endo_inv_[i], gen_endo_[i]).is_identity()) {
      throw DerivationError("validate: inverse endomorphism mismatch");
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (gen_endo_[i].apply(delta_) != delta_) {
      throw DerivationError("validate: boundary word is not fixed");
    }
  }
  const BraidWord r2 = BraidWord::gen(BraidGen::R2);
  const BraidWord eta11 = BraidWord::A(-1) * r2;
  bool found_r2 = false, found_eta11 = false;
  for (int s = 0; s < 2; ++s) {
    std::vector<std::string> values;
    for (int rs = 0; rs < 2; ++rs) {
      for (int lo = 0; lo < 2; ++lo) {
        for (int li = 0; li < 2; ++li) {
          if (!eta_covered_[s][rs][lo][li]) continue;
          const BraidWord& w = eta_[s][rs][lo][li];
          if (!w.is_pure()) throw DerivationError("validate: non-pure eta");
          // one positive crossing of the moving strand, none of the other
          const int hm = s == 0 ? h1(w) : h2(w);
          const int ho = s == 0 ? h2(w) : h1(w);
          if (hm != 1 || ho != 0) {
            throw DerivationError("validate: eta crossing counts wrong");
          }
          if (s == 0) {
            if (equal(w, r2)) found_r2 = true;
            if (equal(w, eta11)) found_eta11 = true;
          }
          const std::string key = act(w).key();
          if (std::find(values.begin(), values.end(), key) == values.end()) {
            values.push_back(key);
          }
        }
      }
    }
    if (values.size() > 4) {
      throw DerivationError("validate: more than four eta braids on strand " +
                            std::to_string(s + 1));
    }
  }
  if (!found_r2 || !found_eta11) {
    throw DerivationError("validate: eta table misses rho2 or A^-1 rho2");
  }
}

namespace {

std::string word_json(const BraidWord& w) { return w.str(); }

}  // namespace

std::string GeneratorTable::serialize() const {
  json j;
  j["marked"] = {marked_.z1.x(), marked_.z1.y(), marked_.z2.x(), marked_.z2.y()};
  const char* names[3] = {"B", "R2", "R3"};
  for (int i = 0; i < 3; ++i) {
    json e;
    for (int k = 0; k < 3; ++k) e["image"].push_back(gen_endo_[i].image[k].str());
    for (int k = 0; k < 3; ++k)
      e["inverse_image"].push_back(gen_endo_inv_[i].image[k].str());
    j["generators"][names[i]] = e;
  }
  j["delta"] = delta_.str();
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r < 2; ++r)
      for (int lo = 0; lo < 2; ++lo)
        for (int li = 0; li < 2; ++li) {
          j["eta"][s][r][lo][li] =
              eta_covered_[s][r][lo][li] ? word_json(eta_[s][r][lo][li]) : "?";
        }
  for (int g = 0; g < 2; ++g)
    for (int d = 0; d < 2; ++d) {
      j["conj_r2"][g][d] = word_json(conj_r2_[g][d]);
      j["conj_b"][g][d] = word_json(conj_b_[g][d]);
    }
  j["log"] = log_;
  return j.dump(2);
}

GeneratorTable GeneratorTable::deserialize(const std::string& text) {
  const json j = json::parse(text);
  GeneratorTable t;
  const auto m = j.at("marked");
  t.marked_.z1 = band_point(m[0], m[1]);
  t.marked_.z2 = band_point(m[2], m[3]);
  const char* names[3] = {"B", "R2", "R3"};
  for (int i = 0; i < 3; ++i) {
    const auto& e = j.at("generators").at(names[i]);
    for (int k = 0; k < 3; ++k) {
      t.gen_endo_[i].image[k] = FreeWord::parse(e.at("image")[k]);
      t.gen_endo_inv_[i].image[k] = FreeWord::parse(e.at("inverse_image")[k]);
    }
  }
  t.delta_ = FreeWord::parse(j.at("delta"));
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r < 2; ++r)
      for (int lo = 0; lo < 2; ++lo)
        for (int li = 0; li < 2; ++li) {
          const std::string w = j.at("eta")[s][r][lo][li];
          if (w == "?") continue;
          t.eta_[s][r][lo][li] = BraidWord::parse(w);
          t.eta_covered_[s][r][lo][li] = true;
        }
  for (int g = 0; g < 2; ++g)
    for (int d = 0; d < 2; ++d) {
      t.conj_r2_[g][d] = BraidWord::parse(j.at("conj_r2")[g][d]);
      t.conj_b_[g][d] = BraidWord::parse(j.at("conj_b")[g][d]);
    }
  if (j.contains("log")) {
    for (const auto& s : j.at("log")) t.log_.push_back(s);
  }
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------

namespace {

// searches words over a restricted alphabet whose action matches the target
std::optional<BraidWord> match_in_alphabet(
    const GeneratorTable& t, const FreeEndo& target,
    const std::vector<BraidWord>& alphabet, int max_letters) {
  struct Node {
    FreeEndo endo;
    BraidWord word;
  };
  std::vector<FreeEndo> alpha_endos;
  alpha_endos.reserve(alphabet.size());
  for (const auto& w : alphabet) alpha_endos.push_back(t.act(w));
  std::unordered_map<std::string, bool> seen;
  std::deque<Node> frontier;
  frontier.push_back({FreeEndo::identity(), {}});
  seen[FreeEndo::identity().key()] = true;
  if (target.is_identity()) return BraidWord{};
  for (int depth = 0; depth < max_letters; ++depth) {
    std::deque<Node> next;
    for (const auto& node : frontier) {
      for (size_t a = 0; a < alphabet.size(); ++a) {
        Node child;
        child.endo = compose(node.endo, alpha_endos[a]);
        const std::string key = child.endo.key();
        if (seen.count(key)) continue;
        seen[key] = true;
        child.word = node.word * alphabet[a];
        if (child.endo == target) return child.word;
        next.push_back(std::move(child));
      }
    }
    frontier.swap(next);
  }
  return std::nullopt;
}

}  // namespace

GeneratorTable derive_generator_table() {
  GeneratorTable t;
  auto& log = t.log_;

  const BandPoint origin = band_point(0.0, 0.0);
  const Isotopy b_iso = plateau_rotation(origin, 0.45, 0.15, M_PI);
  const Isotopy b_inv_iso = plateau_rotation(origin, 0.45, 0.15, -M_PI);
  const Isotopy a_iso = plateau_rotation(origin, 0.45, 0.15, 2.0 * M_PI);
  const Isotopy a_inv_iso = plateau_rotation(origin, 0.45, 0.15, -2.0 * M_PI);

  // basis sanity: the untouched loops must read off single letters
  for (int i = 0; i < 3; ++i) {
    const FreeWord w = loop_word(resample(basis_loops()[i], 0.05));
    if (w.size() != 1 || static_cast<int>(w.letters[0].gen) != i ||
        w.letters[0].sign != 1) {
      throw DerivationError("basis loop " + std::to_string(i) +
                            " does not trace to a single letter");
    }
  }

  const FreeEndo e_b = trace_endo(iso_time1(b_iso));
  const FreeEndo e_binv = trace_endo(iso_time1(b_inv_iso));
  const FreeEndo e_a = trace_endo(iso_time1(a_iso));
  const FreeEndo e_ainv = trace_endo(iso_time1(a_inv_iso));
  if (compose(e_b, e_b) != e_a) {
    throw DerivationError("relation A = B^2 failed between traced rotations");
  }
  if (!compose(e_a, e_ainv).is_identity() || !compose(e_b, e_binv).is_identity()) {
    throw DerivationError("rotation inverses failed to compose to identity");
  }
  log.push_back("A = B^2 verified between the pi and 2pi plateau rotations");

  const std::vector<BandPoint> obstacles_for_z1 = {band_point(0.0, -0.5),
                                                   t.marked_.z2};
  const std::vector<BandPoint> obstacles_for_z2 = {band_point(0.0, -0.5),
                                                   t.marked_.z1};

  auto drag_endo = [&](const CoverPolyline& journey,
                       const std::vector<BandPoint>& obstacles) {
    auto moves = drag_moves(journey, kDragRadius);
    check_drag_clearance(*moves, obstacles);
    return trace_endo(chain_map(moves));
  };

  const double rhat = 0.15;
  const FreeEndo rho2_minus = drag_endo(rho2_journey(-rhat), obstacles_for_z1);
  const FreeEndo rho2_plus = drag_endo(rho2_journey(rhat), obstacles_for_z1);

  // eta journeys for strand 1 with a far, non-interleaving excursion must
  // reproduce the pure journey drags
  MarkedPoints marked = t.marked_;
  auto eta_endo = [&](int strand, double r_q,
                      const Vec2& v) -> std::optional<FreeEndo> {
    const CoverPoint zi =
        (strand == 1 ? marked.z1 : marked.z2).lift;
    const CoverPoint ze =
        (strand == 1 ? marked.z2 : marked.z1).lift;
    const CoverPoint exit{kHalf, r_q};
    const CoverPoint end = tau({zi.x, zi.y});
    const int half_steps = 120;
    const auto p_journey = timed_two_leg_path(zi, exit, end, half_steps);
    const auto p_excursion =
        timed_two_leg_path(ze, {v.x, v.y}, ze, half_steps);
    auto moves = interleaved_moves(p_journey, p_excursion, kEtaRadius);
    if (!moves) return std::nullopt;
    return trace_endo(chain_map(moves));
  };

  const std::vector<Vec2> v_pool = {
      {-0.05, -0.38}, {0.40, 0.30},   {-0.38, 0.30},  {0.10, 0.42},
      {-0.30, -0.30}, {0.38, -0.22},  {-0.20, 0.40},  {0.05, 0.30},
      {-0.42, -0.10}, {0.30, 0.42},   {-0.10, -0.42}, {0.44, 0.10},
      {-0.44, -0.20}, {-0.46, 0.08},  {-0.35, -0.42}, {0.05, -0.30},
      {-0.46, -0.33}, {0.20, -0.40},  {-0.25, 0.33},  {0.33, 0.17}};

  // collect classified samples per strand
  std::array<std::vector<EtaSample>, 2> samples;
  for (int strand : {1, 2}) {
    for (double r : {-rhat, rhat, -0.30, 0.30}) {
      for (const Vec2& v : v_pool) {
        const LassoFlags lasso = eta_lasso_flags(strand, r, v, marked);
        auto endo = eta_endo(strand, r, v);
        if (!endo) continue;
        samples[strand - 1].push_back({strand, r, v, lasso, *endo});
      }
    }
  }

  // group consistency: within (r sign, lasso flags) all endomorphisms agree
  std::array<std::array<std::array<std::optional<FreeEndo>, 2>, 2>, 2>
      eta_endos[2];
  for (int s = 0; s < 2; ++s) {
    for (const auto& smp : samples[s]) {
      const int rs = smp.r_q > 0 ? 1 : 0;
      const int lo = smp.lasso.out ? 1 : 0;
      const int li = smp.lasso.in ? 1 : 0;
      auto& slot = eta_endos[s][rs][lo][li];
      if (!slot) {
        slot = smp.endo;
      } else if (*slot != smp.endo) {
        std::ostringstream os;
        os << "eta class (strand " << s + 1 << ", r" << (rs ? "+" : "-")
           << ", out " << lo << ", in " << li
           << ") is not single-valued at v=(" << smp.v.x << "," << smp.v.y
           << ")";
        throw DerivationError(os.str());
      }
    }
    // the plain classes are mandatory; interleaved ones as sampled
    for (int rs = 0; rs < 2; ++rs) {
      if (!eta_endos[s][rs][0][0]) {
        throw DerivationError("eta sampling left a plain class (strand " +
                              std::to_string(s + 1) + ") uncovered");
      }
      if (!eta_endos[s][rs][1][0]) {
        throw DerivationError("eta sampling left an out-lasso class (strand " +
                              std::to_string(s + 1) + ") uncovered");
      }
    }
  }

  // the non-interleaved eta classes coincide with the pure journey drags
  if (!(*eta_endos[0][0][0][0] == rho2_minus) ||
      !(*eta_endos[0][1][0][0] == rho2_plus)) {
    throw DerivationError(
        "strand-1 eta classes disagree with the core-journey drags");
  }

  // Pin the rho2 convention with eta_{1,1} = A^{-1} rho2, eta_{1,2} = rho2.
  bool rho2_is_minus;
  if (*eta_endos[0][1][0][0] == compose(e_ainv, rho2_minus)) {
    rho2_is_minus = true;  // r<0 class is rho2, r>0 class is A^-1 rho2
    log.push_back("rho2 := journey exiting below the core line");
  } else if (*eta_endos[0][0][0][0] == compose(e_ainv, rho2_plus)) {
    rho2_is_minus = false;
    log.push_back("rho2 := journey exiting above the core line");
  } else {
    throw DerivationError("relation eta_{1,1} = A^-1 rho2 failed both ways");
  }
  const double rho2_r = rho2_is_minus ? -rhat : rhat;
  const FreeEndo e_r2 = rho2_is_minus ? rho2_minus : rho2_plus;
  const FreeEndo e_r2inv =
      drag_endo(reversed(rho2_journey(rho2_r)), obstacles_for_z1);
  if (!compose(e_r2, e_r2inv).is_identity()) {
    throw DerivationError("rho2 inverse drag failed to invert");
  }

  // Pin rho3 via A_{1,3} = rho3^-2 A^-1 against the traced boundary-parallel
  // journeys of the second point.
  std::optional<double> rho3_r;
  std::optional<FreeEndo> e_r3, e_r3inv;
  std::string a13_choice;
  for (double r : {-rhat, rhat}) {
    const FreeEndo cand = drag_endo(rho3_journey(r), obstacles_for_z2);
    const FreeEndo cand_inv =
        drag_endo(reversed(rho3_journey(r)), obstacles_for_z2);
    if (!compose(cand, cand_inv).is_identity()) {
      throw DerivationError("rho3 inverse drag failed to invert");
    }
    const FreeEndo lhs = compose(compose(cand_inv, cand_inv), e_ainv);
    for (double dy : {-0.35, 0.35}) {
      for (int dir : {1, -1}) {
        const FreeEndo a13 =
            drag_endo(boundary_parallel_journey(0.25, dy, dir), obstacles_for_z2);
        if (lhs == a13) {
          if (e_r3 && !(cand == *e_r3)) {
            throw DerivationError("rho3 convention is ambiguous");
          }
          rho3_r = r;
          e_r3 = cand;
          e_r3inv = cand_inv;
          std::ostringstream os;
          os << "A_{1,3} matched: rho3 exit r=" << r << ", loop dy=" << dy
             << ", dir=" << dir;
          a13_choice = os.str();
        }
      }
    }
  }
  if (!e_r3) {
    throw DerivationError("relation A_{1,3} = rho3^-2 A^-1 failed");
  }
  log.push_back(a13_choice);

  t.gen_endo_ = {e_b, e_r2, *e_r3};
  t.gen_endo_inv_ = {e_binv, e_r2inv, *e_r3inv};

  // A_{1,2} = rho2^-1 A rho2^-1 against traced first-point loops
  {
    const FreeEndo lhs = compose(compose(e_r2inv, e_a), e_r2inv);
    bool found = false;
    for (double dy : {-0.35, 0.35}) {
      for (int dir : {1, -1}) {
        const FreeEndo a12 = drag_endo(boundary_parallel_journey(-0.25, dy, dir),
                                       obstacles_for_z1);
        if (lhs == a12) {
          found = true;
          std::ostringstream os;
          os << "A_{1,2} matched: loop dy=" << dy << ", dir=" << dir;
          log.push_back(os.str());
        }
      }
    }
    if (!found) {
      throw DerivationError("relation A_{1,2} = rho2^-1 A rho2^-1 failed");
    }
  }

  // boundary word, traced from the pushed-in boundary loop
  {
    CoverPolyline boundary;
    boundary.pts = {{0.0, -0.48}, {2.0, -0.48}};
    boundary.closure_power = 2;
    t.delta_ = loop_word(resample(boundary, 0.05));
    for (int i = 0; i < 3; ++i) {
      if (t.gen_endo_[i].apply(t.delta_) != t.delta_) {
        throw DerivationError("generator does not fix the boundary word");
      }
    }
    log.push_back("boundary word: " + t.delta_.str());
  }

  // name the eta classes as short words
  for (int s = 0; s < 2; ++s) {
    std::string row;
    for (int rs = 0; rs < 2; ++rs) {
      for (int lo = 0; lo < 2; ++lo) {
        for (int li = 0; li < 2; ++li) {
          if (!eta_endos[s][rs][lo][li]) continue;
          auto word = t.find_word(*eta_endos[s][rs][lo][li], 6);
          if (!word) {
            throw DerivationError("eta class word not found within radius 6");
          }
          t.eta_[s][rs][lo][li] = *word;
          t.eta_covered_[s][rs][lo][li] = true;
          row += " [r" + std::string(rs ? "+" : "-") + (lo ? "o" : "") +
                 (li ? "i" : "") + "]=" + word->str();
        }
      }
    }
    log.push_back("eta strand " + std::to_string(s + 1) + ":" + row);
  }

  // mirror rule: a journey leaving through the other side realizes the
  // inverse of the mirrored class
  {
    for (int strand : {1, 2}) {
      const double s_y = 0.22;
      const CoverPoint zi = (strand == 1 ? marked.z1 : marked.z2).lift;
      const CoverPoint ze = (strand == 1 ? marked.z2 : marked.z1).lift;
      const CoverPoint exit{-kHalf, s_y};
      const CoverPoint end{zi.x - 1.0, -zi.y};
      const auto p_journey = timed_two_leg_path(zi, exit, end, 120);
      const Vec2 v{strand == 1 ? -0.05 : 0.05, -0.38};
      const auto p_excursion = timed_two_leg_path(ze, {v.x, v.y}, ze, 120);
      auto moves = interleaved_moves(p_journey, p_excursion, kEtaRadius);
      if (!moves) throw DerivationError("mirror-rule sample degenerate");
      const FreeEndo got = trace_endo(chain_map(moves));
      // reversed journey exits right at -s_y with the same excursion class
      const double r_mirror = -s_y;
      const LassoFlags lasso = eta_lasso_flags(strand, r_mirror, v, marked);
      const BraidWord expect =
          t.eta_word({strand, r_mirror > 0, lasso.out, lasso.in}).inverse();
      if (!(got == t.act(expect))) {
        throw DerivationError("mirror rule failed for strand " +
                              std::to_string(strand));
      }
    }
    log.push_back("left/right mirror rule verified");
  }

  // splitting data: conjugation of the kernel generators by rho2, and the
  // strand swap by B, as words over the pure alphabet
  {
    const BraidWord A = BraidWord::A(1);
    const BraidWord r2 = BraidWord::gen(BraidGen::R2);
    const BraidWord r3 = BraidWord::gen(BraidGen::R3);
    const std::vector<BraidWord> kernel_alpha = {A, A.inverse(), r3,
                                                 r3.inverse()};
    const std::vector<BraidWord> pure_alpha = {
        A, A.inverse(), r2, r2.inverse(), r3, r3.inverse()};
    struct Item {
      BraidWord target;
      const std::vector<BraidWord>* alphabet;
      BraidWord* slot;
      const char* name;
    };
    const std::array<Item, 8> items = {
        Item{r2.inverse() * A * r2, &kernel_alpha, &t.conj_r2_[0][1],
             "rho2^-1 A rho2"},
        Item{r2 * A * r2.inverse(), &kernel_alpha, &t.conj_r2_[0][0],
             "rho2 A rho2^-1"},
        Item{r2.inverse() * r3 * r2, &kernel_alpha, &t.conj_r2_[1][1],
             "rho2^-1 rho3 rho2"},
        Item{r2 * r3 * r2.inverse(), &kernel_alpha, &t.conj_r2_[1][0],
             "rho2 rho3 rho2^-1"},
        Item{BraidWord::gen(BraidGen::B) * r2 * BraidWord::gen(BraidGen::B, -1),
             &pure_alpha, &t.conj_b_[0][1], "B rho2 B^-1"},
        Item{BraidWord::gen(BraidGen::B, -1) * r2 * BraidWord::gen(BraidGen::B),
             &pure_alpha, &t.conj_b_[0][0], "B^-1 rho2 B"},
        Item{BraidWord::gen(BraidGen::B) * r3 * BraidWord::gen(BraidGen::B, -1),
             &pure_alpha, &t.conj_b_[1][1], "B rho3 B^-1"},
        Item{BraidWord::gen(BraidGen::B, -1) * r3 * BraidWord::gen(BraidGen::B),
             &pure_alpha, &t.conj_b_[1][0], "B^-1 rho3 B"}};
    for (const auto& item : items) {
      auto w = match_in_alphabet(t, t.act(item.target), *item.alphabet, 8);
      if (!w) {
        throw DerivationError(std::string("splitting word not found for ") +
                              item.name);
      }
      *item.slot = *w;
      log.push_back(std::string(item.name) + " = " + w->str());
    }
  }

  t.validate();
  return t;
}

const GeneratorTable& shared_table() {
  static const GeneratorTable table = derive_generator_table();
  return table;
}

}  // namespace mobius
