#include "mobius/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "mobius/rng.hpp"

namespace mobius {

namespace {

int sheet_of(const CoverPoint& p) {
  return static_cast<int>(std::floor(p.x + kHalf));
}

Vec2 chart_of(const CoverPoint& p) { return project(p).chart(); }

// lift of the base point in the sheet of a, so the closing leg stays in
// one chart
CoverPoint base_lift_near(const CoverPoint& a, const BandPoint& base) {
  return tau_pow(base.lift, sheet_of(a));
}

struct PathPair {
  std::function<CoverPoint(double)> pos1;
  std::function<CoverPoint(double)> pos2;
};

struct GridPoint {
  double t;
  CoverPoint p1;
  CoverPoint p2;
};

double quotient_dist(const CoverPoint& a, const CoverPoint& b) {
  return distance(project(a), project(b));
}

double turn_angle(const Vec2& a, const Vec2& b) {
  const double cross = a.x * b.y - a.y * b.x;
  const double dot = a.dot(b);
  return std::atan2(cross, dot);
}

struct TraceFail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// angle swept by the affine family lerp(a0,a1,s), s in [0,1]
double affine_sweep(const Vec2& a0, const Vec2& a1) {
  double total = 0.0;
  const int n = 128;
  Vec2 prev = a0;
  for (int i = 1; i <= n; ++i) {
    const Vec2 v = lerp(a0, a1, static_cast<double>(i) / n);
    if (v.norm() < 1e-9 || prev.norm() < 1e-9) {
      throw TraceFail("closing sweep passes the diagonal");
    }
    const double step = turn_angle(prev, v);
    if (std::abs(step) > 1.2) {
      throw TraceFail("closing sweep under-resolved near the diagonal");
    }
    total += step;
    prev = v;
  }
  return total;
}

struct CompileResult {
  bool ok = false;
  std::string failure;
  BraidWord word;
  std::vector<CrossingEvent> events;
  std::vector<int> segment_twists;
  double max_residual = 0.0;
  int samples = 0;
  int q_upper = 0;
};

class Compiler {
 public:
  Compiler(PathPair paths, const GeneratorTable& table, const TraceOptions& opt)
      : paths_(std::move(paths)), table_(table), opt_(opt) {}

  CompileResult run() {
    CompileResult res;
    try {
      build_grid();
      find_events();
      assemble(res);
      res.ok = true;
    } catch (const std::exception& e) {
      res.failure = e.what();
    }
    res.samples = static_cast<int>(grid_.size());
    return res;
  }

 private:
  void build_grid() {
    const int n0 = 384;
    grid_.reserve(n0 + 1);
    for (int i = 0; i <= n0; ++i) {
      const double t = static_cast<double>(i) / n0;
      grid_.push_back({t, paths_.pos1(t), paths_.pos2(t)});
    }
    for (int pass = 0; pass < 24; ++pass) {
      bool changed = false;
      std::vector<GridPoint> next;
      next.reserve(grid_.size() * 2);
      for (size_t i = 0; i + 1 < grid_.size(); ++i) {
        next.push_back(grid_[i]);
        const auto& a = grid_[i];
        const auto& b = grid_[i + 1];
        const double step1 = (b.p1.vec() - a.p1.vec()).norm();
        const double step2 = (b.p2.vec() - a.p2.vec()).norm();
        const double sep =
            std::min(quotient_dist(a.p1, a.p2), quotient_dist(b.p1, b.p2));
        bool split = step1 > opt_.max_step || step2 > opt_.max_step;
        if (sep < 10 * opt_.collision_tol &&
            (step1 > opt_.collision_tol || step2 > opt_.collision_tol)) {
          split = true;
        }
        if (split && b.t - a.t > 1e-12) {
          const double tm = 0.5 * (a.t + b.t);
          next.push_back({tm, paths_.pos1(tm), paths_.pos2(tm)});
          changed = true;
        }
      }
      next.push_back(grid_.back());
      grid_.swap(next);
      if (!changed) break;
    }
    for (const auto& g : grid_) {
      if (quotient_dist(g.p1, g.p2) < opt_.collision_tol) {
        throw TraceFail("strand collision within tolerance");
      }
    }
  }

  void find_events() {
    for (int strand : {1, 2}) {
      const auto& pos = strand == 1 ? paths_.pos1 : paths_.pos2;
      for (size_t i = 0; i + 1 < grid_.size(); ++i) {
        const CoverPoint a = strand == 1 ? grid_[i].p1 : grid_[i].p2;
        const CoverPoint b = strand == 1 ? grid_[i + 1].p1 : grid_[i + 1].p2;
        const int sa = sheet_of(a);
        const int sb = sheet_of(b);
        if (sa == sb) continue;
        if (std::abs(sb - sa) != 1) {
          throw TraceFail("strand crosses two cut lifts in one step");
        }
        const double edge = std::min(sa, sb) + kHalf;
        double lo = grid_[i].t, hi = grid_[i + 1].t;
        for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((pos(mid).x - edge) * (a.x - edge) > 0) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        const double tc = 0.5 * (lo + hi);
        const CoverPoint pc = pos(tc);
        CrossingEvent ev;
        ev.strand = strand;
        ev.time = tc;
        ev.side = sb > sa ? 1 : -1;
        const int m = std::min(sa, sb);
        ev.r_q = (m % 2 == 0 ? 1.0 : -1.0) * pc.y;
        ev.y_at_crossing = ev.side > 0 ? ev.r_q : -ev.r_q;
        if (std::abs(ev.r_q) < 1e-9 || std::abs(ev.r_q) > kHalf - 1e-9) {
          throw TraceFail("degenerate cut crossing height");
        }
        const CoverPoint other =
            strand == 1 ? paths_.pos2(tc) : paths_.pos1(tc);
        const LassoFlags lf =
            eta_lasso_flags(strand, ev.r_q, chart_of(other), table_.marked());
        ev.lasso_out = lf.out;
        ev.lasso_in = lf.in;
        events_.push_back(ev);
      }
    }
    std::sort(events_.begin(), events_.end(),
              [](const CrossingEvent& a, const CrossingEvent& b) {
                return a.time < b.time;
              });
    for (size_t i = 0; i + 1 < events_.size(); ++i) {
      if (events_[i + 1].time - events_[i].time < 1e-5) {
        throw TraceFail("simultaneous cut crossings");
      }
    }
  }

  Vec2 rel(double t) const {
    return chart_of(paths_.pos2(t)) - chart_of(paths_.pos1(t));
  }

  // turn of the relative chart vector from t0 to t1, bisecting when a single
  // step rotates too fast
  double sweep_motion(double t0, const Vec2& v0, double t1, const Vec2& v1,
                      int depth) const {
    const double step = turn_angle(v0, v1);
    if (std::abs(step) <= 1.2) return step;
    if (depth >= 44) throw TraceFail("relative winding not resolvable");
    const double tm = 0.5 * (t0 + t1);
    const Vec2 vm = rel(tm);
    return sweep_motion(t0, v0, tm, vm, depth + 1) +
           sweep_motion(tm, vm, t1, v1, depth + 1);
  }

  int winding_factor(double ta, double tb, double& residual) {
    const MarkedPoints& mk = table_.marked();
    const CoverPoint a1 = paths_.pos1(ta), a2 = paths_.pos2(ta);
    const CoverPoint b1 = paths_.pos1(tb), b2 = paths_.pos2(tb);
    auto leg_clearance = [&](const CoverPoint& p1, const CoverPoint& p2) {
      GeodesicLeg l1, l2;
      l1.cover_a = base_lift_near(p1, mk.z1);
      l1.cover_b = p1;
      l2.cover_a = base_lift_near(p2, mk.z2);
      l2.cover_b = p2;
      return min_simultaneous_distance(l1, l2);
    };
    if (leg_clearance(a1, a2) < opt_.collision_tol ||
        leg_clearance(b1, b2) < opt_.collision_tol) {
      throw TraceFail("closing legs collide at a split time");
    }

    const Vec2 vbase = mk.z2.chart() - mk.z1.chart();
    double total = 0.0;
    const Vec2 va = chart_of(a2) - chart_of(a1);
    const Vec2 vb = chart_of(b2) - chart_of(b1);
    total += affine_sweep(vbase, va);
    double tprev = ta;
    Vec2 vprev = va;
    for (const auto& g : grid_) {
      if (g.t <= ta || g.t >= tb) continue;
      const Vec2 v = chart_of(g.p2) - chart_of(g.p1);
      total += sweep_motion(tprev, vprev, g.t, v, 0);
      tprev = g.t;
      vprev = v;
    }
    total += sweep_motion(tprev, vprev, tb, vb, 0);
    total += affine_sweep(vb, vbase);

    const double two_pi = 2.0 * M_PI;
    const int n = static_cast<int>(std::lround(total / two_pi));
    residual = std::abs(total - n * two_pi);
    if (residual > opt_.winding_tol) {
      throw TraceFail("non-integral relative winding");
    }
    return n;
  }

  void assemble(CompileResult& res) {
    res.events = events_;
    std::vector<double> splits{0.0};
    const double delta_cap = 5e-5;
    for (size_t j = 0; j < events_.size(); ++j) {
      const double t = events_[j].time;
      const double gap_lo = j == 0 ? t : t - events_[j - 1].time;
      const double gap_hi =
          j + 1 == events_.size() ? 1.0 - t : events_[j + 1].time - t;
      const double d = std::min({delta_cap, gap_lo / 4, gap_hi / 4});
      splits.push_back(t - d);
      splits.push_back(t + d);
    }
    splits.push_back(1.0);

    BraidWord word;
    int qu = 0;
    for (size_t k = 0; k + 1 < splits.size(); k += 2) {
      double residual = 0.0;
      const int n = winding_factor(splits[k], splits[k + 1], residual);
      res.max_residual = std::max(res.max_residual, residual);
      res.segment_twists.push_back(n);
      word = word * BraidWord::A(n);
      qu += 2 * std::abs(n);
      const size_t j = k / 2;
      if (j < events_.size()) {
        const auto& ev = events_[j];
        const EtaKey key{ev.strand, ev.r_q > 0, ev.lasso_out, ev.lasso_in};
        BraidWord eta = table_.eta_word(key);
        if (ev.side < 0) eta = eta.inverse();
        word = word * eta;
        qu += static_cast<int>(eta.size());
      }
    }
    if (!word.is_pure()) {
      throw TraceFail("assembled word is not pure");
    }
    res.word = word;
    res.q_upper = qu;
  }

  PathPair paths_;
  const GeneratorTable& table_;
  TraceOptions opt_;
  std::vector<GridPoint> grid_;
  std::vector<CrossingEvent> events_;
};

PathPair loop_paths(const Isotopy& f, const Config& z,
                    const MarkedPoints& marked) {
  const CoverPoint in1 = z.first.lift;
  const CoverPoint in2 = z.second.lift;
  const CoverPoint out1 = f.eval_cover(1.0, in1);
  const CoverPoint out2 = f.eval_cover(1.0, in2);
  auto make = [&f](const BandPoint& zb, const CoverPoint& zin,
                   const CoverPoint& zout) {
    return [&f, zb, zin, zout](double t) -> CoverPoint {
      if (t <= 1.0 / 3.0) {
        const double s = 3.0 * t;
        const CoverPoint b = base_lift_near(zin, zb);
        return {b.x + (zin.x - b.x) * s, b.y + (zin.y - b.y) * s};
      }
      if (t < 2.0 / 3.0) {
        return f.eval_cover(3.0 * t - 1.0, zin);
      }
      const double s = 3.0 * t - 2.0;
      const CoverPoint b = base_lift_near(zout, zb);
      return {zout.x + (b.x - zout.x) * s, zout.y + (b.y - zout.y) * s};
    };
  };
  return {make(marked.z1, in1, out1), make(marked.z2, in2, out2)};
}

Config perturbed(const Config& z, double magnitude, Rng& rng) {
  auto jiggle = [&](const BandPoint& p) {
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    const double x = std::clamp(p.x() + magnitude * std::cos(ang),
                                -kHalf + 1e-6, kHalf - 1e-6);
    const double y = std::clamp(p.y() + magnitude * std::sin(ang),
                                -kHalf + 1e-6, kHalf - 1e-6);
    return band_point(x, y);
  };
  return {jiggle(z.first), jiggle(z.second)};
}

}  // namespace

Omega4Result check_omega4(const Config& z, const MarkedPoints& marked,
                          double tol) {
  Omega4Result r;
  if (!z.first.in_open_chart(tol) || !z.second.in_open_chart(tol)) return r;
  const GeodesicLeg l1 = geodesic_interior(marked.z1, z.first);
  const GeodesicLeg l2 = geodesic_interior(marked.z2, z.second);
  r.certificate = min_simultaneous_distance(l1, l2);
  r.ok = r.certificate > tol;
  return r;
}

ExtractionReport trace(const Isotopy& f, const Config& z,
                       const GeneratorTable& table, const TraceOptions& opt) {
  ExtractionReport rep;
  Rng rng(opt.seed ^ 0x7aceULL);
  Config zc = z;
  for (int attempt = 0; attempt <= opt.max_perturb_attempts; ++attempt) {
    const Omega4Result in = check_omega4(zc, table.marked(), opt.collision_tol);
    if (!in.ok) {
      rep.failure = "configuration outside Omega^4";
      rep.perturbations = attempt;
      return rep;
    }
    const Config fz{f.time1(zc.first), f.time1(zc.second)};
    const Omega4Result out =
        check_omega4(fz, table.marked(), opt.collision_tol);
    if (!out.ok) {
      rep.failure = "image configuration outside Omega^4";
      rep.perturbations = attempt;
      return rep;
    }
    Compiler compiler(loop_paths(f, zc, table.marked()), table, opt);
    const CompileResult res = compiler.run();
    if (res.ok) {
      rep.ok = true;
      rep.failure.clear();
      rep.word = res.word;
      rep.events = res.events;
      rep.segment_twists = res.segment_twists;
      rep.omega4_in = in.certificate;
      rep.omega4_out = out.certificate;
      rep.max_winding_residual = res.max_residual;
      rep.samples = res.samples;
      rep.q_upper = res.q_upper;
      rep.perturbations = attempt;
      rep.signed_crossings = {0, 0};
      for (const auto& ev : res.events) {
        rep.signed_crossings[ev.strand - 1] += ev.side;
      }
      return rep;
    }
    rep.failure = res.failure;
    rep.perturbations = attempt + 1;
    zc = perturbed(zc, opt.perturb_magnitude * (1 << attempt), rng);
  }
  return rep;
}

std::string ExtractionReport::serialize() const {
  std::ostringstream os;
  os.precision(12);
  os << "word " << word.str() << "\n";
  os << "ok " << (ok ? 1 : 0) << " perturbations " << perturbations << "\n";
  os << "omega4 " << omega4_in << " " << omega4_out << "\n";
  os << "residual " << max_winding_residual << " q_upper " << q_upper << "\n";
  os << "twists";
  for (int n : segment_twists) os << " " << n;
  os << "\nevents\n";
  for (const auto& e : events) {
    os << "  strand " << e.strand << " t " << e.time << " r_q " << e.r_q
       << " side " << e.side << " lasso " << e.lasso_out << e.lasso_in
       << "\n";
  }
  return os.str();
}

SegmentBraidResult segment_braid(
    const std::function<CoverPoint(double)>& path1,
    const std::function<CoverPoint(double)>& path2,
    const MarkedPoints& marked) {
  SegmentBraidResult r;
  const Vec2 base1 = marked.z1.chart();
  const Vec2 base2 = marked.z2.chart();
  const Vec2 e1 = chart_of(path1(1.0));
  const Vec2 e2 = chart_of(path2(1.0));
  const bool swapped = (e1 - base2).norm() + (e2 - base1).norm() <
                       (e1 - base1).norm() + (e2 - base2).norm();
  try {
    const Vec2 vbase = base2 - base1;
    double total = 0.0;
    Vec2 prev = chart_of(path2(0.0)) - chart_of(path1(0.0));
    total += affine_sweep(vbase, prev);
    const int n = 4096;
    for (int i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const Vec2 v = chart_of(path2(t)) - chart_of(path1(t));
      const double step = turn_angle(prev, v);
      if (std::abs(step) > M_PI / 2) {
        r.failure = "relative vector under-resolved";
        return r;
      }
      total += step;
      prev = v;
    }
    total += affine_sweep(prev, swapped ? vbase * -1.0 : vbase);
    const int k = static_cast<int>(std::lround(total / M_PI));
    r.residual = std::abs(total - k * M_PI);
    if (r.residual > 1e-3 * M_PI) {
      r.failure = "non-integral winding";
      return r;
    }
    r.half_turns = k;
    r.ok = true;
  } catch (const std::exception& e) {
    r.failure = e.what();
  }
  return r;
}

ExtractionReport beta_braid(const CoverPolyline& path, const BandPoint& u,
                            int strand, const GeneratorTable& table,
                            const TraceOptions& opt) {
  CoverPolyline gamma = path;
  auto clamp_pt = [](CoverPoint& p) {
    const double frac = p.x - std::floor(p.x + kHalf);
    if (std::abs(frac - kHalf) < 1e-9) {
      p.x -= 1e-9;
    }
  };
  if (!gamma.pts.empty()) {
    clamp_pt(gamma.pts.front());
    clamp_pt(gamma.pts.back());
  }
  const MarkedPoints& mk = table.marked();
  const BandPoint zm = strand == 1 ? mk.z1 : mk.z2;
  const BandPoint ze = strand == 1 ? mk.z2 : mk.z1;
  auto fine = std::make_shared<CoverPolyline>(resample(gamma, 0.01));
  auto cumlen = std::make_shared<std::vector<double>>();
  cumlen->push_back(0.0);
  for (size_t i = 0; i + 1 < fine->pts.size(); ++i) {
    cumlen->push_back(cumlen->back() +
                      (fine->pts[i + 1].vec() - fine->pts[i].vec()).norm());
  }
  auto eval_gamma = [fine, cumlen](double s) -> CoverPoint {
    const double total = std::max(1e-12, cumlen->back());
    const double target = std::clamp(s, 0.0, 1.0) * total;
    const auto it =
        std::upper_bound(cumlen->begin(), cumlen->end(), target);
    size_t i = std::min<size_t>(std::distance(cumlen->begin(), it),
                                cumlen->size() - 1);
    if (i == 0) i = 1;
    const double seg = (*cumlen)[i] - (*cumlen)[i - 1];
    const double r = seg > 0 ? (target - (*cumlen)[i - 1]) / seg : 0.0;
    const Vec2 a = fine->pts[i - 1].vec();
    const Vec2 b = fine->pts[i].vec();
    return {a.x + (b.x - a.x) * r, a.y + (b.y - a.y) * r};
  };

  const CoverPoint g0 = fine->pts.front();
  const CoverPoint g1 = fine->pts.back();
  auto moving = [=](double t) -> CoverPoint {
    if (t <= 1.0 / 3.0) {
      const CoverPoint b = base_lift_near(g0, zm);
      const double s = 3.0 * t;
      return {b.x + (g0.x - b.x) * s, b.y + (g0.y - b.y) * s};
    }
    if (t < 2.0 / 3.0) return eval_gamma(3.0 * t - 1.0);
    const CoverPoint b = base_lift_near(g1, zm);
    const double s = 3.0 * t - 2.0;
    return {g1.x + (b.x - g1.x) * s, g1.y + (b.y - g1.y) * s};
  };
  const CoverPoint uc = u.lift;
  const CoverPoint zec = ze.lift;
  auto parked = [=](double t) -> CoverPoint {
    if (t <= 1.0 / 3.0) {
      const double s = 3.0 * t;
      return {zec.x + (uc.x - zec.x) * s, zec.y + (uc.y - zec.y) * s};
    }
    if (t < 2.0 / 3.0) return uc;
    const double s = 3.0 * t - 2.0;
    return {uc.x + (zec.x - uc.x) * s, uc.y + (zec.y - uc.y) * s};
  };

  PathPair pp;
  if (strand == 1) {
    pp.pos1 = moving;
    pp.pos2 = parked;
  } else {
    pp.pos1 = parked;
    pp.pos2 = moving;
  }
  ExtractionReport rep;
  Compiler compiler(pp, table, opt);
  const CompileResult res = compiler.run();
  rep.ok = res.ok;
  rep.failure = res.failure;
  rep.word = res.word;
  rep.events = res.events;
  rep.segment_twists = res.segment_twists;
  rep.max_winding_residual = res.max_residual;
  rep.samples = res.samples;
  rep.q_upper = res.q_upper;
  for (const auto& ev : res.events) {
    rep.signed_crossings[ev.strand - 1] += ev.side;
  }
  return rep;
}

std::optional<bool> conjugate_in_p2(const GeneratorTable& t,
                                    const BraidWord& w1, const BraidWord& w2,
                                    int radius, bool pure_only) {
  const FreeEndo e1 = t.act(w1);
  const FreeEndo e2 = t.act(w2);
  if (e1 == e2) return true;
  std::vector<std::pair<BraidWord, FreeEndo>> frontier{
      {BraidWord{}, FreeEndo::identity()}};
  std::vector<std::pair<BraidWord, FreeEndo>> all = frontier;
  std::unordered_map<std::string, bool> visited;
  visited[FreeEndo::identity().key()] = true;
  const std::array<std::pair<BraidGen, int>, 6> letters = {
      std::make_pair(BraidGen::B, 1),  std::make_pair(BraidGen::B, -1),
      std::make_pair(BraidGen::R2, 1), std::make_pair(BraidGen::R2, -1),
      std::make_pair(BraidGen::R3, 1), std::make_pair(BraidGen::R3, -1)};
  for (int depth = 0; depth < radius; ++depth) {
    std::vector<std::pair<BraidWord, FreeEndo>> next;
    for (const auto& [word, endo] : frontier) {
      for (const auto& [g, s] : letters) {
        if (!word.letters.empty() && word.letters.back().gen == g &&
            word.letters.back().sign == -s) {
          continue;
        }
        BraidWord cw = word;
        cw.letters.push_back({g, static_cast<int8_t>(s)});
        FreeEndo ce = compose(endo, t.act_letter(g, s));
        if (visited.count(ce.key())) continue;
        visited[ce.key()] = true;
        next.emplace_back(cw, ce);
        all.emplace_back(cw, ce);
      }
    }
    frontier.swap(next);
  }
  for (const auto& [c, ec] : all) {
    if (pure_only && !c.is_pure()) continue;
    const FreeEndo einv = t.act(c.inverse());
    if (compose(compose(einv, e1), ec) == e2) return true;
  }
  return std::nullopt;
}

std::string trajectory_csv(const Isotopy& f, const Config& z, int samples) {
  std::ostringstream os;
  os.precision(12);
  os << "t,strand,x,y\n";
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const BandPoint p1 = f.eval(t, z.first);
    const BandPoint p2 = f.eval(t, z.second);
    os << t << ",1," << p1.x() << "," << p1.y() << "\n";
    os << t << ",2," << p2.x() << "," << p2.y() << "\n";
  }
  return os.str();
}

}  // namespace mobius
