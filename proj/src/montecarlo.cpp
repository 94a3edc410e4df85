#include "mobius/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mobius/isotopy.hpp"
#include "mobius/rng.hpp"

namespace mobius {

namespace {

using nlohmann::json;

// order-independent accumulation: values land in an index-addressed buffer,
// the merge is a single sequential pass
McEstimate reduce_samples(const std::vector<double>& values, uint64_t seed) {
  McEstimate e;
  e.seed = seed;
  e.n_samples = static_cast<int>(values.size());
  double sum = 0.0;
  int n = 0;
  for (const double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  e.n_accepted = n;
  e.n_rejected = e.n_samples - n;
  if (n > 0) {
    e.mean = sum / n;
    double ss = 0.0;
    for (const double v : values) {
      if (std::isnan(v)) continue;
      ss += (v - e.mean) * (v - e.mean);
    }
    e.stderr_ = n > 1 ? std::sqrt(ss / (n - 1)) / std::sqrt(n) : 0.0;
  }
  e.flagged = e.n_rejected > 0.01 * e.n_samples;
  return e;
}

void run_workers(int n, int workers, const std::function<void(int)>& body) {
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

BandPoint sample_point(Rng& rng) {
  return band_point(rng.uniform(-kHalf, kHalf), rng.uniform(-kHalf, kHalf));
}

}  // namespace

McEstimate mc_estimate(const GeneratorTable& table, const Quasimorphism& phi,
                       const Isotopy& f, int n, uint64_t seed,
                       const McOptions& opt, std::vector<double>* samples_out) {
  std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
  run_workers(n, opt.workers, [&](int i) {
    Rng rng = Rng::fork(seed, static_cast<uint64_t>(i));
    const Config z{sample_point(rng), sample_point(rng)};
    TraceOptions topt;
    topt.seed = seed ^ (0x9e37ULL * i);
    const ExtractionReport rep = trace(f, z, table, topt);
    if (rep.ok) values[i] = phi(rep.word);
  });
  if (samples_out) *samples_out = values;
  return reduce_samples(values, seed);
}

McEstimate mc_estimate_restricted(const GeneratorTable& table,
                                  const Quasimorphism& phi, const Isotopy& f,
                                  const std::vector<Rect>& region, int n,
                                  uint64_t seed, const McOptions& opt) {
  double total_area = 0.0;
  for (const auto& r : region) total_area += r.area();
  std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
  auto sample_region = [&](Rng& rng) {
    double pick = rng.uniform(0.0, total_area);
    for (const auto& r : region) {
      if (pick <= r.area() || &r == &region.back()) {
        return band_point(rng.uniform(r.x0, r.x1), rng.uniform(r.y0, r.y1));
      }
      pick -= r.area();
    }
    return band_point(0, 0);
  };
  run_workers(n, opt.workers, [&](int i) {
    Rng rng = Rng::fork(seed ^ 0xbeefULL, static_cast<uint64_t>(i));
    const Config z{sample_region(rng), sample_region(rng)};
    TraceOptions topt;
    topt.seed = seed ^ (0x51edULL * i);
    const ExtractionReport rep = trace(f, z, table, topt);
    if (rep.ok) values[i] = phi(rep.word);
  });
  return reduce_samples(values, seed);
}

HomogenizedEstimate homogenized_estimate(const GeneratorTable& table,
                                         const Quasimorphism& phi,
                                         const Isotopy& f, int p_max, int n,
                                         uint64_t seed, const McOptions& opt) {
  HomogenizedEstimate out;
  for (int p = 1; p <= p_max; ++p) {
    const Isotopy fp = power(f, p);
    const McEstimate raw =
        mc_estimate(table, phi, fp, n, seed + 7919ULL * p, opt);
    HomogenizedStepEstimate step;
    step.p = p;
    step.raw = raw;
    step.value = raw.mean / p;
    step.stderr_ = raw.stderr_ / p;
    out.steps.push_back(step);
  }
  if (!out.steps.empty()) {
    out.extrapolated = out.steps.back().value;
    for (const auto& s : out.steps) {
      out.max_slope_dev =
          std::max(out.max_slope_dev, std::abs(s.value - out.steps[0].value));
    }
  }
  return out;
}

double band_flux_oracle(double a, double d) {
  const BumpProfile bump(a / 2.0, d);
  // Simpson on [-a/2, a/2]
  const int n = 4096;
  const double h = a / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = -a / 2.0 + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * bump.value(y);
  }
  return 2.0 * sum * h / 3.0;
}

std::string InjectivityReport::serialize() const {
  json j;
  j["valid"] = valid;
  j["notes"] = notes;
  j["params"] = {{"a1", a1}, {"a2", a2},       {"eps", eps},
                 {"b1", b1}, {"b2", b2},       {"phi", phi_name}};
  j["phi_ij"] = {{phi_ij[0][0], phi_ij[0][1]}, {phi_ij[1][0], phi_ij[1][1]}};
  j["core_F"] = core_f;
  j["K"] = k_bound;
  j["M"] = m_bound;
  j["defect"] = defect;
  j["remainder_bound"] = remainder_bound;
  j["restricted"] = {{"integral", restricted_integral},
                     {"stderr", restricted_stderr},
                     {"accepted", restricted.n_accepted}};
  j["full"] = {{"mean", full.mean},
               {"stderr", full.stderr_},
               {"accepted", full.n_accepted},
               {"flagged", full.flagged}};
  j["verdict_nonzero"] = verdict_nonzero;
  j["paper_criterion"] = paper_criterion;
  return j.dump(2);
}

InjectivityReport injectivity_experiment(const GeneratorTable& table,
                                         const InjectivityConfig& cfg) {
  InjectivityReport rep;
  rep.a1 = cfg.a1;
  rep.a2 = cfg.a2;
  rep.eps = cfg.eps;
  rep.b1 = cfg.b1;
  rep.b2 = cfg.b2;
  const Quasimorphism phi(table, cfg.phi);
  rep.phi_name = cfg.phi.name();

  const double eps_m = cfg.eps / std::pow(2.0, cfg.level);
  const RegionDecomposition frame =
      region_decomposition(cfg.a1, cfg.a2, eps_m);
  const CurveSpec curve = catalog_curve(cfg.curve, frame);
  Isotopy g = supported_twist(curve);
  if (cfg.twist_exponent != 1) g = power(g, cfg.twist_exponent);

  // disjoint topological disks U_i around the marked points inside V_i
  auto fit_u = [&](const Rect& v, const BandPoint& zb, double area) {
    const double margin = 0.005;
    const double wmax = v.width() - 2 * margin;
    const double hmax = v.height() - 2 * margin;
    double w = wmax;
    double h = area / w;
    if (h > hmax) {
      h = hmax;
      w = area / h;
    }
    if (w > wmax || h > hmax) {
      throw ConfigError("injectivity: U_i does not fit inside V_i");
    }
    return Rect{zb.x() - w / 2, zb.y() - h / 2, zb.x() + w / 2,
                zb.y() + h / 2};
  };
  const Rect u1 = fit_u(frame.v1, table.marked().z1, cfg.b1);
  const Rect u2 = fit_u(frame.v2, table.marked().z2, cfg.b2);

  // deterministic probes z in V_i x V_j
  const BandPoint p1 = band_point(table.marked().z1.x(), 0.07);
  const BandPoint p1b = band_point(table.marked().z1.x(), -0.11);
  const BandPoint p2 = band_point(table.marked().z2.x(), 0.07);
  const BandPoint p2b = band_point(table.marked().z2.x(), -0.11);
  const Config probes[2][2] = {{{p1, p1b}, {p1, p2}}, {{p2, p1}, {p2, p2b}}};
  bool probes_ok = true;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      TraceOptions topt;
      topt.seed = cfg.seed ^ (i * 2 + j);
      const ExtractionReport r = trace(g, probes[i][j], table, topt);
      if (!r.ok) {
        probes_ok = false;
        rep.notes += "probe(" + std::to_string(i + 1) + "," +
                     std::to_string(j + 1) + ") failed: " + r.failure + "; ";
        continue;
      }
      rep.phi_ij[i][j] = phi(r.word);
    }
  }
  rep.core_f = rep.phi_ij[0][0] * cfg.b1 * cfg.b1 +
               rep.phi_ij[0][1] * cfg.b1 * cfg.b2 +
               rep.phi_ij[1][0] * cfg.b2 * cfg.b1 +
               rep.phi_ij[1][1] * cfg.b2 * cfg.b2;

  // factorization bound over sampled traces
  int kmax = 0;
  {
    for (int s = 0; s < cfg.k_samples; ++s) {
      Rng fork = Rng::fork(cfg.seed ^ 0xCAFEULL, s);
      const Config z{sample_point(fork), sample_point(fork)};
      TraceOptions topt;
      topt.seed = cfg.seed + s;
      const ExtractionReport r = trace(g, z, table, topt);
      if (r.ok) kmax = std::max(kmax, r.q_upper);
    }
  }
  rep.k_bound = kmax;
  rep.m_bound = phi.generator_bound();
  rep.defect = phi.defect();
  const double vol = 1.0 - (cfg.b1 + cfg.b2) * (cfg.b1 + cfg.b2);
  rep.remainder_bound = rep.k_bound * (rep.m_bound + rep.defect) * vol;

  const McOptions mopt{cfg.workers, false};
  rep.restricted = mc_estimate_restricted(table, phi, g, {u1, u2}, cfg.n,
                                          cfg.seed, mopt);
  const double mass = (cfg.b1 + cfg.b2) * (cfg.b1 + cfg.b2);
  rep.restricted_integral = rep.restricted.mean * mass;
  rep.restricted_stderr = rep.restricted.stderr_ * mass;
  rep.full = mc_estimate(table, phi, g, cfg.n, cfg.seed ^ 0xFFULL, mopt);

  rep.verdict_nonzero = std::abs(rep.full.mean) > 3.0 * rep.full.stderr_;
  rep.paper_criterion =
      std::abs(rep.core_f) > rep.remainder_bound + 3.0 * rep.full.stderr_;
  rep.valid = probes_ok && !rep.full.flagged && !rep.restricted.flagged;
  return rep;
}

std::vector<NormSurveyLevel> norm_survey(const GeneratorTable& table,
                                         CurveId id, int n_levels, int samples,
                                         uint64_t seed, double a1, double a2,
                                         double eps, int workers) {
  std::vector<NormSurveyLevel> out;
  const ContractionMap contraction(a1, a2, eps);
  CoverPolyline transported;  // L^i of the level-0 polyline
  {
    const RegionDecomposition frame0 = region_decomposition(a1, a2, eps);
    transported = catalog_curve(id, frame0).polyline;
  }
  for (int level = 1; level <= n_levels; ++level) {
    transported = contraction.apply(transported);
    NormSurveyLevel row;
    row.level = level;
    row.eps = eps / std::pow(2.0, level);
    const RegionDecomposition frame =
        region_decomposition(a1, a2, row.eps);
    const CurveSpec curve = catalog_curve(id, frame);
    row.branch_max = curve.max_branch;
    row.cut_crossings = curve.cut_crossings;

    // transported curve must agree with the level-rebuilt one
    row.contraction_consistent = true;
    const CoverPolyline fine = resample(transported, 0.05);
    for (const auto& p : fine.pts) {
      double best = 1e9;
      const BandPoint bp = project(p);
      for (const auto& q : resample(curve.polyline, 0.02).pts) {
        best = std::min(best, distance(bp, project(q)));
      }
      if (best > 2e-3) {
        row.contraction_consistent = false;
        break;
      }
    }

    const Isotopy twist = supported_twist(curve);
    // base words: the closed-up curve seen from inside and outside
    {
      const BandPoint w_in = band_point(0.0, 0.0);
      const double outer_y =
          curve.inner_kind == SideKind::MobiusBand
              ? std::min(kHalf - 1e-3, curve.level + row.eps / 4.0)
              : 0.45;
      const BandPoint w_out = band_point(-0.45, outer_y);
      for (int strand : {1, 2}) {
        for (const BandPoint& w : {w_in, w_out}) {
          TraceOptions topt;
          topt.seed = seed ^ (strand * 31);
          const ExtractionReport r =
              beta_braid(curve.polyline, w, strand, table, topt);
          if (r.ok) {
            row.base_word_cost = std::max(row.base_word_cost, r.q_upper);
          }
        }
      }
    }

    std::vector<int> q_upper(samples, -1);
    run_workers(samples, workers, [&](int i) {
      Rng rng = Rng::fork(seed + level, static_cast<uint64_t>(i));
      const Config z{sample_point(rng), sample_point(rng)};
      TraceOptions topt;
      topt.seed = seed ^ (level * 1000 + i);
      const ExtractionReport r = trace(twist, z, table, topt);
      if (r.ok) q_upper[i] = r.q_upper;
    });
    for (const int q : q_upper) {
      if (q < 0) {
        ++row.failures;
      } else {
        row.max_q_upper = std::max(row.max_q_upper, q);
      }
    }
    row.formula_bound =
        2.0 * (2.0 * row.branch_max * row.cut_crossings + 2.0 * row.branch_max +
               9.0 * row.cut_crossings + 6.0 + row.base_word_cost);
    out.push_back(row);
  }
  return out;
}

}  // namespace mobius
