// Batch driver for the band-braid laboratory: tracing, Monte-Carlo
// estimates, the injectivity experiment, the norm survey, table derivation
// and the oracle suites.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mobius/blowup.hpp"
#include "mobius/montecarlo.hpp"
#include "mobius/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mobius;

namespace {

constexpr const char* kVersion = "mobius-lab 0.1.0";

// exit codes: 0 ok, 2 configuration error, 3 derivation failure,
// 4 flagged estimate
enum ExitCode { kOk = 0, kConfigError = 2, kDerivationError = 3, kFlagged = 4 };

struct CommonArgs {
  std::string config_path;
  uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = ".";
  bool print_defaults = false;
};

json default_config() {
  json j;
  j["geometry"] = {{"a1", 0.5}, {"a2", 0.5}, {"eps", 1.0 / 16.0}};
  j["isotopy"] = {{"curve", "c_boundary"},
                  {"exponent", 1},
                  {"kind", "twist"},  // twist | band_slide | disk_slide
                  {"a", 0.8},
                  {"d", 0.05},
                  {"center", {0.0, 0.0}}};
  j["phi"] = {{"kind", "h-sum"}, {"target", "A"}};
  j["sampling"] = {{"n", 10000}, {"p_max", 4}, {"seed", 1}, {"workers", 1}};
  j["injectivity"] = {{"b1", 0.3}, {"b2", 0.3}, {"level", 1},
                      {"k_samples", 200}};
  j["survey"] = {{"levels", 3}, {"samples", 500}};
  j["trace"] = {{"z", {-0.1, 0.2, 0.3, -0.25}}};
  j["out"] = {{"csv", true}};
  return j;
}

json load_config(const CommonArgs& args) {
  json cfg = default_config();
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("cannot open config " + args.config_path);
    json user;
    in >> user;
    cfg.merge_patch(user);
  }
  return cfg;
}

QuasimorphismSpec phi_from_config(const json& cfg) {
  const std::string kind = cfg.at("phi").at("kind");
  QuasimorphismSpec spec;
  if (kind == "h1") {
    spec.kind = HomKind::H1;
  } else if (kind == "h2") {
    spec.kind = HomKind::H2;
  } else if (kind == "h-sum") {
    spec.kind = HomKind::HSum;
  } else if (kind == "phi-A") {
    spec.kind = HomKind::PhiA;
  } else if (kind == "counting") {
    CountingSpec c;
    c.target = cfg.at("phi").value("target", "A");
    spec.kind = c;
  } else {
    throw ConfigError("unknown phi kind: " + kind);
  }
  return spec;
}

Isotopy isotopy_from_config(const json& cfg, const json& geometry) {
  const json& iso = cfg.at("isotopy");
  const std::string kind = iso.value("kind", "twist");
  if (kind == "band_slide") {
    return band_slide(iso.value("a", 0.8), iso.value("d", 0.05));
  }
  if (kind == "disk_slide") {
    const auto c = iso.value("center", std::vector<double>{0.0, 0.0});
    return disk_slide(band_point(c[0], c[1]), iso.value("a", 0.3),
                      iso.value("d", 0.02));
  }
  if (kind == "identity") {
    return identity_isotopy();
  }
  const RegionDecomposition frame = region_decomposition(
      geometry.at("a1"), geometry.at("a2"), geometry.at("eps"));
  const CurveSpec curve =
      catalog_curve(curve_id_from_string(iso.at("curve")), frame);
  Isotopy twist = supported_twist(curve);
  const int e = iso.value("exponent", 1);
  return e == 1 ? twist : power(twist, e);
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  out << content;
}

json run_summary_header(const json& cfg, const CommonArgs& args,
                        const std::string& command) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = args.seed;
  j["workers"] = args.workers;
  j["config"] = cfg;
  return j;
}

json mc_json(const McEstimate& e) {
  return json{{"mean", e.mean},         {"stderr", e.stderr_},
              {"n_samples", e.n_samples}, {"n_accepted", e.n_accepted},
              {"n_rejected", e.n_rejected}, {"flagged", e.flagged},
              {"seed", e.seed}};
}

int cmd_validate(const CommonArgs& args, const json& cfg) {
  json summary = run_summary_header(cfg, args, "validate");
  const GeneratorTable& table = shared_table();
  table.validate();
  summary["derivation_log"] = table.derivation_log();
  summary["splitting_matrix"] = table.splitting_matrix();
  summary["a_exponent_preserved"] = table.a_exponent_preserved();

  // density suite
  json density;
  const RegionDecomposition frame = region_decomposition(
      cfg.at("geometry").at("a1"), cfg.at("geometry").at("a2"),
      cfg.at("geometry").at("eps"));
  for (const CurveId id :
       {CurveId::Boundary, CurveId::CoreNbhd, CurveId::TwoPunctures}) {
    const Isotopy iso = supported_twist(catalog_curve(id, frame));
    const DensityReport rep = density_check(iso, 2000, args.seed);
    density[to_string(id)] = rep.max_abs_det_minus_one;
    if (rep.max_abs_det_minus_one > 1e-6) {
      std::cerr << "density failure on " << to_string(id) << "\n";
      return kDerivationError;
    }
  }
  summary["density_max_dev"] = density;

  // cocycle spot-check
  const Isotopy g = supported_twist(catalog_curve(CurveId::TwoPunctures, frame));
  const Isotopy h = band_slide(0.8, 0.05);
  int checked = 0;
  Rng rng(args.seed);
  for (int i = 0; i < 20; ++i) {
    const Config z{band_point(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45)),
                   band_point(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))};
    const auto lhs = trace(compose({h, g}), z, table);
    const auto rh = trace(h, z, table);
    const Config hz{h.time1(z.first), h.time1(z.second)};
    const auto rg = trace(g, hz, table);
    if (!lhs.ok || !rh.ok || !rg.ok) continue;
    if (!table.equal(lhs.word, rh.word * rg.word)) {
      std::cerr << "cocycle identity failed\n";
      return kDerivationError;
    }
    ++checked;
  }
  summary["cocycle_checked"] = checked;
  write_file(fs::path(args.out_dir) / "validate.json", summary.dump(2));
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

int cmd_derive_table(const CommonArgs& args, const json& cfg) {
  const GeneratorTable table = derive_generator_table();
  json summary = run_summary_header(cfg, args, "derive-table");
  summary["log"] = table.derivation_log();
  write_file(fs::path(args.out_dir) / "generator_table.json",
             table.serialize());
  write_file(fs::path(args.out_dir) / "derive_table.json", summary.dump(2));
  std::cout << "table written to " << args.out_dir << "/generator_table.json\n";
  return kOk;
}

int cmd_trace(const CommonArgs& args, const json& cfg) {
  const GeneratorTable& table = shared_table();
  const Isotopy f = isotopy_from_config(cfg, cfg.at("geometry"));
  const auto zc = cfg.at("trace").at("z").get<std::vector<double>>();
  const Config z{band_point(zc[0], zc[1]), band_point(zc[2], zc[3])};
  TraceOptions topt;
  topt.seed = args.seed;
  const ExtractionReport rep = trace(f, z, table, topt);
  json summary = run_summary_header(cfg, args, "trace");
  summary["ok"] = rep.ok;
  summary["word"] = rep.word.str();
  summary["failure"] = rep.failure;
  summary["q_upper"] = rep.q_upper;
  summary["events"] = json::array();
  for (const auto& e : rep.events) {
    summary["events"].push_back({{"strand", e.strand},
                                 {"time", e.time},
                                 {"r_q", e.r_q},
                                 {"side", e.side},
                                 {"lasso_out", e.lasso_out},
                                 {"lasso_in", e.lasso_in}});
  }
  summary["report"] = rep.serialize();
  write_file(fs::path(args.out_dir) / "trace.json", summary.dump(2));
  if (cfg.at("out").value("csv", true)) {
    write_file(fs::path(args.out_dir) / "trajectory.csv",
               trajectory_csv(f, z, 512));
  }
  std::cout << summary.dump(2) << "\n";
  return rep.ok ? kOk : kFlagged;
}

int cmd_estimate(const CommonArgs& args, const json& cfg) {
  const GeneratorTable& table = shared_table();
  const Isotopy f = isotopy_from_config(cfg, cfg.at("geometry"));
  const Quasimorphism phi(table, phi_from_config(cfg));
  const int n = cfg.at("sampling").value("n", 10000);
  McOptions mopt{args.workers, true};
  std::vector<double> samples;
  const McEstimate e =
      mc_estimate(table, phi, f, n, args.seed, mopt, &samples);
  json summary = run_summary_header(cfg, args, "estimate");
  summary["estimate"] = mc_json(e);
  write_file(fs::path(args.out_dir) / "estimate.json", summary.dump(2));
  if (cfg.at("out").value("csv", true)) {
    std::ostringstream os;
    os << "index,value\n";
    for (size_t i = 0; i < samples.size(); ++i) {
      os << i << "," << samples[i] << "\n";
    }
    write_file(fs::path(args.out_dir) / "estimate_samples.csv", os.str());
  }
  std::cout << summary.dump(2) << "\n";
  return e.flagged ? kFlagged : kOk;
}

int cmd_homogenize(const CommonArgs& args, const json& cfg) {
  const GeneratorTable& table = shared_table();
  const Isotopy f = isotopy_from_config(cfg, cfg.at("geometry"));
  const Quasimorphism phi(table, phi_from_config(cfg));
  const int n = cfg.at("sampling").value("n", 2000);
  const int p_max = cfg.at("sampling").value("p_max", 4);
  const HomogenizedEstimate h = homogenized_estimate(
      table, phi, f, p_max, n, args.seed, McOptions{args.workers, false});
  json summary = run_summary_header(cfg, args, "homogenize");
  std::ostringstream csv;
  csv << "p,value,stderr,raw_mean,raw_accepted\n";
  for (const auto& s : h.steps) {
    summary["steps"].push_back({{"p", s.p},
                                {"value", s.value},
                                {"stderr", s.stderr_},
                                {"raw", mc_json(s.raw)}});
    csv << s.p << "," << s.value << "," << s.stderr_ << "," << s.raw.mean
        << "," << s.raw.n_accepted << "\n";
  }
  summary["extrapolated"] = h.extrapolated;
  summary["max_slope_dev"] = h.max_slope_dev;
  write_file(fs::path(args.out_dir) / "homogenize.json", summary.dump(2));
  write_file(fs::path(args.out_dir) / "homogenize.csv", csv.str());
  std::cout << summary.dump(2) << "\n";
  bool flagged = false;
  for (const auto& s : h.steps) flagged = flagged || s.raw.flagged;
  return flagged ? kFlagged : kOk;
}

int cmd_injectivity(const CommonArgs& args, const json& cfg) {
  const GeneratorTable& table = shared_table();
  InjectivityConfig icfg;
  icfg.a1 = cfg.at("geometry").at("a1");
  icfg.a2 = cfg.at("geometry").at("a2");
  icfg.eps = cfg.at("geometry").at("eps");
  icfg.b1 = cfg.at("injectivity").value("b1", 0.3);
  icfg.b2 = cfg.at("injectivity").value("b2", 0.3);
  icfg.level = cfg.at("injectivity").value("level", 1);
  icfg.k_samples = cfg.at("injectivity").value("k_samples", 200);
  icfg.curve = curve_id_from_string(cfg.at("isotopy").value("curve",
                                                            "c_boundary"));
  icfg.phi = phi_from_config(cfg);
  icfg.n = cfg.at("sampling").value("n", 10000);
  icfg.seed = args.seed;
  icfg.workers = args.workers;
  const InjectivityReport rep = injectivity_experiment(table, icfg);
  json summary = run_summary_header(cfg, args, "injectivity");
  summary["report"] = json::parse(rep.serialize());
  write_file(fs::path(args.out_dir) / "injectivity.json", summary.dump(2));
  std::cout << summary.dump(2) << "\n";
  return rep.valid ? kOk : kFlagged;
}

int cmd_norm_survey(const CommonArgs& args, const json& cfg) {
  const GeneratorTable& table = shared_table();
  const int levels = cfg.at("survey").value("levels", 3);
  const int samples = cfg.at("survey").value("samples", 500);
  const auto rows = norm_survey(
      table, curve_id_from_string(cfg.at("isotopy").value("curve",
                                                          "c_boundary")),
      levels, samples, args.seed, cfg.at("geometry").at("a1"),
      cfg.at("geometry").at("a2"), cfg.at("geometry").at("eps"),
      args.workers);
  json summary = run_summary_header(cfg, args, "norm-survey");
  std::ostringstream csv;
  csv << "level,eps,n_branch,N_cut,base_cost,max_q_upper,formula,failures\n";
  for (const auto& r : rows) {
    summary["levels"].push_back({{"level", r.level},
                                 {"eps", r.eps},
                                 {"branch_max", r.branch_max},
                                 {"cut_crossings", r.cut_crossings},
                                 {"base_word_cost", r.base_word_cost},
                                 {"max_q_upper", r.max_q_upper},
                                 {"formula_bound", r.formula_bound},
                                 {"failures", r.failures},
                                 {"contraction_consistent",
                                  r.contraction_consistent}});
    csv << r.level << "," << r.eps << "," << r.branch_max << ","
        << r.cut_crossings << "," << r.base_word_cost << "," << r.max_q_upper
        << "," << r.formula_bound << "," << r.failures << "\n";
  }
  write_file(fs::path(args.out_dir) / "norm_survey.json", summary.dump(2));
  write_file(fs::path(args.out_dir) / "norm_survey.csv", csv.str());
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{kVersion};
  CommonArgs args;
  if (const char* env = std::getenv("MOBIUS_WORKERS")) {
    args.workers = std::max(1, std::atoi(env));
  }
  app.add_option("--config", args.config_path, "JSON experiment config");
  app.add_option("--seed", args.seed, "master seed");
  app.add_option("--workers", args.workers, "worker threads");
  app.add_option("--out", args.out_dir, "output directory");
  app.add_flag("--print-defaults", args.print_defaults,
               "print the default config and exit");

  std::string command;
  app.add_option("command", command,
                 "trace|estimate|homogenize|injectivity|norm-survey|"
                 "derive-table|validate");

  CLI11_PARSE(app, argc, argv);

  if (args.print_defaults) {
    std::cout << default_config().dump(2) << "\n";
    return kOk;
  }
  try {
    const json cfg = load_config(args);
    if (command == "validate") return cmd_validate(args, cfg);
    if (command == "derive-table") return cmd_derive_table(args, cfg);
    if (command == "trace") return cmd_trace(args, cfg);
    if (command == "estimate") return cmd_estimate(args, cfg);
    if (command == "homogenize") return cmd_homogenize(args, cfg);
    if (command == "injectivity") return cmd_injectivity(args, cfg);
    if (command == "norm-survey") return cmd_norm_survey(args, cfg);
    std::cerr << "unknown command: " << command << "\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DerivationError& e) {
    std::cerr << "derivation error: " << e.what() << "\n";
    return kDerivationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
