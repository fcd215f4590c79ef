#include "mindev/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "mindev/emit.hpp"
#include "mindev/gaussian.hpp"
#include "mindev/mc.hpp"
#include "mindev/model_io.hpp"
#include "mindev/strategies.hpp"

namespace fs = std::filesystem;

namespace mindev {
namespace {

// Largest |Z| a CLI run hands to the exact solver; beyond it the learn grid
// is coarsened and the maximum-likelihood curve is estimated by Monte Carlo.
constexpr long long kSolveCap = 200'000;
constexpr long long kMcSamples = 100'000;

struct CommonArgs {
  int iters = 5000;
  double tol = 1e-3;
  std::string out = ".";
};

struct SolveArgs : CommonArgs {
  std::string spec_path;
  std::string preset = "minimax";
  std::string alpha_path, beta_path;
};

struct ExampleArgs : CommonArgs {
  int which = 1;
  int n = 1;
  int theta_cells = 41;
  std::string theta_range, signal_range;
  int signal_cells = 0;  // 0 = per-axis defaults
  int learn_cells = kLearnGridDefault.cells;
  uint64_t seed = 1;
  std::string mode = "auto";
};

struct CheckArgs : CommonArgs {
  std::string spec_path;
  std::string strategy_path;
};

std::pair<double, double> parse_range(const std::string& text, const char* flag) {
  size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error(std::string(flag) + " expects LO:HI, got \"" + text + "\"");
  size_t pos1 = 0, pos2 = 0;
  double lo, hi;
  try {
    lo = std::stod(text.substr(0, colon), &pos1);
    hi = std::stod(text.substr(colon + 1), &pos2);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string(flag) + " expects LO:HI, got \"" + text + "\"");
  }
  if (pos1 != colon || pos2 != text.size() - colon - 1 || !std::isfinite(lo) ||
      !std::isfinite(hi) || !(lo < hi))
    throw std::runtime_error(std::string(flag) + " expects LO:HI with LO < HI, got \"" + text + "\"");
  return {lo, hi};
}

std::vector<double> load_weights_file(const std::string& path, int want, const char* what) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string(what) + " file " + path + ": " + e.what());
  }
  if (!doc.is_array() || (int)doc.size() != want)
    throw std::runtime_error(std::string(what) + " file " + path + " must be a JSON array of " +
                             std::to_string(want) + " numbers");
  std::vector<double> out((size_t)want);
  for (int i = 0; i < want; ++i) {
    if (!doc[(size_t)i].is_number() || !std::isfinite(doc[(size_t)i].get<double>()))
      throw std::runtime_error(std::string(what) + " file " + path + ": entry " +
                               std::to_string(i) + " must be a finite number");
    out[(size_t)i] = doc[(size_t)i].get<double>();
  }
  return out;
}

nlohmann::ordered_json report_summary(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["phi"] = r.phi;
  j["upper"] = r.upper;
  j["gap"] = r.gap;
  j["iters"] = r.iters;
  j["converged"] = r.converged;
  return j;
}

void print_report(const char* label, const SolveReport& r) {
  std::cout << label << ": phi " << format_number(r.phi) << ", upper " << format_number(r.upper)
            << ", gap " << format_number(r.gap) << ", iters " << r.iters
            << (r.converged ? ", converged" : ", gap not reached") << "\n";
}

int do_solve(const SolveArgs& a, bool custom_scaling) {
  ModelSpec spec = load_model_spec(read_text_file(a.spec_path));
  RiskKernel kern(spec.obj, spec.learn, spec.loss);
  int nm = spec.obj.nm();

  ScalingProfile prof;
  std::string objective;
  if (custom_scaling) {
    prof.alpha = a.alpha_path.empty() ? std::vector<double>((size_t)nm, 0.0)
                                      : load_weights_file(a.alpha_path, nm, "--alpha");
    prof.beta = a.beta_path.empty() ? std::vector<double>((size_t)nm, 1.0)
                                    : load_weights_file(a.beta_path, nm, "--beta");
    objective = "custom";
  } else if (a.preset == "minimax") {
    prof = minimax_profile(nm);
    objective = a.preset;
  } else if (a.preset == "mindev") {
    prof = mindev_profile(kern);
    objective = a.preset;
  } else {
    prof = mindev_relative_profile(kern);
    objective = a.preset;
  }

  SolveConfig cfg;
  cfg.max_iters = a.iters;
  cfg.tol = a.tol;
  StrategySolve sol = scaled_minimax_strategy(kern, prof, cfg);

  fs::create_directories(a.out);
  Strategy dense = densify(kern, sol.q);
  write_text_file(a.out + "/strategy.json", emit_strategy_doc(spec.obj, spec.learn, dense));
  write_text_file(a.out + "/report.json", emit_solve_report_json(sol.report));
  sol.curve.tag = objective;
  write_text_file(a.out + "/risk_curve.csv", emit_risk_curve_csv(spec.obj, sol.curve));
  print_report(objective.c_str(), sol.report);
  return sol.report.converged ? 0 : 2;
}

int do_example(const ExampleArgs& a) {
  SolveConfig cfg;
  cfg.max_iters = a.iters;
  cfg.tol = a.tol;

  ExampleInstance inst;           // instance the solver runs on
  ExampleInstance mc_inst;        // requested-grid object/base for the MC path
  bool ml_mc = false;             // estimate the ML curve by Monte Carlo
  int solve_cells = a.learn_cells;
  long long requested_size = 0;

  if (a.which == 1) {
    double tlo = -4, thi = 4;
    if (!a.theta_range.empty()) std::tie(tlo, thi) = parse_range(a.theta_range, "--theta-range");
    GridSpec x1 = kExample1X1Default, x2 = kExample1X2Default;
    if (!a.signal_range.empty()) {
      auto [slo, shi] = parse_range(a.signal_range, "--signal-range");
      x1.lo = x2.lo = slo;
      x1.hi = x2.hi = shi;
    }
    if (a.signal_cells > 0) x1.cells = x2.cells = a.signal_cells;
    GridSpec lg{kLearnGridDefault.lo, kLearnGridDefault.hi, a.learn_cells};
    inst = build_example1(a.n, a.theta_cells, tlo, thi, x1, x2, lg);
    ml_mc = a.mode == "mc" && a.n > 0;
    if (ml_mc) mc_inst = inst;
  } else {
    if (!a.theta_range.empty())
      throw std::runtime_error("--theta-range is fixed to 0:1 for example 2");
    GridSpec sg = kExample2SignalDefault;
    if (!a.signal_range.empty()) {
      auto [slo, shi] = parse_range(a.signal_range, "--signal-range");
      sg.lo = slo;
      sg.hi = shi;
    }
    if (a.signal_cells > 0) sg.cells = a.signal_cells;

    requested_size = iid_product_size(a.learn_cells, a.n, IidMode::multiset);
    bool fits = requested_size <= kSolveCap;
    if (!fits && a.mode == "exact")
      throw std::runtime_error("learning data at " + std::to_string(a.learn_cells) +
                               " cells has " + std::to_string(requested_size) +
                               " outcomes (solver cap " + std::to_string(kSolveCap) +
                               "); rerun with --mode auto or --mode mc");
    if (!fits) {
      solve_cells = 0;
      for (int c : {17, 9, 5, 3})
        if (c < a.learn_cells && iid_product_size(c, a.n, IidMode::multiset) <= kSolveCap) {
          solve_cells = c;
          break;
        }
      if (solve_cells == 0)
        throw std::runtime_error("no learn grid coarse enough for n = " + std::to_string(a.n) +
                                 " under the solver cap " + std::to_string(kSolveCap));
    }
    GridSpec lg{kLearnGridDefault.lo, kLearnGridDefault.hi, solve_cells};
    inst = build_example2(a.n, a.theta_cells, sg, lg);
    ml_mc = (!fits || a.mode == "mc") && a.n > 0;
    if (!fits)
      std::cout << "learning data at " << a.learn_cells << " cells has " << requested_size
                << " outcomes (solver cap " << kSolveCap << "); solving on a " << solve_cells
                << "-cell learn grid, estimating the maximum-likelihood curve by Monte Carlo ("
                << kMcSamples << " samples, seed " << a.seed << ")\n";
    if (ml_mc)
      mc_inst = build_example2(a.n, a.theta_cells, sg,
                               GridSpec{kLearnGridDefault.lo, kLearnGridDefault.hi, a.learn_cells},
                               Example2Mode::mc);
  }

  RiskKernel kern(inst.obj, inst.learn, inst.loss);
  StrategySolve mm = minimax_strategy(kern, cfg);
  StrategySolve md = mindev_strategy(kern, cfg);
  mm.curve.tag = "minimax";
  md.curve.tag = "mindev";

  int nm = inst.obj.nm();
  std::vector<double> ml_risks((size_t)nm), bayes((size_t)nm);
  if (ml_mc) {
    MlRawRule rule(mc_inst.obj, mc_inst.loss, mc_inst.base);
    for (int k = 0; k < nm; ++k)
      ml_risks[(size_t)k] = estimate_risk_mc(mc_inst.obj, mc_inst.loss, mc_inst.base,
                                             mc_inst.draws_per_sample, rule, k, kMcSamples, a.seed)
                                .mean;
  } else {
    Strategy ml = ml_strategy(kern);
    ml_risks = risk_curve(kern, ml).risks;
  }
  for (int k = 0; k < nm; ++k) bayes[(size_t)k] = model_bayes_risk(inst.obj, inst.loss, k);

  std::ostringstream title;
  title << "Example " << a.which << ", n = " << a.n;
  std::vector<ChartSeries> series = {{"maximum likelihood", ml_risks},
                                     {"minimax", mm.curve.risks},
                                     {"minimax deviation", md.curve.risks},
                                     {"Bayes risk floor", bayes}};

  nlohmann::ordered_json meta;
  meta["command"] = "example";
  meta["which"] = a.which;
  meta["n"] = a.n;
  meta["theta_cells"] = a.theta_cells;
  meta["theta_range"] = {inst.thetas.front(), inst.thetas.back()};
  meta["signal_grid"] = {{"lo", inst.signal1.lo}, {"hi", inst.signal1.hi}, {"cells", inst.signal1.cells}};
  if (a.which == 1)
    meta["signal_grid_x2"] = {{"lo", inst.signal2.lo}, {"hi", inst.signal2.hi}, {"cells", inst.signal2.cells}};
  meta["learn_cells"] = a.learn_cells;
  meta["solve_learn_cells"] = solve_cells;
  meta["learn_range"] = {kLearnGridDefault.lo, kLearnGridDefault.hi};
  meta["mode"] = a.mode;
  meta["ml_evaluation"] = ml_mc ? "monte-carlo" : "exact";
  if (ml_mc) {
    meta["samples"] = kMcSamples;
    meta["seed"] = a.seed;
  }
  meta["iters"] = a.iters;
  meta["tol"] = a.tol;
  meta["minimax"] = report_summary(mm.report);
  meta["mindev"] = report_summary(md.report);

  fs::create_directories(a.out);
  write_text_file(a.out + "/risk_curves.csv",
                  emit_example_csv(inst.thetas, ml_risks, mm.curve.risks, md.curve.risks, bayes));
  write_text_file(a.out + "/risk_curves.svg",
                  emit_line_chart_svg(title.str(), "theta", "risk", inst.thetas, series));
  write_text_file(a.out + "/metadata.json", meta.dump(2) + "\n");

  print_report("minimax", mm.report);
  print_report("mindev", md.report);
  return (mm.report.converged && md.report.converged) ? 0 : 2;
}

int do_check(const CheckArgs& a) {
  ModelSpec spec = load_model_spec(read_text_file(a.spec_path));
  Strategy q0 = load_strategy_doc(read_text_file(a.strategy_path), spec.obj, spec.learn);
  RiskKernel kern(spec.obj, spec.learn, spec.loss);
  SolveConfig cfg;
  cfg.max_iters = a.iters;
  cfg.tol = a.tol;
  ImpropernessResult res = improperness_test(kern, q0, cfg);
  if (res.improper) {
    fs::create_directories(a.out);
    Strategy dense = densify(kern, res.dominating);
    std::string path = a.out + "/dominating_strategy.json";
    write_text_file(path, emit_strategy_doc(spec.obj, spec.learn, dense));
    std::cout << "improper: margin " << format_number(res.margin)
              << ", dominating strategy written to " << path << "\n";
    return 3;
  }
  std::cout << "bayesian: witness prior";
  for (double t : res.prior) std::cout << ' ' << format_number(t);
  std::cout << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"optimal recognition strategies for finite models with learning data"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "solve a scaled minimax problem on a model spec");
  solve->add_option("--spec", sa.spec_path, "model-spec JSON file")->required();
  CLI::Option* preset_opt =
      solve->add_option("--preset", sa.preset, "objective preset (default minimax)")
          ->check(CLI::IsMember({"minimax", "mindev", "mindev-relative"}));
  CLI::Option* alpha_opt =
      solve->add_option("--alpha", sa.alpha_path, "JSON array of per-model offsets");
  CLI::Option* beta_opt =
      solve->add_option("--beta", sa.beta_path, "JSON array of per-model scales");
  alpha_opt->excludes(preset_opt);
  beta_opt->excludes(preset_opt);
  solve->add_option("--iters", sa.iters, "iteration budget")->check(CLI::PositiveNumber);
  solve->add_option("--tol", sa.tol, "duality-gap tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--out", sa.out, "output directory");

  ExampleArgs ea;
  CLI::App* example = app.add_subcommand("example", "reproduce a Gaussian experiment's risk curves");
  example->add_option("which", ea.which, "experiment number (1 or 2)")
      ->required()
      ->check(CLI::Range(1, 2));
  example->add_option("--n", ea.n, "learning sample size")->check(CLI::NonNegativeNumber);
  example->add_option("--theta-cells", ea.theta_cells, "model grid size")->check(CLI::Range(1, 100000));
  example->add_option("--theta-range", ea.theta_range, "model grid range LO:HI (example 1 only)");
  example->add_option("--signal-cells", ea.signal_cells, "signal grid size")->check(CLI::Range(3, 100000));
  example->add_option("--signal-range", ea.signal_range, "signal grid range LO:HI");
  example->add_option("--learn-cells", ea.learn_cells, "learning grid size")->check(CLI::Range(3, 100000));
  example->add_option("--iters", ea.iters, "iteration budget")->check(CLI::PositiveNumber);
  example->add_option("--tol", ea.tol, "duality-gap tolerance")->check(CLI::PositiveNumber);
  example->add_option("--seed", ea.seed, "Monte-Carlo seed");
  example->add_option("--out", ea.out, "output directory");
  example->add_option("--mode", ea.mode, "evaluation mode (default auto)")
      ->check(CLI::IsMember({"exact", "mc", "auto"}));

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check", "classify a strategy as bayesian or improper");
  check->add_option("--spec", ca.spec_path, "model-spec JSON file")->required();
  check->add_option("--strategy", ca.strategy_path, "strategy JSON file")->required();
  check->add_option("--iters", ca.iters, "iteration budget")->check(CLI::PositiveNumber);
  check->add_option("--tol", ca.tol, "duality-gap tolerance")->check(CLI::PositiveNumber);
  check->add_option("--out", ca.out, "output directory for the dominating strategy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return do_solve(sa, alpha_opt->count() > 0 || beta_opt->count() > 0);
    if (example->parsed()) return do_example(ea);
    return do_check(ca);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("mindev");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli((int)argv.size(), argv.data());
}

}  // namespace mindev
