// netsub: spectra, solver runs and the figure experiments from the command line.
//
// All options live on the top-level app so that a flat key=value config file
// (--config) can set any of them; flags given on the command line win.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "netsub/experiments.hpp"
#include "netsub/io.hpp"
#include "netsub/svg.hpp"

namespace fs = std::filesystem;
using namespace netsub;

namespace {

struct Options {
  std::uint64_t seed = 1;
  std::string out = "out";
  int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  double tolerance = 1e-9;
  bool svg = false;

  int n = 4;
  double eps = 0;  // 0: per-command default
  double beta = 0.5;
  long T = 0;  // 0: per-command default
  double gamma = 2.0, a = 5.0;
  std::string mode = "simulation";

  std::string problem = "counterexample";
  std::string topology = "gn_prime";
  std::string schedule;
  std::string variant = "mix_after_project";
  std::string window = "half";
  bool no_adversary = false;
  double x0 = 0;
  bool x0_set = false;

  std::vector<int> n_list{4, 8, 16};
  std::vector<double> betas{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
  int R = 500;
  double threshold = 0.03, zero_band = 1e-6;
  int K = 10, d = 2;
  double lambda1 = 1.0, lambda2 = 0.05, noise_std = 0.2, box = 1.5;
  long cap = 1000000;

  std::string suite = "all";
};

fs::path prepare_out(const Options& o, const std::string& file) {
  fs::create_directories(o.out);
  return fs::path(o.out) / file;
}

nlohmann::json base_meta(const Options& o, const std::string& command) {
  return {{"command", command}, {"seed", o.seed}, {"tolerance", o.tolerance}, {"rng", kRngName},
          {"threads", o.threads}};
}

int cmd_spectrum(const Options& o) {
  const double eps = o.eps > 0 ? o.eps : 0.5 / o.n;
  const auto r = spectrum(o.n, eps);
  write_spectrum_csv(std::cout, r);
  std::cerr << "max_abs_diff=" << format_number(r.max_abs_diff) << " sigma=" << format_number(r.sigma_dense)
            << " sigma_power=" << format_number(r.sigma_power) << "\n";
  return 0;
}

int cmd_run(const Options& o) {
  RunSpec spec;
  spec.problem = o.problem;
  spec.topology = o.topology;
  spec.n = o.n;
  if (o.eps > 0) spec.eps = o.eps;
  spec.schedule = o.schedule.empty() ? "poly:" + format_number(o.beta) : o.schedule;
  spec.variant = parse_variant(o.variant);
  spec.window = parse_window_rule(o.window);
  spec.T = o.T > 0 ? o.T : 1000;
  spec.adversary = !o.no_adversary;
  spec.gamma = o.gamma, spec.a = o.a;
  spec.quartic.n_points = o.K, spec.quartic.dimension = o.d;
  spec.quartic.lambda1 = o.lambda1, spec.quartic.lambda2 = o.lambda2, spec.quartic.noise_std = o.noise_std;
  spec.quartic.box_halfwidth = o.box, spec.quartic.seed = o.seed;
  if (o.x0_set) spec.x0 = o.x0;

  InvariantMonitor<double> mon(o.tolerance);
  const auto res = run_experiment(spec, &mon);
  const auto path = prepare_out(o, "run.csv");
  write_run_csv(path, res.record);
  auto meta = base_meta(o, "run");
  meta.update({{"problem", spec.problem}, {"topology", spec.topology}, {"n", spec.n}, {"eps", res.eps},
               {"sigma", res.sigma}, {"schedule", spec.schedule}, {"variant", o.variant}, {"window", o.window},
               {"T", spec.T}, {"adversary", spec.adversary}, {"L", res.lipschitz}, {"D", res.diameter},
               {"invariants_ok", mon.ok()}});
  write_metadata(path, meta);
  if (o.svg) {
    SvgSeries s{"scaled gap", {}, {}};
    for (const auto& r : res.record.rows) s.x.push_back(double(r.t)), s.y.push_back(r.scaled_gap);
    write_svg_chart(prepare_out(o, "run.svg"), {s}, {"run", "t", "scaled_gap"});
  }
  std::cout << "wrote " << path.string() << " (" << res.record.rows.size() << " rows)\n";
  if (!mon.ok()) {
    std::cerr << "invariant violated during the run: " << mon.failures() << "\n";
    return 1;
  }
  return 0;
}

int cmd_counterexample(const Options& o) {
  const double eps = o.eps > 0 ? o.eps : 0.25;
  const long T = o.T > 0 ? o.T : 100000;
  CounterexampleConfig cfg = o.mode == "strict" ? CounterexampleConfig::strict_proof(o.n, eps, T)
                                                : CounterexampleConfig::simulation(o.n, eps, T);
  if (o.mode != "strict" && o.mode != "simulation") throw InvalidArgument("mode must be simulation or strict");
  if (o.mode == "simulation") cfg.gamma = o.gamma, cfg.a = o.a;
  cfg.validate();
  const auto path = prepare_out(o, "counterexample_n" + std::to_string(o.n) + ".csv");
  std::ofstream os(path);
  const auto rep = write_counterexample_csv(os, cfg, StepSchedule::polynomial(o.beta));
  auto meta = base_meta(o, "counterexample");
  meta.update({{"n", cfg.n}, {"eps", cfg.eps}, {"gamma", cfg.gamma}, {"a", cfg.a}, {"T", cfg.T}, {"beta", o.beta},
               {"mode", o.mode}, {"passed", rep.passed}});
  write_metadata(path, meta);
  std::cout << (rep.passed ? "PASS" : "FAIL") << " counterexample n=" << cfg.n << " eps=" << format_number(cfg.eps)
            << " T=" << cfg.T << " max|x_u|=" << format_number(rep.max_u_abs)
            << " max|x_v-y|=" << format_number(rep.max_v_diff)
            << " max|pre-projection|=" << format_number(rep.max_pre_projection_abs);
  if (!rep.passed) std::cout << " first violation t=" << rep.first_violation << " (" << rep.reason << ")";
  std::cout << "\n";
  return rep.passed ? 0 : 1;
}

int cmd_fig_independence(const Options& o) {
  IndependenceConfig cfg;
  cfg.n_list = o.n_list;
  cfg.beta = o.beta;
  cfg.T = o.T > 0 ? o.T : 1000000;
  cfg.gamma = o.gamma, cfg.a = o.a;
  cfg.threads = o.threads;
  const auto curves = fig_independence(cfg);
  std::vector<SvgSeries> series;
  bool ok = true;
  for (const auto& c : curves) {
    const auto path = prepare_out(o, "independence_beta" + format_number(cfg.beta) + "_n" + std::to_string(c.n) + ".csv");
    std::ofstream os(path);
    write_independence_csv(os, c);
    auto meta = base_meta(o, "fig-independence");
    meta.update({{"n", c.n}, {"eps", c.eps}, {"beta", cfg.beta}, {"T", cfg.T}, {"gamma", cfg.gamma}, {"a", cfg.a},
                 {"first_below_one", c.first_below_one}, {"last_above_one", c.last_above_one},
                 {"terminal_scaled_gap", c.terminal_scaled}, {"invariants_ok", c.monitor.ok()}});
    write_metadata(path, meta);
    std::cout << "n=" << c.n << " terminal scaled_gap=" << format_number(c.terminal_scaled)
              << " max=" << format_number(c.max_scaled) << " last t above 1=" << c.last_above_one << "\n";
    ok = ok && c.monitor.ok();
    SvgSeries s{"n=" + std::to_string(c.n), {}, {}};
    for (const auto& r : c.record.rows) s.x.push_back(double(r.t)), s.y.push_back(r.scaled_gap);
    series.push_back(std::move(s));
  }
  if (o.svg) {
    SvgChartOptions so{"alpha(t) = 1/t^" + format_number(cfg.beta), "t", "t^(1-beta) (F(xbar) - F*)"};
    so.reference_y = 1.0;
    write_svg_chart(prepare_out(o, "independence_beta" + format_number(cfg.beta) + ".svg"), series, so);
  }
  return ok ? 0 : 1;
}

int cmd_fig_inversion(const Options& o) {
  InversionConfig cfg;
  cfg.betas = o.betas;
  cfg.R = o.R;
  cfg.seed = o.seed;
  cfg.threshold = o.threshold, cfg.zero_band = o.zero_band;
  cfg.problem.n_points = o.K, cfg.problem.dimension = o.d;
  cfg.problem.lambda1 = o.lambda1, cfg.problem.lambda2 = o.lambda2, cfg.problem.noise_std = o.noise_std;
  cfg.problem.box_halfwidth = o.box;
  cfg.eps = o.eps > 0 ? o.eps : 0.25;
  cfg.cap = o.cap;
  cfg.x0 = o.x0_set ? o.x0 : 1.0;
  cfg.threads = o.threads;
  const auto rows = fig_inversion(cfg);
  const auto path = prepare_out(o, "inversion.csv");
  {
    std::ofstream os(path);
    write_inversion_csv(os, rows);
  }
  std::vector<double> b, mc, md;
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& r : rows) {
    b.push_back(r.beta), mc.push_back(r.mean_c), md.push_back(r.mean_d);
    if (r.warning) {
      warnings.push_back(r.beta);
      std::cerr << "warning: cap reached in more than half of the runs at beta=" << format_number(r.beta) << "\n";
    }
  }
  auto meta = base_meta(o, "fig-inversion");
  meta.update({{"R", cfg.R}, {"betas", cfg.betas}, {"threshold", cfg.threshold}, {"zero_band", cfg.zero_band},
               {"K", cfg.problem.n_points}, {"d", cfg.problem.dimension}, {"lambda1", cfg.problem.lambda1},
               {"lambda2", cfg.problem.lambda2}, {"noise_std", cfg.problem.noise_std},
               {"box_halfwidth", cfg.problem.box_halfwidth}, {"x0", cfg.x0}, {"graph", "line"},
               {"n_agents", cfg.problem.n_agents}, {"eps", cfg.eps}, {"cap", cfg.cap},
               {"cap_warning_betas", warnings}});
  if (b.size() >= 2) {
    meta["spearman_centralized"] = spearman(b, mc);
    meta["spearman_distributed"] = spearman(b, md);
  }
  write_metadata(path, meta);
  write_inversion_csv(std::cout, rows);
  if (o.svg) {
    SvgChartOptions so{"iterations until ||s||_1 < " + format_number(cfg.threshold), "beta", "mean iterations"};
    so.log_x = false;
    write_svg_chart(prepare_out(o, "inversion.svg"), {{"centralized", b, mc}, {"distributed", b, md}}, so);
  }
  return 0;
}

int cmd_verify(const Options& o) {
  const auto rep = verify_suite(o.suite);
  rep.print(std::cout);
  std::cout << (rep.ok() ? "all checks passed" : "some checks failed") << "\n";
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netsub: distributed subgradient experiments"};
  app.set_config("--config", "", "flat key=value file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  Options o;

  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tolerance", o.tolerance, "invariant tolerance")->capture_default_str();
  app.add_flag("--svg", o.svg, "also write an SVG chart");

  app.add_option("--n", o.n, "G_n' half size or agent count")->capture_default_str();
  app.add_option("--eps", o.eps, "mixing weight (default per command)");
  app.add_option("--beta", o.beta, "step exponent, alpha(t) = 1/t^beta")->capture_default_str();
  app.add_option("--T", o.T, "horizon (default per command)");
  app.add_option("--gamma", o.gamma, "u-node weight")->capture_default_str();
  app.add_option("--a", o.a, "half-width of [-a, a]")->capture_default_str();
  app.add_option("--mode", o.mode, "simulation | strict")->capture_default_str();
  app.add_option("--problem", o.problem, "counterexample | quartic")->capture_default_str();
  app.add_option("--topology", o.topology, "gn_prime | line | complete | star | ring")->capture_default_str();
  app.add_option("--schedule", o.schedule, "poly:<beta> | const:<c> (overrides --beta)");
  app.add_option("--variant", o.variant, "pre_mix | projected_pre_mix | mix_after_project | centralized")
      ->capture_default_str();
  app.add_option("--window", o.window, "half | full | dyadic")->capture_default_str();
  app.add_flag("--no-adversary", o.no_adversary, "default subgradients on the counterexample");
  app.add_option("--x0", o.x0, "initial value of every coordinate");
  app.add_option("--n-list", o.n_list, "node counts for fig-independence")->delimiter(',');
  app.add_option("--betas", o.betas, "beta grid for fig-inversion")->delimiter(',');
  app.add_option("--R", o.R, "problem draws per beta")->capture_default_str();
  app.add_option("--threshold", o.threshold, "termination level for ||s||_1")->capture_default_str();
  app.add_option("--zero-band", o.zero_band, "entries below this count as zero")->capture_default_str();
  app.add_option("--K", o.K, "quartic data points")->capture_default_str();
  app.add_option("--d", o.d, "quartic dimension")->capture_default_str();
  app.add_option("--lambda1", o.lambda1, "l2 weight")->capture_default_str();
  app.add_option("--lambda2", o.lambda2, "l1 weight")->capture_default_str();
  app.add_option("--noise-std", o.noise_std, "noise standard deviation")->capture_default_str();
  app.add_option("--box", o.box, "quartic box half-width")->capture_default_str();
  app.add_option("--cap", o.cap, "iteration cap for fig-inversion")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of W on G_n' against the closed form");
  auto* run = app.add_subcommand("run", "one solver run, per-step CSV");
  auto* counterexample = app.add_subcommand("counterexample", "solver vs closed-form y(t) on G_n'");
  auto* independence = app.add_subcommand("fig-independence", "scaled gap curves for several n");
  auto* inversion = app.add_subcommand("fig-inversion", "iterations to a small gradient mapping vs beta");
  auto* verify = app.add_subcommand("verify", "invariant suites");
  verify->add_option("suite", o.suite, "schedule | spectral | lemmas | counterexample | all")->capture_default_str();
  for (auto* sub : {spectrum, run, counterexample, independence, inversion, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  o.x0_set = app.count("--x0") > 0;

  try {
    if (*spectrum) return cmd_spectrum(o);
    if (*run) return cmd_run(o);
    if (*counterexample) return cmd_counterexample(o);
    if (*independence) return cmd_fig_independence(o);
    if (*inversion) return cmd_fig_inversion(o);
    if (*verify) return cmd_verify(o);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedSchedule& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidAdversary& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
