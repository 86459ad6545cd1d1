#include "netsub/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "netsub/io.hpp"

namespace netsub {

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void Report::print(std::ostream& os) const {
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured=" << format_number(c.measured)
       << " bound=" << format_number(c.bound);
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
  }
}

// ---- spectrum ---------------------------------------------------------------

SpectrumResult spectrum(int n, double eps) {
  const Graph g = build_gn_prime(n);
  const auto w = mixing_matrix<double>(g, eps);
  SpectrumResult r{n, eps, gn_prime_spectrum<double>(n, eps), dense_eigenvalues(w.entries()), 0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < r.numeric.size(); ++i) {
    r.max_abs_diff = std::max(r.max_abs_diff, std::abs(r.numeric[i] - r.closed_form[i]));
  }
  r.sigma_power = second_singular_value_power(w.entries()).value;
  r.sigma_dense = dense_second_singular_value(w.entries());
  for (std::size_t i = 1; i < r.closed_form.size(); ++i) {
    r.sigma_closed = std::max(r.sigma_closed, std::abs(r.closed_form[i]));
  }
  return r;
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& r) {
  CsvWriter csv(os, {"index", "closed_form", "numeric", "abs_diff"});
  for (std::size_t i = 0; i < r.numeric.size(); ++i) {
    csv << long(i) << r.closed_form[i] << r.numeric[i] << std::abs(r.numeric[i] - r.closed_form[i]);
    csv.end_row();
  }
}

double contraction_min_slack(const MixingMatrix<double>& w, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Eigen::Index n = w.size();
  double worst = INFINITY;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = normal(rng);
    const Eigen::VectorXd c = x.array() - x.mean();
    const double base = c.norm();
    if (base == 0.0) continue;
    const Eigen::VectorXd y = w.entries() * x;
    const double mixed = (y.array() - x.mean()).matrix().norm();
    worst = std::min(worst, (w.sigma() * base - mixed) / base);
  }
  return worst;
}

// ---- generic run ------------------------------------------------------------

RunOutput run_experiment(const RunSpec& spec, InvariantMonitor<double>* monitor) {
  const StepSchedule schedule = StepSchedule::parse(spec.schedule);
  StepConfig<double> sc;
  sc.variant = spec.variant;
  RunOptions<double> opts;
  opts.window = spec.window;
  opts.monitor = monitor;

  if (spec.problem == "counterexample") {
    if (spec.topology != "gn_prime") throw InvalidArgument("the counterexample problem lives on gn_prime");
    CounterexampleConfig cfg{spec.n, spec.eps.value_or(1.0 / spec.n), spec.gamma, spec.a, spec.T,
                             AdversaryMode::simulation};
    auto setup = make_counterexample_setup(cfg);
    if (spec.adversary) {
      if (spec.variant != Variant::mix_after_project) {
        throw InvalidArgument("the adversarial selector is defined for mix_after_project");
      }
      sc.selector = adversarial_selector(cfg, schedule);
    }
    if (spec.x0) opts.initial_point = Eigen::VectorXd::Constant(1, *spec.x0);
    const auto w = spec.variant == Variant::centralized ? MixingMatrix<double>::identity(1) : setup.w;
    RunOutput out{run(w, setup.problem, schedule, sc, spec.T, opts), cfg.eps, setup.w.sigma(),
                  setup.problem.lipschitz_bound(), setup.problem.diameter()};
    return out;
  }
  if (spec.problem == "quartic") {
    Graph g = spec.topology == "gn_prime" ? build_gn_prime(spec.n) : build_standard(parse_topology(spec.topology), spec.n);
    const double eps = spec.eps.value_or(0.5 / g.max_degree());
    QuarticConfig qc = spec.quartic;
    qc.n_agents = g.n_nodes();
    auto p = make_quartic_elasticnet<double>(qc);
    auto wg = mixing_matrix<double>(g, eps);
    if (spec.x0) opts.initial_point = Eigen::VectorXd::Constant(qc.dimension, *spec.x0);
    const auto w = spec.variant == Variant::centralized ? MixingMatrix<double>::identity(1) : wg;
    return {run(w, p, schedule, sc, spec.T, opts), eps, wg.sigma(), p.lipschitz_bound(), p.diameter()};
  }
  throw InvalidArgument("unknown problem '" + spec.problem + "' (counterexample | quartic)");
}

// ---- centralized bound ------------------------------------------------------

CentralizedBoundResult centralized_bound_check(const ProblemInstance<double>& p, const StepSchedule& s, long T,
                                               const VectorX<double>& x0, InvariantMonitor<double>* monitor) {
  const auto& opt = p.known_optimum();
  if (!opt) throw InvalidArgument("centralized bound check needs a known optimum");
  const double D = p.diameter(), L = p.lipschitz_bound();
  CentralizedBoundResult r;
  r.threshold = centralized_threshold(s, D, L);
  r.c_alpha = estimate_c_alpha(s, std::max(2L, T));
  const auto w = MixingMatrix<double>::identity(1);
  StepConfig<double> sc;
  sc.variant = Variant::centralized;
  auto state = initial_state(p, Variant::centralized, x0, WindowRule::half);
  StepTrace<double> trace;
  long double alpha_sum = 0;
  for (long t = 1; t <= T; ++t) {
    alpha_sum += s.alpha(t);
    state = step(std::move(state), w, p, s, sc, &trace);
    if (monitor) monitor->observe(trace, p, Variant::centralized);
    if (t < 2) continue;
    const double gap = p.objective(state.average.average()) - opt->f_star;
    const double bound = D * D * r.c_alpha / double(alpha_sum);
    const double ratio = gap / bound;
    r.max_ratio_any_t = std::max(r.max_ratio_any_t, ratio);
    if (gap > bound + 1e-9) ++r.violations_any_t;
    if (t >= r.threshold) {
      ++r.checked;
      r.max_ratio = std::max(r.max_ratio, ratio);
      if (gap > bound + 1e-9) ++r.violations;
    }
  }
  return r;
}

// ---- counterexample trace ---------------------------------------------------

EquivalenceReport write_counterexample_csv(std::ostream& os, const CounterexampleConfig& cfg,
                                           const StepSchedule& schedule) {
  CsvWriter csv(os, {"t", "y", "eps_sqrt_t_y", "x_v_solver", "abs_diff"});
  return verify_equivalence(cfg, schedule, [&](long t, double y, double xv) {
    csv << t << y << cfg.eps * std::sqrt(double(t)) * y << xv << std::abs(xv - y);
    csv.end_row();
  });
}

// ---- network (in)dependence -------------------------------------------------

std::vector<IndependenceCurve> fig_independence(const IndependenceConfig& cfg) {
  if (cfg.n_list.empty()) throw InvalidArgument("fig-independence needs at least one n");
  if (!(cfg.beta >= 0.5 && cfg.beta < 1.0)) throw InvalidArgument("fig-independence needs beta in [1/2, 1)");
  const StepSchedule s = StepSchedule::polynomial(cfg.beta);
  std::vector<IndependenceCurve> curves(cfg.n_list.size());
  parallel_for(cfg.n_list.size(), cfg.threads, [&](std::size_t k) {
    const int n = cfg.n_list[k];
    CounterexampleConfig cc{n, 1.0 / n, cfg.gamma, cfg.a, cfg.T, AdversaryMode::simulation};
    auto setup = make_counterexample_setup(cc);
    IndependenceCurve& c = curves[k];
    c.n = n;
    c.eps = cc.eps;
    const double sigma = setup.w.sigma();
    const double coeff =
        2.0 * c_alpha_prime_bound(s) * setup.problem.lipschitz_bound() * std::sqrt(2.0 * n) / (1.0 - sigma);
    c.monitor.set_disagreement_bound({distance_threshold(s, sigma), coeff});

    StepConfig<double> sc;
    sc.variant = Variant::mix_after_project;
    sc.selector = adversarial_selector(cc, s);
    RunOptions<double> opts;
    opts.monitor = &c.monitor;
    const double f_star = setup.problem.known_optimum()->f_star;
    const double expo = 1.0 - cfg.beta;
    // exact per-step tracking; the record itself is strided for long runs
    opts.observer = [&](const SolverState<double>&, const StepTrace<double>& tr) {
      const double gap = setup.problem.objective(tr.points.colwise().mean().transpose()) - f_star;
      const double sg = std::pow(double(tr.t), expo) * gap;
      c.max_scaled = std::max(c.max_scaled, sg);
      if (sg <= 1.0 && c.first_below_one < 0) c.first_below_one = tr.t;
      if (sg > 1.0) c.last_above_one = tr.t;
      c.terminal_scaled = sg;
    };
    c.record = run(setup.w, setup.problem, s, sc, cfg.T, opts);
  });
  return curves;
}

void write_independence_csv(std::ostream& os, const IndependenceCurve& c) {
  CsvWriter csv(os, {"t", "scaled_gap", "gap", "below_one"});
  for (const auto& r : c.record.rows) {
    csv << r.t << r.scaled_gap << r.gap << long(r.scaled_gap <= 1.0);
    csv.end_row();
  }
}

// ---- step-size inversion ----------------------------------------------------

std::vector<InversionRow> fig_inversion(const InversionConfig& cfg) {
  if (cfg.R < 1) throw InvalidArgument("fig-inversion needs R >= 1");
  for (double b : cfg.betas) {
    if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("fig-inversion needs every beta in (0, 1)");
  }
  const int n_agents = cfg.problem.n_agents;
  const Graph line = build_standard(Topology::line, n_agents);
  const auto w = mixing_matrix<double>(line, cfg.eps);
  const auto one = MixingMatrix<double>::identity(1);
  const std::size_t B = cfg.betas.size(), R = std::size_t(cfg.R);

  std::vector<std::vector<Termination>> central(R), distributed(R);
  parallel_for(R, cfg.threads, [&](std::size_t r) {
    QuarticConfig qc = cfg.problem;
    qc.seed = cfg.seed;
    qc.stream = r;
    ProblemInstance<double> p = make_quartic_elasticnet<double>(qc);
    const std::optional<Eigen::VectorXd> x0 = Eigen::VectorXd::Constant(qc.dimension, cfg.x0);
    central[r].reserve(B), distributed[r].reserve(B);
    for (double beta : cfg.betas) {
      const StepSchedule s = StepSchedule::polynomial(beta);
      central[r].push_back(terminate_on_mapping(one, p, s, Variant::centralized, cfg.threshold, cfg.zero_band,
                                                cfg.cap, x0));
      distributed[r].push_back(terminate_on_mapping(w, p, s, Variant::mix_after_project, cfg.threshold,
                                                    cfg.zero_band, cfg.cap, x0));
    }
  });

  auto mean_se = [](const std::vector<long>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double ss = 0;
    for (long x : v) ss += (double(x) - m) * (double(x) - m);
    const double se = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1) / double(v.size())) : 0.0;
    return std::pair{m, se};
  };
  std::vector<InversionRow> rows;
  for (std::size_t b = 0; b < B; ++b) {
    InversionRow row{cfg.betas[b], 0, 0, 0, 0, 0, false, {}, {}};
    long capped_c = 0, capped_d = 0;
    for (std::size_t r = 0; r < R; ++r) {
      row.iters_c.push_back(central[r][b].iterations);
      row.iters_d.push_back(distributed[r][b].iterations);
      capped_c += !central[r][b].terminated;
      capped_d += !distributed[r][b].terminated;
    }
    std::tie(row.mean_c, row.se_c) = mean_se(row.iters_c);
    std::tie(row.mean_d, row.se_d) = mean_se(row.iters_d);
    row.capped = capped_c + capped_d;
    row.warning = 2 * capped_c > long(R) || 2 * capped_d > long(R);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_inversion_csv(std::ostream& os, const std::vector<InversionRow>& rows) {
  CsvWriter csv(os, {"beta", "mean_iters_centralized", "se_c", "mean_iters_distributed", "se_d", "capped_runs"});
  for (const auto& r : rows) {
    csv << r.beta << r.mean_c << r.se_c << r.mean_d << r.se_d << r.capped;
    csv.end_row();
  }
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * double(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman needs two equal-length series");
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / double(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / double(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

bool non_monotone(const std::vector<double>& v) {
  bool up = false, down = false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    up = up || v[i] > v[i - 1];
    down = down || v[i] < v[i - 1];
  }
  return up && down;
}

// ---- verification suites ----------------------------------------------------

Report verify_schedule() {
  Report rep;
  for (double beta : {0.5, 0.75, 0.9}) {
    const auto s = StepSchedule::polynomial(beta);
    const std::string b = format_number(beta);
    const double ca = estimate_c_alpha(s, 1000000);
    const double limit = 1.0 / (1.0 - std::pow(2.0, beta - 1.0));
    rep.add("c_alpha(beta=" + b + ") below its large-t limit", ca <= limit, ca, limit);
    const double cp = asymptotic_c_alpha_prime(s, 1000000);
    rep.add("c_alpha' over [t/2, t] near 2^beta (beta=" + b + ")", std::abs(cp - std::pow(2.0, beta)) <= 1e-3,
            std::abs(cp - std::pow(2.0, beta)), 1e-3);
    const double cq = estimate_c_alpha_prime(s, 1000000);
    rep.add("c_alpha' full range equals 3^beta (beta=" + b + ")", std::abs(cq - c_alpha_prime_bound(s)) <= 1e-12,
            cq, c_alpha_prime_bound(s));
    bool mono = true;
    for (long t = 1; t < 100000; ++t) mono = mono && s.alpha(t + 1) <= s.alpha(t) && s.alpha(t + 1) > 0;
    rep.add("alpha positive and nonincreasing (beta=" + b + ")", mono, 0, 0);
  }
  {
    const auto s = StepSchedule::polynomial(0.75);
    const double v = tail_sum_squares(s, 2);
    const double ref = 2.612375348685488;  // zeta(3/2)
    rep.add("tail sum of k^{-3/2} from k=1", std::abs(v - ref) / ref < 1e-9, std::abs(v - ref) / ref, 1e-9);
    const auto s1 = StepSchedule::polynomial(1.0);
    const double v1 = tail_sum_squares(s1, 200);
    const double ref1 = 0.010050166663333571;  // sum_{k>=100} k^{-2}
    rep.add("tail sum of k^{-2} from k=100", std::abs(v1 - ref1) / ref1 < 1e-9, std::abs(v1 - ref1) / ref1, 1e-9);
  }
  for (double beta : {0.6, 0.75, 0.9}) {
    const auto s = StepSchedule::polynomial(beta);
    const double bound = beta == 0.6 ? 1e-2 : 1e-3;
    const long t = tail_threshold(s, bound);
    const bool ok = tail_sum_squares(s, t) <= bound && (t <= 2 || tail_sum_squares(s, t - 1) > bound);
    rep.add("tail threshold is the first admissible t (beta=" + format_number(beta) + ")", ok, double(t), bound);
  }
  {
    bool threw = false;
    try {
      tail_sum_squares(StepSchedule::polynomial(0.5), 10);
    } catch (const UnsupportedSchedule&) {
      threw = true;
    }
    rep.add("beta=1/2 tail sum rejected", threw, threw, 1);
  }
  return rep;
}

Report verify_spectral() {
  Report rep;
  for (int n : {2, 4, 8, 16}) {
    for (double eps : {0.9 / (n + 2), 0.5 / n}) {
      const auto r = spectrum(n, eps);
      const std::string tag = "n=" + std::to_string(n) + " eps=" + format_number(eps);
      rep.add("closed-form spectrum " + tag, r.max_abs_diff <= 1e-9, r.max_abs_diff, 1e-9);
      const double ds = std::abs(r.sigma_power - r.sigma_dense);
      rep.add("power iteration sigma " + tag, ds <= 1e-8, ds, 1e-8);
      const double dc = std::abs(r.sigma_dense - r.sigma_closed);
      rep.add("sigma from closed form " + tag, dc <= 1e-9, dc, 1e-9);
    }
  }
  std::vector<std::pair<std::string, MixingMatrix<double>>> mats;
  for (int n : {4, 8, 16}) {
    mats.push_back({"G_" + std::to_string(n) + "' eps=1/n",
                    mixing_matrix<double>(build_gn_prime(n), 1.0 / n, DiagonalRule::nonnegative)});
  }
  mats.push_back({"line n=10 eps=1/4", mixing_matrix<double>(build_standard(Topology::line, 10), 0.25)});
  mats.push_back({"ring n=10 eps=1/4", mixing_matrix<double>(build_standard(Topology::ring, 10), 0.25)});
  mats.push_back({"star n=10 eps=1/18", mixing_matrix<double>(build_standard(Topology::star, 10), 1.0 / 18)});
  mats.push_back({"complete n=10 eps=1/20", mixing_matrix<double>(build_standard(Topology::complete, 10), 0.05)});
  std::uint64_t seed = 7;
  for (const auto& [name, w] : mats) {
    const double slack = contraction_min_slack(w, 1000, seed++);
    rep.add("contraction ||Wx - xbar|| <= sigma ||x - xbar||, " + name, slack >= -1e-12, slack, -1e-12);
  }
  return rep;
}

namespace {

void add_monitor(Report& rep, const std::string& tag, const InvariantMonitor<double>& m) {
  auto one = [&](const char* what, const InvariantSlack& s) {
    if (s.checks == 0) return;
    rep.add(tag + ": " + what, s.ok(), s.min_slack, 0.0, std::to_string(s.checks) + " checks");
  };
  one("mapping bound ||s_i|| <= ||g_i|| <= L", m.mapping_bound);
  one("mapping inequality", m.mapping_inequality);
  one("mean identity", m.mean_identity);
  one("centralized telescoping", m.telescoping);
  one("iterates in Omega", m.feasibility);
  one("disagreement bound beyond threshold", m.disagreement);
}

}  // namespace

Report verify_lemmas() {
  Report rep;
  // gradient mapping examples
  {
    const auto box = ConstraintSet<double>::box(1, -5.0, 5.0);
    const Eigen::VectorXd x5 = Eigen::VectorXd::Constant(1, 5.0), x4 = Eigen::VectorXd::Constant(1, 4.0);
    const Eigen::VectorXd g = Eigen::VectorXd::Constant(1, -1.0);
    const double s5 = gradient_mapping(x5, g, 0.1, box)(0), s4 = gradient_mapping(x4, g, 0.1, box)(0);
    rep.add("gradient mapping at the active bound is 0", std::abs(s5) <= 1e-12, s5, 0);
    rep.add("gradient mapping with inactive projection equals g", std::abs(s4 + 1.0) <= 1e-12, s4, -1);
  }
  // counterexample runs on G_n'
  for (double beta : {0.5, 0.75}) {
    for (int n : {4, 8}) {
      const auto s = StepSchedule::polynomial(beta);
      CounterexampleConfig cc{n, 1.0 / n, 2.0, 5.0, 20000, AdversaryMode::simulation};
      auto setup = make_counterexample_setup(cc);
      InvariantMonitor<double> mon;
      const double sigma = setup.w.sigma();
      mon.set_disagreement_bound({distance_threshold(s, sigma), 2.0 * c_alpha_prime_bound(s) *
                                                                    setup.problem.lipschitz_bound() *
                                                                    std::sqrt(2.0 * n) / (1.0 - sigma)});
      StepConfig<double> sc;
      sc.selector = adversarial_selector(cc, s);
      RunOptions<double> opts;
      opts.monitor = &mon;
      run(setup.w, setup.problem, s, sc, cc.T, opts);
      add_monitor(rep, "G_" + std::to_string(n) + "' beta=" + format_number(beta), mon);
    }
  }
  // centralized |x| on [-5, 5] from x = 4
  {
    std::vector<LocalFunction<double>> f{LocalFunction<double>::absolute(1.0, 0.0)};
    ProblemInstance<double> p(std::move(f), ConstraintSet<double>::box(1, -5.0, 5.0));
    p.set_known_optimum({Eigen::VectorXd::Zero(1), 0.0});
    InvariantMonitor<double> mon;
    const auto r = centralized_bound_check(p, StepSchedule::polynomial(0.75), 10000, Eigen::VectorXd::Constant(1, 4.0),
                                           &mon);
    add_monitor(rep, "centralized |x|", mon);
    rep.add("centralized |x|: averaged gap within D^2 C_alpha / sum alpha", r.violations == 0, r.max_ratio, 1.0,
            std::to_string(r.checked) + " steps from t=" + std::to_string(r.threshold));
  }
  // quartic elastic net on a box, all three projected variants
  {
    QuarticConfig qc;
    qc.seed = 11;
    auto p = make_quartic_elasticnet<double>(qc);
    const auto w = mixing_matrix<double>(build_standard(Topology::line, qc.n_agents), 0.25);
    const auto s = StepSchedule::polynomial(0.75);
    for (Variant v : {Variant::mix_after_project, Variant::projected_pre_mix, Variant::centralized}) {
      InvariantMonitor<double> mon;
      StepConfig<double> sc;
      sc.variant = v;
      RunOptions<double> opts;
      opts.monitor = &mon;
      opts.initial_point = Eigen::VectorXd::Ones(qc.dimension);
      run(v == Variant::centralized ? MixingMatrix<double>::identity(1) : w, p, s, sc, 5000, opts);
      add_monitor(rep, "quartic " + std::string(to_string(v)), mon);
    }
  }
  return rep;
}

Report verify_counterexample() {
  Report rep;
  {
    const double y2 = y_next(0.0, 1, 0.25);
    rep.add("y(2) = 1/3 at eps=1/4", std::abs(y2 - 1.0 / 3) <= 1e-15, y2, 1.0 / 3);
    const auto c = adversarial_choice(1, 0.0, 0.25);
    rep.add("g_u(1) = 1/6 at eps=1/4", std::abs(c.g_u - 1.0 / 6) <= 1e-15, c.g_u, 1.0 / 6);
  }
  for (auto cfg : {CounterexampleConfig::simulation(4, 0.25, 100000), CounterexampleConfig::strict_proof(4, 0.25, 100000)}) {
    const auto r = verify_equivalence(cfg);
    const std::string tag = "gamma=" + format_number(cfg.gamma) + " a=" + format_number(cfg.a);
    rep.add("solver reproduces y(t), " + tag, r.passed, std::max(r.max_u_abs, r.max_v_diff), 1e-9,
            r.passed ? "" : r.reason + " at t=" + std::to_string(r.first_violation));
    rep.add("projection never active, " + tag, r.max_pre_projection_abs < cfg.a, r.max_pre_projection_abs, cfg.a);
    rep.add("|g_u| <= 17/6, " + tag, r.max_g_u_abs <= 17.0 / 6, r.max_g_u_abs, 17.0 / 6);
  }
  {
    CounterexampleConfig cfg = CounterexampleConfig::simulation(4, 0.25, 1000);
    cfg.a = 0.6;
    const auto r = verify_equivalence(cfg);
    rep.add("a=0.6 trips the projection", !r.passed && r.reason == "projection active", double(r.first_violation), 0,
            "first t=" + std::to_string(r.first_violation));
  }
  for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
    CounterexampleConfig cfg{4, eps, 2.0, 5.0, 1000000, AdversaryMode::simulation};
    const auto tr = y_trajectory(cfg);
    const std::string tag = " (eps=" + format_number(eps) + ")";
    rep.add("y(t) in [0, 2]" + tag, tr.min_y >= 0.0 && tr.max_y <= 2.0, tr.max_y, 2.0);
    rep.add("eps sqrt(t) y(t) <= 2" + tag, tr.max_scaled <= 2.0, tr.max_scaled, 2.0);
    const long t1 = tr.t1_observed.value_or(-1);
    rep.add("eps sqrt(t) y(t) >= 1/16 from t1 <= 1e4" + tag, t1 > 0 && t1 <= 10000, double(t1), 10000);
    bool down = true, up = true, nonneg = true;
    for (std::size_t i = 0; i + 1 < tr.values.size(); ++i) {
      const double y = tr.values[i], yn = tr.values[i + 1];
      const double t = double(i + 1);
      if (y >= 1.0) down = down && yn < y;
      if (y < 1.0) up = up && yn <= y + 0.5 / std::sqrt(t) + 1e-15;
      nonneg = nonneg && yn >= 0.0;
    }
    rep.add("y >= 1 implies y decreases" + tag, down, down, 1);
    rep.add("y < 1 implies increase <= 1/(2 sqrt t)" + tag, up, up, 1);
    rep.add("y(t+1) >= 0" + tag, nonneg, nonneg, 1);
  }
  {
    const auto z = z_bound_check(0.25, 100000);
    rep.add("y <= z and sqrt(t) z <= 2/eps (eps=1/4)", z.ok(), z.max_sqrt_t_z, 8.0);
  }
  return rep;
}

Report verify_suite(const std::string& name) {
  if (name == "schedule") return verify_schedule();
  if (name == "spectral") return verify_spectral();
  if (name == "lemmas") return verify_lemmas();
  if (name == "counterexample") return verify_counterexample();
  if (name == "all") {
    Report rep = verify_schedule();
    rep.append(verify_spectral());
    rep.append(verify_lemmas());
    rep.append(verify_counterexample());
    return rep;
  }
  throw InvalidArgument("unknown suite '" + name + "' (schedule | spectral | lemmas | counterexample | all)");
}

}  // namespace netsub
