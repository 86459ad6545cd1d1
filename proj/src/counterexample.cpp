#include "netsub/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace netsub {

void CounterexampleConfig::validate() const {
  if (n < 4) throw InvalidArgument("counterexample needs n >= 4");
  if (!(eps > 0.0) || eps > 0.25) throw InvalidArgument("counterexample needs eps in (0, 1/4]");
  if (eps * n > 1.0 + 1e-15) throw InvalidArgument("counterexample needs eps <= 1/n");
  if (!(gamma > 1.0)) throw InvalidArgument("counterexample needs gamma > 1");
  if (!(a > 0.0)) throw InvalidArgument("counterexample needs a > 0");
  if (mode == AdversaryMode::strict_proof && a < 3.0 + gamma) {
    throw InvalidArgument("strict-proof mode needs a >= 3 + gamma");
  }
  if (T < 1) throw InvalidArgument("counterexample needs T >= 1");
}

double y_next(double y, long t, double eps) {
  const double st = std::sqrt(double(t));
  const double sg = sign_plus(y - 1.0);
  const double delta = (eps * st * y - 0.5 * eps * sg) / (1.0 - eps);
  return (1.0 - eps) * y - (0.5 * (1.0 - eps) * sg + eps * delta) / st;
}

double y_next_alpha(double y, double alpha, double eps) {
  const double gv = 0.5 * sign_plus(y - 1.0);
  const double gu = (eps * y / alpha - eps * gv) / (1.0 - eps);
  return (1.0 - eps) * y - alpha * ((1.0 - eps) * gv + eps * gu);
}

YTrajectory y_trajectory(const CounterexampleConfig& cfg) {
  if (!(cfg.eps > 0.0) || cfg.eps >= 1.0) throw InvalidArgument("y_trajectory needs eps in (0, 1)");
  if (cfg.T < 1) throw InvalidArgument("y_trajectory needs T >= 1");
  YTrajectory out;
  out.values.resize(static_cast<std::size_t>(cfg.T));
  double y = 0.0;
  for (long t = 1; t <= cfg.T; ++t) {
    out.values[static_cast<std::size_t>(t - 1)] = y;
    if (t < cfg.T) y = y_next(y, t, cfg.eps);
  }
  out.max_y = *std::max_element(out.values.begin(), out.values.end());
  out.min_y = *std::min_element(out.values.begin(), out.values.end());
  for (long t = 1; t <= cfg.T; ++t) {
    const double scaled = cfg.eps * std::sqrt(double(t)) * out.values[static_cast<std::size_t>(t - 1)];
    out.max_scaled = std::max(out.max_scaled, scaled);
  }
  // smallest t* with eps sqrt(t) y(t) >= 1/16 on all of [t*, T]
  long t1 = -1;
  for (long t = cfg.T; t >= 1; --t) {
    const double scaled = cfg.eps * std::sqrt(double(t)) * out.values[static_cast<std::size_t>(t - 1)];
    if (scaled < 1.0 / 16) break;
    t1 = t;
  }
  if (t1 > 0 && cfg.T > 1) out.t1_observed = t1;
  return out;
}

AdversarialChoice adversarial_choice(long t, double y, double eps, double alpha, double gamma) {
  if (!(alpha > 0.0)) throw InvalidArgument("adversarial choice needs alpha > 0");
  const double gv = 0.5 * sign_plus(y - 1.0);
  const double gu = (eps * y / alpha - eps * gv) / (1.0 - eps);
  if (std::abs(gu) > gamma) {
    throw InvalidAdversary("adversarial g_u = " + std::to_string(gu) + " exceeds gamma = " + std::to_string(gamma) +
                               " at t=" + std::to_string(t),
                           t);
  }
  return {gu, gv};
}

SubgradientSelector<double> adversarial_selector(const CounterexampleConfig& cfg, const StepSchedule& schedule) {
  const int n = cfg.n;
  const double eps = cfg.eps, gamma = cfg.gamma;
  return [n, eps, gamma, schedule](long t, const MatrixX<double>& points, MatrixX<double>& g) {
    if (points.rows() != 2 * n || points.cols() != 1) throw InvalidArgument("adversarial selector expects 2n x 1 rows");
    const double alpha = schedule.alpha(t);
    for (int i = 0; i < n; ++i) {
      const auto u = static_cast<Eigen::Index>(gn_prime_u(i));
      const auto v = static_cast<Eigen::Index>(gn_prime_v(n, i));
      // g_u is only a subgradient of gamma|x| while the u-row sits at the kink
      if (std::abs(points(u, 0)) > 1e-9) {
        throw InvalidAdversary("u-row left the kink of gamma|x| at t=" + std::to_string(t), t);
      }
      const auto choice = adversarial_choice(t, points(v, 0), eps, alpha, gamma);
      g(u, 0) = choice.g_u;
      g(v, 0) = choice.g_v;
    }
  };
}

ZBoundReport z_bound_check(double eps, long T) {
  if (!(eps > 0.0) || eps >= 1.0) throw InvalidArgument("z_bound_check needs eps in (0, 1)");
  ZBoundReport rep;
  double y = 0.0, z = 0.0;
  for (long t = 1; t <= T; ++t) {
    const double sz = std::sqrt(double(t)) * z;
    rep.max_sqrt_t_z = std::max(rep.max_sqrt_t_z, sz);
    const bool dom = y <= z + 1e-15;
    const bool bnd = sz <= 2.0 / eps;
    if ((!dom || !bnd) && rep.first_violation < 0) rep.first_violation = t;
    rep.dominance = rep.dominance && dom;
    rep.bound = rep.bound && bnd;
    y = y_next(y, t, eps);
    z = (1.0 - eps) * z + 0.5 / std::sqrt(double(t));
  }
  return rep;
}

CounterexampleSetup make_counterexample_setup(const CounterexampleConfig& cfg) {
  cfg.validate();
  Graph g = build_gn_prime(cfg.n);
  auto w = mixing_matrix<double>(g, cfg.eps, DiagonalRule::nonnegative);
  auto p = make_counterexample_problem<double>(cfg.n, cfg.gamma, cfg.a);
  return {std::move(g), std::move(w), std::move(p)};
}

EquivalenceReport verify_equivalence(const CounterexampleConfig& cfg, const StepSchedule& schedule,
                                     const std::function<void(long, double, double)>& on_step,
                                     InvariantMonitor<double>* monitor) {
  auto setup = make_counterexample_setup(cfg);
  const int n = cfg.n;
  const bool sqrt_steps = schedule.kind() == StepSchedule::Kind::polynomial && schedule.beta() == 0.5;
  StepConfig<double> sc;
  sc.variant = Variant::mix_after_project;
  sc.selector = adversarial_selector(cfg, schedule);

  EquivalenceReport rep;
  auto fail = [&rep](long t, std::string why) {
    if (rep.passed) {
      rep.passed = false;
      rep.first_violation = t;
      rep.reason = std::move(why);
    }
  };

  SolverState<double> state = initial_state(setup.problem, sc.variant);
  StepTrace<double> trace;
  double y = 0.0;
  for (long t = 1; t <= cfg.T; ++t) {
    double u_abs = 0.0, v_diff = 0.0;
    for (int i = 0; i < n; ++i) {
      u_abs = std::max(u_abs, std::abs(state.x(gn_prime_u(i), 0)));
      v_diff = std::max(v_diff, std::abs(state.x(gn_prime_v(n, i), 0) - y));
    }
    rep.max_u_abs = std::max(rep.max_u_abs, u_abs);
    rep.max_v_diff = std::max(rep.max_v_diff, v_diff);
    if (u_abs > 1e-9) fail(t, "u-row away from 0");
    if (v_diff > 1e-9) fail(t, "v-row differs from y(t)");
    if (on_step) on_step(t, y, state.x(gn_prime_v(n, 0), 0));
    if (t == cfg.T || !rep.passed) break;

    state = step(std::move(state), setup.w, setup.problem, schedule, sc, &trace);
    if (monitor) monitor->observe(trace, setup.problem, sc.variant);
    const double pre = trace.pre_projection.cwiseAbs().maxCoeff();
    rep.max_pre_projection_abs = std::max(rep.max_pre_projection_abs, pre);
    rep.max_g_u_abs = std::max(rep.max_g_u_abs, trace.g.topRows(n).cwiseAbs().maxCoeff());
    if (!(pre < cfg.a)) {
      fail(t, "projection active");  // the adversary is no longer defined past this point
      break;
    }
    y = sqrt_steps ? y_next(y, t, cfg.eps) : y_next_alpha(y, schedule.alpha(t), cfg.eps);
  }
  return rep;
}

}  // namespace netsub
