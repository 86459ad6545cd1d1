#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netsub/constraint.hpp"
#include "netsub/error.hpp"
#include "netsub/mixing.hpp"
#include "netsub/problem.hpp"
#include "netsub/schedule.hpp"

namespace netsub {

/// Update rules. Row i of x(t) belongs to agent i.
///   pre_mix:             x(t+1) = W x(t) - alpha(t) g(t)
///   projected_pre_mix:   x(t+1) = P[W x(t) - alpha(t) g'(t)],  g' evaluated at W x(t)
///   mix_after_project:   x(t+1) = W P[x(t) - alpha(t) g(t)]
///   centralized:         y(t+1) = P[y(t) - alpha(t) g_F(t)],   single row, W = [1]
enum class Variant { pre_mix, projected_pre_mix, mix_after_project, centralized };

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);

/// Averaging window for x'_alpha(t) = sum_{k=t'}^t alpha(k) xbar(k) / sum_{k=t'}^t alpha(k).
///   full:   t' = 1
///   half:   t' = ceil(t/2), maintained exactly at every t
///   dyadic: t' = largest power of two <= t (restart at powers of two)
enum class WindowRule { full, half, dyadic };

WindowRule parse_window_rule(std::string_view name);
std::string_view to_string(WindowRule w);

/// (x - P[x - alpha g]) / alpha.
template <typename Scalar, typename DX, typename DG>
VectorX<Scalar> gradient_mapping(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DG>& g, Scalar alpha,
                                 const ConstraintSet<Scalar>& omega) {
  if (!(alpha > Scalar(0))) throw InvalidArgument("gradient mapping needs alpha > 0");
  VectorX<Scalar> moved = x - alpha * g;
  return (x - omega.project(moved)) / alpha;
}

template <typename Scalar>
class RunningAverage {
 public:
  using Vector = VectorX<Scalar>;

  RunningAverage(WindowRule rule, Eigen::Index dim)
      : rule_(rule), weighted_sum_(Vector::Zero(dim)) {}

  void add(long t, Scalar alpha, const Vector& xbar) {
    if (rule_ == WindowRule::dyadic && t > 1 && (t & (t - 1)) == 0) {
      weighted_sum_.setZero();
      weight_total_ = Scalar(0);
      history_.clear();
      window_start_ = t;
    }
    weighted_sum_ += alpha * xbar;
    weight_total_ += alpha;
    if (rule_ == WindowRule::half) {
      history_.push_back({alpha, xbar});
      const long start = (t + 1) / 2;
      while (window_start_ < start) {
        const auto& old = history_.front();
        weighted_sum_ -= old.alpha * old.xbar;
        weight_total_ -= old.alpha;
        history_.pop_front();
        ++window_start_;
      }
    }
  }

  Vector average() const { return weighted_sum_ / weight_total_; }
  const Vector& weighted_sum() const noexcept { return weighted_sum_; }
  Scalar weight_total() const noexcept { return weight_total_; }
  long window_start() const noexcept { return window_start_; }
  WindowRule rule() const noexcept { return rule_; }

 private:
  struct Entry {
    Scalar alpha;
    Vector xbar;
  };
  WindowRule rule_;
  Vector weighted_sum_;
  Scalar weight_total_ = Scalar(0);
  long window_start_ = 1;
  std::deque<Entry> history_;
};

template <typename Scalar>
struct SolverState {
  MatrixX<Scalar> x;  // n x d, row i = agent i
  long t = 1;
  RunningAverage<Scalar> average;

  SolverState(MatrixX<Scalar> iterates, WindowRule rule)
      : x(std::move(iterates)), average(rule, x.cols()) {}

  VectorX<Scalar> mean() const { return x.colwise().mean().transpose(); }
  Scalar disagreement() const { return (x.rowwise() - x.colwise().mean()).norm(); }
};

/// Identical rows x_i(1) = x0 for every agent. Throws if x0 is outside Omega.
template <typename Scalar>
SolverState<Scalar> initial_state(const ProblemInstance<Scalar>& p, Variant v, const VectorX<Scalar>& x0,
                                  WindowRule rule = WindowRule::half) {
  if (x0.size() != p.dimension()) throw InvalidArgument("initial point dimension mismatch");
  if (!p.constraint().contains(x0)) throw InvalidArgument("initial point is outside the constraint set");
  const Eigen::Index rows = v == Variant::centralized ? 1 : static_cast<Eigen::Index>(p.n_agents());
  return SolverState<Scalar>(x0.transpose().replicate(rows, 1), rule);
}

template <typename Scalar>
SolverState<Scalar> initial_state(const ProblemInstance<Scalar>& p, Variant v, WindowRule rule = WindowRule::half) {
  return initial_state(p, v, VectorX<Scalar>(VectorX<Scalar>::Zero(p.dimension())), rule);
}

/// Everything one round computed; only filled when requested.
template <typename Scalar>
struct StepTrace {
  long t = 0;
  Scalar alpha{};
  MatrixX<Scalar> points;          // where subgradients were evaluated
  MatrixX<Scalar> g;               // subgradients used
  MatrixX<Scalar> pre_projection;  // argument handed to P_Omega (or the raw update for pre_mix)
  MatrixX<Scalar> s;               // gradient mapping, one row per agent
  MatrixX<Scalar> next;            // x(t+1)
};

/// May overwrite the default subgradients g (same shape as points) before
/// they are used at round t.
template <typename Scalar>
using SubgradientSelector = std::function<void(long t, const MatrixX<Scalar>& points, MatrixX<Scalar>& g)>;

template <typename Scalar>
struct StepConfig {
  Variant variant = Variant::mix_after_project;
  TieRule tie = TieRule::sign_positive;
  SubgradientSelector<Scalar> selector;
};

namespace detail {

template <typename Scalar>
void check_shapes(const SolverState<Scalar>& st, const MixingMatrix<Scalar>& w, const ProblemInstance<Scalar>& p,
                  Variant v) {
  if (st.x.cols() != p.dimension()) throw InvalidArgument("state dimension does not match the problem");
  if (v == Variant::centralized) {
    if (st.x.rows() != 1) throw InvalidArgument("centralized state must have a single row");
    if (w.size() != 1) throw InvalidArgument("centralized runs use the 1x1 identity mixing matrix");
  } else {
    if (st.x.rows() != static_cast<Eigen::Index>(p.n_agents())) {
      throw InvalidArgument("state rows must equal the number of agents");
    }
    if (w.size() != st.x.rows()) throw InvalidArgument("mixing matrix size must equal the number of agents");
  }
}

template <typename Scalar>
MatrixX<Scalar> evaluation_points(const SolverState<Scalar>& st, const MixingMatrix<Scalar>& w, Variant v) {
  if (v == Variant::projected_pre_mix) return w.entries() * st.x;
  return st.x;
}

template <typename Scalar>
MatrixX<Scalar> default_subgradients(const MatrixX<Scalar>& points, const ProblemInstance<Scalar>& p, Variant v,
                                     TieRule tie) {
  MatrixX<Scalar> g(points.rows(), points.cols());
  if (v == Variant::centralized) {
    g.row(0) = p.subgradient(points.row(0).transpose(), tie).transpose();
  } else {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      g.row(i) = p.local(static_cast<std::size_t>(i)).subgradient(points.row(i).transpose(), tie).transpose();
    }
  }
  return g;
}

/// Applies the variant's update given subgradients g at `points`; advances t and the running average.
template <typename Scalar>
void apply_update(SolverState<Scalar>& st, const MixingMatrix<Scalar>& w, const ProblemInstance<Scalar>& p,
                  Scalar alpha, Variant v, const MatrixX<Scalar>& points, const MatrixX<Scalar>& g,
                  StepTrace<Scalar>* trace) {
  const auto& omega = p.constraint();
  st.average.add(st.t, alpha, st.mean());

  MatrixX<Scalar> pre, next, s;
  switch (v) {
    case Variant::pre_mix:
      pre = w.entries() * st.x - alpha * g;
      next = pre;
      if (trace) s = g;
      break;
    case Variant::projected_pre_mix:
    case Variant::centralized:
      pre = points - alpha * g;
      next = pre;
      omega.project_rows(next);
      if (trace) s = (points - next) / alpha;
      break;
    case Variant::mix_after_project: {
      pre = st.x - alpha * g;
      MatrixX<Scalar> projected = pre;
      omega.project_rows(projected);
      s = (st.x - projected) / alpha;
      next = w.entries() * projected;
      // x(t+1) = W [x(t) - alpha s(t)] must reproduce the projected form
      const MatrixX<Scalar> via_mapping = w.entries() * (st.x - alpha * s);
      const Scalar scale = Scalar(1) + st.x.cwiseAbs().maxCoeff() + alpha * g.cwiseAbs().maxCoeff();
      if ((next - via_mapping).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale) {
        throw InvariantViolation("gradient-mapping form disagrees with the projected update at t=" +
                                 std::to_string(st.t));
      }
      break;
    }
  }
  if (trace) {
    trace->t = st.t;
    trace->alpha = alpha;
    trace->points = points;
    trace->g = g;
    trace->pre_projection = pre;
    trace->s = std::move(s);
    trace->next = next;
  }
  st.x = std::move(next);
  ++st.t;
}

}  // namespace detail

/// One synchronous round: every agent evaluates one subgradient and mixes once.
template <typename Scalar>
SolverState<Scalar> step(SolverState<Scalar> state, const MixingMatrix<Scalar>& w, const ProblemInstance<Scalar>& p,
                         const StepSchedule& schedule, const StepConfig<Scalar>& cfg,
                         StepTrace<Scalar>* trace = nullptr) {
  detail::check_shapes(state, w, p, cfg.variant);
  const Scalar alpha = Scalar(schedule.alpha(state.t));
  MatrixX<Scalar> points = detail::evaluation_points(state, w, cfg.variant);
  MatrixX<Scalar> g = detail::default_subgradients(points, p, cfg.variant, cfg.tie);
  if (cfg.selector) {
    cfg.selector(state.t, points, g);
    if (g.rows() != points.rows() || g.cols() != points.cols()) {
      throw InvalidArgument("subgradient selector changed the shape of g");
    }
  }
  detail::apply_update(state, w, p, alpha, cfg.variant, points, g, trace);
  return state;
}

/// Minimum slack of each runtime-checked inequality over a run; a negative
/// slack beyond the tolerance is a violation.
struct InvariantSlack {
  double min_slack = std::numeric_limits<double>::infinity();
  long checks = 0;
  long first_violation = -1;

  void record(double slack, long t, double tol) {
    ++checks;
    if (slack < min_slack) min_slack = slack;
    if (slack < -tol && first_violation < 0) first_violation = t;
  }
  bool ok() const { return first_violation < 0; }
};

/// ||x(t) - 1 xbar(t)||_F <= coefficient * alpha(t) for t >= from_t.
struct DisagreementBound {
  long from_t;
  double coefficient;
};

/// Checks, per round, the inequalities the convergence analysis relies on:
///  - mapping bound: ||s_i|| <= ||g_i|| <= L
///  - mapping inequality: 2 alpha s_i.(x_i - x*) >= 2 alpha (f_i(x_i) - f_i(x*)) - alpha^2 L^2
///  - mean identity (mix_after_project): xbar(t+1) = xbar(t) - alpha sbar(t)
///  - telescoping (centralized): 2 alpha (F(y)-F(x*)) <= |y-x*|^2 - |y+-x*|^2 + L^2 alpha^2
///  - feasibility of x(t+1) for the projected variants
///  - optional disagreement bound
/// The reference point x* is the problem's known optimum; the inequalities
/// hold for any point of Omega, so an approximate optimum is fine.
template <typename Scalar>
class InvariantMonitor {
 public:
  explicit InvariantMonitor(double tolerance = 1e-9) : tol_(tolerance) {}

  void set_disagreement_bound(DisagreementBound b) { distance_ = b; }

  void observe(const StepTrace<Scalar>& tr, const ProblemInstance<Scalar>& p, Variant v) {
    const Scalar L = p.lipschitz_bound();
    const long t = tr.t;
    const Scalar a = tr.alpha;
    const auto& opt = p.known_optimum();

    for (Eigen::Index i = 0; i < tr.s.rows(); ++i) {
      // L bounds subgradients on Omega only; pre_mix points can sit outside it
      if (!p.constraint().contains(tr.points.row(i).transpose(), Scalar(1e-12))) continue;
      const Scalar sn = tr.s.row(i).norm(), gn = tr.g.row(i).norm();
      mapping_bound.record(double(std::min(L - sn, gn - sn)), t, tol_);
    }

    if (opt && (v == Variant::mix_after_project || v == Variant::centralized)) {
      const auto& xs = opt->x_star;
      for (Eigen::Index i = 0; i < tr.s.rows(); ++i) {
        const VectorX<Scalar> xi = tr.points.row(i).transpose();
        Scalar fx, fs;
        if (v == Variant::centralized) {
          fx = p.objective(xi), fs = p.objective(xs);
        } else {
          const auto& f = p.local(static_cast<std::size_t>(i));
          fx = f(xi), fs = f(xs);
        }
        const Scalar lhs = Scalar(2) * a * tr.s.row(i).dot((xi - xs).transpose());
        const Scalar rhs = Scalar(2) * a * (fx - fs) - a * a * L * L;
        mapping_inequality.record(double(lhs - rhs), t, tol_);
      }
    }

    if (v == Variant::mix_after_project) {
      const VectorX<Scalar> lhs = tr.next.colwise().mean().transpose();
      const VectorX<Scalar> rhs = (tr.points.colwise().mean() - a * tr.s.colwise().mean()).transpose();
      const Scalar scale = Scalar(1) + tr.points.cwiseAbs().maxCoeff();
      mean_identity.record(double(Scalar(1e-12) * scale - (lhs - rhs).cwiseAbs().maxCoeff()), t, 0.0);
    }

    if (v == Variant::centralized && opt) {
      const VectorX<Scalar> y = tr.points.row(0).transpose(), y1 = tr.next.row(0).transpose();
      const auto& xs = opt->x_star;
      const Scalar lhs = Scalar(2) * a * (p.objective(y) - p.objective(xs));
      const Scalar rhs = (y - xs).squaredNorm() - (y1 - xs).squaredNorm() + L * L * a * a;
      telescoping.record(double(rhs - lhs), t, tol_);
    }

    if (v != Variant::pre_mix) {
      bool inside = true;
      for (Eigen::Index i = 0; i < tr.next.rows(); ++i) {
        inside = inside && p.constraint().contains(tr.next.row(i).transpose(), Scalar(1e-12));
      }
      feasibility.record(inside ? 0.0 : -1.0, t, 0.0);
    }

    if (distance_ && t >= distance_->from_t && v != Variant::centralized) {
      const Scalar dis = (tr.points.rowwise() - tr.points.colwise().mean()).norm();
      disagreement.record(distance_->coefficient * double(a) - double(dis), t, tol_);
    }
  }

  bool ok() const {
    return mapping_bound.ok() && mapping_inequality.ok() && mean_identity.ok() && telescoping.ok() &&
           feasibility.ok() && disagreement.ok();
  }

  /// Names of the failed checks, comma separated.
  std::string failures() const {
    std::string out;
    auto add = [&](const InvariantSlack& c, const char* name) {
      if (c.ok()) return;
      if (!out.empty()) out += ", ";
      out += std::string(name) + " (t=" + std::to_string(c.first_violation) + ")";
    };
    add(mapping_bound, "mapping_bound");
    add(mapping_inequality, "mapping_inequality");
    add(mean_identity, "mean_identity");
    add(telescoping, "telescoping");
    add(feasibility, "feasibility");
    add(disagreement, "disagreement");
    return out;
  }

  InvariantSlack mapping_bound, mapping_inequality, mean_identity, telescoping, feasibility, disagreement;

 private:
  double tol_;
  std::optional<DisagreementBound> distance_;
};

struct RunRow {
  long t;
  double gap;           // F(xbar(t)) - F*
  double scaled_gap;    // t^{1-beta} gap (gap itself for constant steps)
  double disagreement;  // ||x(t) - 1 xbar(t)||_F
  double s_norm1;       // ||sbar(t)||_1, mean gradient mapping of round t
  double avg_gap;       // F(x'_alpha(t)) - F*
};

struct RunRecord {
  std::vector<RunRow> rows;
};

template <typename Scalar>
struct RunOptions {
  WindowRule window = WindowRule::half;
  std::optional<VectorX<Scalar>> initial_point;
  InvariantMonitor<Scalar>* monitor = nullptr;
  /// Called after every round with the new state and the round's trace.
  std::function<void(const SolverState<Scalar>&, const StepTrace<Scalar>&)> observer;
  /// Full recording up to this many rows; strided plus geometric checkpoints beyond.
  long full_record_limit = 100000;
};

/// Rows recorded for a run of length T: every t when T <= limit, otherwise
/// every ceil(T/limit)-th t, geometric checkpoints (ratio 1.05), and t = T.
inline bool recorded(long t, long T, long limit) {
  if (T <= limit || t == 1 || t == T) return true;
  const long stride = (T + limit - 1) / limit;
  if (t % stride == 0) return true;
  // geometric checkpoints: t where floor(log_{1.05} t) changes
  const double lt = std::log(double(t)) / std::log(1.05);
  const double lp = std::log(double(t - 1)) / std::log(1.05);
  return std::floor(lt) != std::floor(lp);
}

/// Runs T rounds from identical initial rows and records per-round metrics of x(t), t = 1..T.
template <typename Scalar>
RunRecord run(const MixingMatrix<Scalar>& w, const ProblemInstance<Scalar>& p, const StepSchedule& schedule,
              const StepConfig<Scalar>& cfg, long T, const RunOptions<Scalar>& opts = {}) {
  if (T < 1) throw InvalidArgument("run needs T >= 1");
  const VectorX<Scalar> x0 = opts.initial_point ? *opts.initial_point : VectorX<Scalar>::Zero(p.dimension());
  SolverState<Scalar> state = initial_state(p, cfg.variant, x0, opts.window);
  detail::check_shapes(state, w, p, cfg.variant);

  const auto& opt = p.known_optimum();
  const double f_star = opt ? double(opt->f_star) : std::numeric_limits<double>::quiet_NaN();
  const double beta = schedule.kind() == StepSchedule::Kind::polynomial ? schedule.beta() : 1.0;

  RunRecord rec;
  rec.rows.reserve(static_cast<std::size_t>(std::min(T, 2 * opts.full_record_limit + 400)));
  StepTrace<Scalar> trace;
  const bool need_trace = true;
  for (long t = 1; t <= T; ++t) {
    const VectorX<Scalar> xbar = state.mean();
    const double dis = double(state.disagreement());
    state = step(std::move(state), w, p, schedule, cfg, need_trace ? &trace : nullptr);
    if (opts.monitor) opts.monitor->observe(trace, p, cfg.variant);
    if (opts.observer) opts.observer(state, trace);
    if (recorded(t, T, opts.full_record_limit)) {
      const double gap = double(p.objective(xbar)) - f_star;
      const double avg_gap = double(p.objective(state.average.average())) - f_star;
      const double s1 = double(trace.s.colwise().mean().template lpNorm<1>());
      rec.rows.push_back({t, gap, std::pow(double(t), 1.0 - beta) * gap, dis, s1, avg_gap});
    }
  }
  return rec;
}

/// Outcome of iterating until the mean gradient mapping is small.
struct Termination {
  long iterations;
  bool terminated;  // false: cap reached, iterations == cap
};

/// l1 norm of the network-mean gradient mapping at the evaluation points,
/// using the best available subgradient of each l1 term at coordinates
/// within `zero_band` of its kink, with mean entries below `zero_band` read as 0.
///
/// The choice is made jointly on the mean: with base sum B_j and total slack
/// M_j, the l1 contributions add C_j = clamp(-B_j, -M_j, M_j), split across the
/// agents in proportion to their slack. The chosen subgradients go to `chosen`.
template <typename Scalar>
Scalar best_choice_mapping_norm(const MatrixX<Scalar>& points, const ProblemInstance<Scalar>& p, Scalar alpha,
                                Variant v, Scalar zero_band, MatrixX<Scalar>* chosen = nullptr) {
  const Eigen::Index rows = points.rows(), d = points.cols();
  const std::size_t n = p.n_agents();
  MatrixX<Scalar> g(rows, d), radius(rows, d);
  if (v == Variant::centralized) {
    const VectorX<Scalar> y = points.row(0).transpose();
    g.setZero(), radius.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      const auto sl = p.local(i).subgradient_slack(y, zero_band);
      g.row(0) += sl.base.transpose() / Scalar(n);
      radius.row(0) += sl.radius.transpose() / Scalar(n);
    }
  } else {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto sl = p.local(static_cast<std::size_t>(i)).subgradient_slack(points.row(i).transpose(), zero_band);
      g.row(i) = sl.base.transpose();
      radius.row(i) = sl.radius.transpose();
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    const Scalar total = radius.col(j).sum();
    if (total == Scalar(0)) continue;
    const Scalar c = std::clamp(-g.col(j).sum(), -total, total);
    g.col(j) += radius.col(j) * (c / total);
  }
  VectorX<Scalar> mean_s = VectorX<Scalar>::Zero(d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    mean_s += gradient_mapping(points.row(i).transpose(), g.row(i).transpose(), alpha, p.constraint());
  }
  mean_s /= Scalar(rows);
  Scalar norm = Scalar(0);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (std::abs(mean_s(j)) >= zero_band) norm += std::abs(mean_s(j));
  }
  if (chosen) *chosen = std::move(g);
  return norm;
}

/// Iterations until best_choice_mapping_norm < threshold, checked at each
/// x(t) before round t runs. The round then uses the same best-choice
/// subgradients, so the measured s(t) is the mapping of the step actually
/// taken. For the centralized method one iteration is one full subgradient of F.
template <typename Scalar>
Termination terminate_on_mapping(const MixingMatrix<Scalar>& w, const ProblemInstance<Scalar>& p,
                                 const StepSchedule& schedule, Variant v, Scalar threshold, Scalar zero_band,
                                 long cap, const std::optional<VectorX<Scalar>>& initial_point = std::nullopt) {
  if (!(threshold > Scalar(0))) throw InvalidArgument("termination threshold must be positive");
  if (cap < 1) throw InvalidArgument("iteration cap must be >= 1");
  if (v == Variant::pre_mix || v == Variant::projected_pre_mix) {
    throw InvalidArgument("terminate_on_mapping supports mix_after_project and centralized");
  }
  const VectorX<Scalar> x0 = initial_point ? *initial_point : VectorX<Scalar>::Zero(p.dimension());
  SolverState<Scalar> state = initial_state(p, v, x0, WindowRule::full);
  detail::check_shapes(state, w, p, v);
  MatrixX<Scalar> g;
  for (long t = 1; t <= cap; ++t) {
    const Scalar alpha = Scalar(schedule.alpha(t));
    if (best_choice_mapping_norm(state.x, p, alpha, v, zero_band, &g) < threshold) return {t, true};
    detail::apply_update(state, w, p, alpha, v, state.x, g, static_cast<StepTrace<Scalar>*>(nullptr));
  }
  return {cap, false};
}

}  // namespace netsub
