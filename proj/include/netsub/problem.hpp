#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netsub/constraint.hpp"
#include "netsub/local_function.hpp"

namespace netsub {

template <typename Scalar>
struct KnownOptimum {
  VectorX<Scalar> x_star;
  Scalar f_star;
};

/// F(x) = (1/n) sum_i f_i(x) over the constraint set Omega.
template <typename Scalar_ = double>
class ProblemInstance {
 public:
  using Scalar = Scalar_;
  using Vector = VectorX<Scalar>;

  ProblemInstance(std::vector<LocalFunction<Scalar>> locals, ConstraintSet<Scalar> constraint)
      : locals_(std::move(locals)), constraint_(std::move(constraint)) {
    if (locals_.empty()) throw InvalidArgument("problem needs at least one local function");
    for (auto& f : locals_) {
      if (f.dimension() != constraint_.dimension()) throw InvalidArgument("local function dimension mismatch");
      f.set_lipschitz_bound(f.lipschitz_bound_over(constraint_));
    }
  }

  std::size_t n_agents() const noexcept { return locals_.size(); }
  Eigen::Index dimension() const noexcept { return constraint_.dimension(); }
  const std::vector<LocalFunction<Scalar>>& locals() const noexcept { return locals_; }
  const LocalFunction<Scalar>& local(std::size_t i) const { return locals_.at(i); }
  const ConstraintSet<Scalar>& constraint() const noexcept { return constraint_; }
  const std::optional<KnownOptimum<Scalar>>& known_optimum() const noexcept { return optimum_; }

  void set_known_optimum(KnownOptimum<Scalar> opt) { optimum_ = std::move(opt); }

  /// max_i L_i: bounds every local subgradient, and hence every subgradient of F.
  Scalar lipschitz_bound() const {
    Scalar L = Scalar(0);
    for (const auto& f : locals_) L = std::max(L, f.lipschitz_bound());
    return L;
  }
  Scalar diameter() const { return constraint_.diameter(); }

  template <typename Derived>
  Scalar objective(const Eigen::MatrixBase<Derived>& x) const {
    Scalar v = Scalar(0);
    for (const auto& f : locals_) v += f(x);
    return v / Scalar(locals_.size());
  }

  /// (1/n) sum_i g_i(x): a subgradient of F.
  template <typename Derived>
  Vector subgradient(const Eigen::MatrixBase<Derived>& x, TieRule tie = TieRule::sign_positive) const {
    Vector g = Vector::Zero(dimension());
    for (const auto& f : locals_) g += f.subgradient(x, tie);
    return g / Scalar(locals_.size());
  }

 private:
  std::vector<LocalFunction<Scalar>> locals_;
  ConstraintSet<Scalar> constraint_;
  std::optional<KnownOptimum<Scalar>> optimum_;
};

/// u-nodes (indices 0..n-1) carry gamma |x|, v-nodes (n..2n-1) carry
/// (1/2)|x - 1|; Omega = [-a, a]. Minimizer x* = 0 with F* = 1/4 since gamma > 1.
template <typename Scalar = double>
ProblemInstance<Scalar> make_counterexample_problem(int n, Scalar gamma, Scalar a) {
  if (n < 2) throw InvalidArgument("counterexample needs n >= 2");
  if (!(gamma > Scalar(1))) throw InvalidArgument("counterexample needs gamma > 1");
  if (!(a > Scalar(0))) throw InvalidArgument("counterexample needs a > 0");
  std::vector<LocalFunction<Scalar>> locals;
  locals.reserve(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) locals.push_back(LocalFunction<Scalar>::absolute(gamma, Scalar(0)));
  for (int i = 0; i < n; ++i) locals.push_back(LocalFunction<Scalar>::absolute(Scalar(0.5), Scalar(1)));
  ProblemInstance<Scalar> p(std::move(locals), ConstraintSet<Scalar>::box(1, -a, a));
  p.set_known_optimum({VectorX<Scalar>::Zero(1), Scalar(0.25)});
  return p;
}

struct QuarticConfig {
  int n_points = 10;           // K
  int dimension = 2;           // d
  double lambda1 = 1.0;        // l2 weight
  double lambda2 = 1.0 / 20;   // l1 weight
  double noise_std = 1.0 / 5;  // w_i ~ N(0, noise_std^2)
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;  // draw index within an experiment
  int n_agents = 10;
  double box_halfwidth = 1.5;  // Omega = [-h, h]^d
};

/// Generator used for problem draws; recorded in run metadata.
inline constexpr const char* kRngName =
    "std::mt19937_64 seeded by std::seed_seq{seed_lo, seed_hi, stream_lo, stream_hi} + std::normal_distribution<double>";

struct QuarticData {
  Eigen::MatrixXd A;  // K x d
  Eigen::VectorXd b;  // K
};

/// A ~ N(0,1) entrywise, b = A 1 + noise_std * N(0,1); row by row from one stream.
inline QuarticData draw_quartic_data(const QuarticConfig& cfg) {
  if (cfg.n_points < 1 || cfg.dimension < 1) throw InvalidArgument("quartic problem needs K >= 1 and d >= 1");
  std::seed_seq seq{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), std::uint32_t(cfg.stream),
                    std::uint32_t(cfg.stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  QuarticData data{Eigen::MatrixXd(cfg.n_points, cfg.dimension), Eigen::VectorXd(cfg.n_points)};
  for (int k = 0; k < cfg.n_points; ++k) {
    for (int j = 0; j < cfg.dimension; ++j) data.A(k, j) = normal(rng);
    data.b(k) = data.A.row(k).sum() + cfg.noise_std * normal(rng);
  }
  return data;
}

/// Minimizes a convex function over a box by nested golden-section search,
/// one coordinate per nesting level. Exact up to `tol` per coordinate; cost
/// grows like (log(1/tol))^d, so only meant for d <= 3.
template <typename Scalar>
KnownOptimum<Scalar> box_minimize(const std::function<Scalar(const VectorX<Scalar>&)>& f,
                                  const VectorX<Scalar>& lo, const VectorX<Scalar>& hi,
                                  Scalar tol = Scalar(1e-11)) {
  const Eigen::Index d = lo.size();
  if (d > 3) throw InvalidArgument("box_minimize supports d <= 3");
  VectorX<Scalar> x = (lo + hi) / Scalar(2);
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);

  std::function<Scalar(Eigen::Index)> minimize_from = [&](Eigen::Index level) -> Scalar {
    if (level == d) return f(x);
    auto eval = [&](Scalar v) {
      x(level) = v;
      return minimize_from(level + 1);
    };
    Scalar a = lo(level), b = hi(level);
    Scalar c = b - inv_phi * (b - a), e = a + inv_phi * (b - a);
    Scalar fc = eval(c), fe = eval(e);
    while (b - a > tol) {
      if (fc <= fe) {
        b = e, e = c, fe = fc;
        c = b - inv_phi * (b - a);
        fc = eval(c);
      } else {
        a = c, c = e, fc = fe;
        e = a + inv_phi * (b - a);
        fe = eval(e);
      }
    }
    // the box endpoints are candidates too (minimizer may sit on the boundary)
    Scalar best_v = (a + b) / Scalar(2);
    Scalar best = eval(best_v);
    for (Scalar v : {lo(level), hi(level)}) {
      const Scalar fv = eval(v);
      if (fv < best) best = fv, best_v = v;
    }
    x(level) = best_v;
    return best;
  };

  // run once to fix the argmin coordinates level by level
  VectorX<Scalar> arg(d);
  for (Eigen::Index level = 0; level < d; ++level) {
    minimize_from(level);
    arg(level) = x(level);
  }
  x = arg;
  return {arg, f(arg)};
}

/// Local pieces of F(theta) = sum_k (a_k^T theta - b_k)^4 + lambda1 ||theta||_2 + lambda2 ||theta||_1.
///
/// Points are split evenly across agents, remainder to the first agents; each
/// agent also carries 1/n of both regularizers, so (1/n) sum_i f_i equals the
/// expression above divided by n. Omega is the box [-h, h]^d. For d <= 3 a
/// reference optimum is attached.
template <typename Scalar = double>
ProblemInstance<Scalar> make_quartic_elasticnet(const QuarticConfig& cfg, const QuarticData& data) {
  if (cfg.n_agents < 1) throw InvalidArgument("quartic problem needs at least one agent");
  if (!(cfg.box_halfwidth > 0.0)) throw InvalidArgument("box half-width must be positive");
  const int d = cfg.dimension;
  const int n = cfg.n_agents;
  const int base = cfg.n_points / n, rem = cfg.n_points % n;
  std::vector<LocalFunction<Scalar>> locals;
  locals.reserve(static_cast<std::size_t>(n));
  int row = 0;
  for (int i = 0; i < n; ++i) {
    const int count = base + (i < rem ? 1 : 0);
    LocalFunction<Scalar> f(d);
    f.set_quartic(data.A.middleRows(row, count).template cast<Scalar>(),
                  data.b.segment(row, count).template cast<Scalar>());
    f.set_l2(Scalar(cfg.lambda1) / Scalar(n));
    f.set_l1(Scalar(cfg.lambda2) / Scalar(n), VectorX<Scalar>::Zero(d));
    locals.push_back(std::move(f));
    row += count;
  }
  const Scalar h = Scalar(cfg.box_halfwidth);
  ProblemInstance<Scalar> p(std::move(locals), ConstraintSet<Scalar>::box(d, -h, h));
  if (d <= 3) {
    const auto& prob = p;
    auto opt = box_minimize<Scalar>([&prob](const VectorX<Scalar>& x) { return prob.objective(x); },
                                    prob.constraint().lower(), prob.constraint().upper());
    p.set_known_optimum(std::move(opt));
  }
  return p;
}

template <typename Scalar = double>
ProblemInstance<Scalar> make_quartic_elasticnet(const QuarticConfig& cfg) {
  return make_quartic_elasticnet<Scalar>(cfg, draw_quartic_data(cfg));
}

}  // namespace netsub
