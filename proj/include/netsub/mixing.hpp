#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "netsub/error.hpp"
#include "netsub/graph.hpp"

namespace netsub {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct PowerIterationOptions {
  double tolerance = 1e-12;
  long max_iterations = 100000;
};

template <typename Scalar>
struct PowerIterationResult {
  Scalar value;
  long iterations;
  bool converged;
};

/// Largest singular value of W on the complement of the all-ones direction.
///
/// Power iteration on W^T W; the iterate is re-centered every step so the
/// principal (all-ones) singular pair never re-enters. Requires W doubly
/// stochastic so that the complement is invariant under W and W^T.
template <typename Derived>
PowerIterationResult<typename Derived::Scalar> second_singular_value_power(
    const Eigen::MatrixBase<Derived>& w, const PowerIterationOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = w.rows();
  if (n < 2) return {Scalar(0), 0, true};

  // deterministic, generic start vector with zero mean
  VectorX<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::sin(Scalar(1.7) * Scalar(i + 1) + Scalar(0.3));
  v.array() -= v.mean();
  if (v.norm() == Scalar(0)) v(0) = Scalar(1), v(1) = Scalar(-1);
  v.normalize();

  Scalar mu = Scalar(0);
  VectorX<Scalar> mv(n);
  for (long it = 1; it <= opts.max_iterations; ++it) {
    mv.noalias() = w.transpose() * (w * v);
    mv.array() -= mv.mean();
    const Scalar mu_next = v.dot(mv);
    const Scalar norm = mv.norm();
    if (norm == Scalar(0)) return {Scalar(0), it, true};
    const Scalar residual = (mv - mu_next * v).norm();
    v = mv / norm;
    if (std::abs(mu_next - mu) <= Scalar(opts.tolerance) && residual <= Scalar(1e-6)) {
      return {std::sqrt(std::max(mu_next, Scalar(0))), it, true};
    }
    mu = mu_next;
  }
  return {std::sqrt(std::max(mu, Scalar(0))), opts.max_iterations, false};
}

/// Dense reference: spectral norm of W - (1/n) 1 1^T.
template <typename Derived>
typename Derived::Scalar dense_second_singular_value(const Eigen::MatrixBase<Derived>& w) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = w.rows();
  MatrixX<Scalar> centered = w;
  centered.array() -= Scalar(1) / Scalar(n);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(centered);
  return svd.singularValues()(0);
}

/// Eigenvalues of a symmetric matrix, sorted descending.
template <typename Derived>
std::vector<typename Derived::Scalar> dense_eigenvalues(const Eigen::MatrixBase<Derived>& w) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(w, Eigen::EigenvaluesOnly);
  std::vector<Scalar> out(es.eigenvalues().data(), es.eigenvalues().data() + w.rows());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

enum class DiagonalRule { positive, nonnegative };

/// Doubly stochastic mixing matrix with positive diagonal and its cached
/// second-largest singular value. DiagonalRule::nonnegative admits the
/// boundary eps = 1/deg used by the G_n' construction.
template <typename Scalar_ = double>
class MixingMatrix {
 public:
  using Scalar = Scalar_;
  using Matrix = MatrixX<Scalar>;

  /// Validates the entries; sigma is computed by power iteration, with a dense
  /// solve if the iteration fails to converge on a small matrix.
  explicit MixingMatrix(Matrix entries, DiagonalRule rule = DiagonalRule::positive)
      : w_(std::move(entries)), rule_(rule) {
    validate();
    auto pi = second_singular_value_power(w_);
    sigma_ = pi.value;
    if (!pi.converged) {
      if (w_.rows() <= 64) {
        sigma_ = dense_second_singular_value(w_);
      } else {
        throw InvariantViolation("power iteration for sigma did not converge");
      }
    }
  }

  static MixingMatrix identity(Eigen::Index n = 1) { return MixingMatrix(Matrix::Identity(n, n)); }

  const Matrix& entries() const noexcept { return w_; }
  Scalar sigma() const noexcept { return sigma_; }
  Scalar spectral_gap() const noexcept { return Scalar(1) - sigma_; }
  Eigen::Index size() const noexcept { return w_.rows(); }
  bool symmetric() const { return (w_ - w_.transpose()).cwiseAbs().maxCoeff() <= Scalar(0); }
  DiagonalRule diagonal_rule() const noexcept { return rule_; }

 private:
  void validate() const {
    if (w_.rows() != w_.cols() || w_.rows() == 0) throw InvalidArgument("mixing matrix must be square");
    const Scalar tol = Scalar(1e-12);
    if ((w_.array() < Scalar(0)).any()) throw InvalidArgument("mixing matrix has a negative entry");
    if (rule_ == DiagonalRule::positive && (w_.diagonal().array() <= Scalar(0)).any()) {
      throw InvalidArgument("mixing matrix needs a strictly positive diagonal");
    }
    if (((w_.rowwise().sum().array() - Scalar(1)).abs() > tol).any() ||
        ((w_.colwise().sum().array() - Scalar(1)).abs() > tol).any()) {
      throw InvalidArgument("mixing matrix is not doubly stochastic");
    }
  }

  Matrix w_;
  DiagonalRule rule_;
  Scalar sigma_{};
};

/// W_{G,eps}: eps on every edge, 1 - deg(i) eps on the diagonal.
/// Needs eps * max_degree < 1, or <= 1 under DiagonalRule::nonnegative.
template <typename Scalar = double>
MixingMatrix<Scalar> mixing_matrix(const Graph& g, Scalar eps, DiagonalRule rule = DiagonalRule::positive) {
  if (!(eps > Scalar(0))) throw InvalidArgument("eps must be positive");
  const Scalar load = eps * Scalar(g.max_degree());
  const bool ok = rule == DiagonalRule::positive ? load < Scalar(1) : load <= Scalar(1) + Scalar(1e-15);
  if (!ok) {
    throw InvalidArgument(std::string("eps * max_degree must be ") + (rule == DiagonalRule::positive ? "<" : "<=") +
                          " 1 (got eps=" + std::to_string(double(eps)) +
                          ", max_degree=" + std::to_string(g.max_degree()) + ")");
  }
  const int n = g.n_nodes();
  MatrixX<Scalar> w = MatrixX<Scalar>::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    w(i, j) = eps;
    w(j, i) = eps;
  }
  const auto deg = g.degrees();
  for (int i = 0; i < n; ++i) {
    w(i, i) = std::max(Scalar(0), Scalar(1) - Scalar(deg[static_cast<std::size_t>(i)]) * eps);
  }
  return MixingMatrix<Scalar>(std::move(w), rule);
}

template <typename Scalar>
Scalar second_singular_value(const MixingMatrix<Scalar>& w) {
  return w.sigma();
}

/// Closed-form spectrum of W_{G_n',eps}, descending, with multiplicities:
/// 1, 1-2eps, 1-n eps (n-1 times), 1-(n+2) eps (n-1 times).
template <typename Scalar = double>
std::vector<Scalar> gn_prime_spectrum(int n, Scalar eps) {
  if (n < 2) throw InvalidArgument("G_n' needs n >= 2");
  if (!(eps > Scalar(0)) || !(eps * Scalar(n) <= Scalar(1))) {
    throw InvalidArgument("G_n' spectrum needs 0 < eps <= 1/n");
  }
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  out.push_back(Scalar(1));
  out.push_back(Scalar(1) - Scalar(2) * eps);
  for (int k = 0; k < n - 1; ++k) out.push_back(Scalar(1) - Scalar(n) * eps);
  for (int k = 0; k < n - 1; ++k) out.push_back(Scalar(1) - Scalar(n + 2) * eps);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace netsub
