#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "netsub/constraint.hpp"
#include "netsub/error.hpp"
#include "netsub/mixing.hpp"

namespace netsub {

/// Selection among subgradients at a kink of an absolute-value term.
enum class TieRule {
  sign_positive,  ///< sign(0) = +1
  zero,           ///< 0, the minimum-norm element
};

/// sign(x) with sign(0) = +1.
template <typename Scalar>
constexpr Scalar sign_nonneg(Scalar x) {
  return x >= Scalar(0) ? Scalar(1) : Scalar(-1);
}

/// Subgradient split at near-kink coordinates: the full subdifferential of the
/// l1 term there is base_j + [-radius_j, radius_j].
template <typename Scalar>
struct SubgradientSlack {
  VectorX<Scalar> base;
  VectorX<Scalar> radius;
};

/// Convex function on R^d of the form
///
///   f(x) = sum_k (a_k^T x - b_k)^4 + l2_weight ||x||_2 + l1_weight ||x - l1_center||_1.
///
/// This covers both the absolute-value objectives of the G_n' construction
/// (no quartic rows, d = 1) and the local pieces of the quartic elastic-net
/// problem.
template <typename Scalar_ = double>
class LocalFunction {
 public:
  using Scalar = Scalar_;
  using Vector = VectorX<Scalar>;
  using Matrix = MatrixX<Scalar>;

  explicit LocalFunction(Eigen::Index dim)
      : quartic_rows_(0, dim), quartic_targets_(0), l1_center_(Vector::Zero(dim)) {}

  /// weight * |x - center| on R.
  static LocalFunction absolute(Scalar weight, Scalar center = Scalar(0)) {
    LocalFunction f(1);
    f.set_l1(weight, Vector::Constant(1, center));
    return f;
  }

  void set_quartic(Matrix rows, Vector targets) {
    if (rows.rows() != targets.size() || rows.cols() != dimension()) {
      throw InvalidArgument("quartic data shape mismatch");
    }
    quartic_rows_ = std::move(rows);
    quartic_targets_ = std::move(targets);
  }
  void set_l2(Scalar weight) {
    if (weight < Scalar(0)) throw InvalidArgument("l2 weight must be nonnegative");
    l2_weight_ = weight;
  }
  void set_l1(Scalar weight, Vector center) {
    if (weight < Scalar(0)) throw InvalidArgument("l1 weight must be nonnegative");
    if (center.size() != dimension()) throw InvalidArgument("l1 center dimension mismatch");
    l1_weight_ = weight;
    l1_center_ = std::move(center);
  }
  void set_lipschitz_bound(Scalar L) { lipschitz_ = L; }

  Eigen::Index dimension() const noexcept { return l1_center_.size(); }
  const Matrix& quartic_rows() const noexcept { return quartic_rows_; }
  const Vector& quartic_targets() const noexcept { return quartic_targets_; }
  Scalar l2_weight() const noexcept { return l2_weight_; }
  Scalar l1_weight() const noexcept { return l1_weight_; }
  const Vector& l1_center() const noexcept { return l1_center_; }
  Scalar lipschitz_bound() const noexcept { return lipschitz_; }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x) const {
    Scalar v = Scalar(0);
    if (quartic_rows_.rows() > 0) {
      v += ((quartic_rows_ * x - quartic_targets_).array().square().square()).sum();
    }
    if (l2_weight_ != Scalar(0)) v += l2_weight_ * x.norm();
    if (l1_weight_ != Scalar(0)) v += l1_weight_ * (x - l1_center_).template lpNorm<1>();
    return v;
  }

  /// Gradient of the quartic part plus the l2 term (zero at the origin).
  template <typename Derived>
  Vector smooth_part_gradient(const Eigen::MatrixBase<Derived>& x) const {
    Vector g = Vector::Zero(dimension());
    if (quartic_rows_.rows() > 0) {
      Vector r = quartic_rows_ * x - quartic_targets_;
      g.noalias() += quartic_rows_.transpose() * (Scalar(4) * r.array().cube()).matrix();
    }
    if (l2_weight_ != Scalar(0)) {
      const Scalar nx = x.norm();
      if (nx > Scalar(0)) g += (l2_weight_ / nx) * x;
    }
    return g;
  }

  template <typename Derived>
  Vector subgradient(const Eigen::MatrixBase<Derived>& x, TieRule tie = TieRule::sign_positive) const {
    Vector g = smooth_part_gradient(x);
    if (l1_weight_ != Scalar(0)) {
      for (Eigen::Index j = 0; j < dimension(); ++j) {
        const Scalar off = x(j) - l1_center_(j);
        if (off == Scalar(0) && tie == TieRule::zero) continue;
        g(j) += l1_weight_ * sign_nonneg(off);
      }
    }
    return g;
  }

  /// Coordinates within `band` of the l1 kink get their l1 contribution moved
  /// into `radius`; elsewhere the l1 term enters `base` with its sign.
  template <typename Derived>
  SubgradientSlack<Scalar> subgradient_slack(const Eigen::MatrixBase<Derived>& x, Scalar band) const {
    SubgradientSlack<Scalar> out{smooth_part_gradient(x), Vector::Zero(dimension())};
    if (l1_weight_ != Scalar(0)) {
      for (Eigen::Index j = 0; j < dimension(); ++j) {
        const Scalar off = x(j) - l1_center_(j);
        if (std::abs(off) < band) {
          out.radius(j) = l1_weight_;
        } else {
          out.base(j) += l1_weight_ * sign_nonneg(off);
        }
      }
    }
    return out;
  }

  /// Upper bound on ||g||_2 over every subgradient at every point of `omega`.
  Scalar lipschitz_bound_over(const ConstraintSet<Scalar>& omega) const {
    Scalar bound = l2_weight_ + l1_weight_ * std::sqrt(Scalar(dimension()));
    if (quartic_rows_.rows() == 0) return bound;
    if (omega.kind() == ConstraintSet<Scalar>::Kind::unconstrained) {
      return std::numeric_limits<Scalar>::infinity();
    }
    Vector mid, half;
    if (omega.kind() == ConstraintSet<Scalar>::Kind::box) {
      mid = (omega.lower() + omega.upper()) / Scalar(2);
      half = (omega.upper() - omega.lower()) / Scalar(2);
    }
    for (Eigen::Index k = 0; k < quartic_rows_.rows(); ++k) {
      const auto a = quartic_rows_.row(k);
      Scalar max_resid;
      if (omega.kind() == ConstraintSet<Scalar>::Kind::box) {
        max_resid = std::abs(a.dot(mid) - quartic_targets_(k)) + a.cwiseAbs().dot(half);
      } else {
        max_resid = std::abs(a.dot(omega.center()) - quartic_targets_(k)) + a.norm() * omega.radius();
      }
      bound += Scalar(4) * max_resid * max_resid * max_resid * a.norm();
    }
    return bound;
  }

 private:
  Matrix quartic_rows_;
  Vector quartic_targets_;
  Scalar l2_weight_ = Scalar(0);
  Scalar l1_weight_ = Scalar(0);
  Vector l1_center_;
  Scalar lipschitz_ = std::numeric_limits<Scalar>::infinity();
};

template <typename Scalar, typename Derived>
VectorX<Scalar> subgradient(const LocalFunction<Scalar>& f, const Eigen::MatrixBase<Derived>& x,
                           TieRule tie = TieRule::sign_positive) {
  return f.subgradient(x, tie);
}

}  // namespace netsub
