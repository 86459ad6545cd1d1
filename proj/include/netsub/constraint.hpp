#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "netsub/error.hpp"
#include "netsub/mixing.hpp"

namespace netsub {

/// Closed convex set with a Euclidean projection: all of R^d, a box, or a ball.
template <typename Scalar_ = double>
class ConstraintSet {
 public:
  using Scalar = Scalar_;
  using Vector = VectorX<Scalar>;
  enum class Kind { unconstrained, box, ball };

  static ConstraintSet unconstrained(Eigen::Index dim) {
    ConstraintSet c(Kind::unconstrained, dim);
    return c;
  }

  static ConstraintSet box(Vector lo, Vector hi) {
    if (lo.size() != hi.size() || lo.size() == 0) throw InvalidArgument("box bounds must share a positive dimension");
    if ((lo.array() > hi.array()).any()) throw InvalidArgument("box lower bound exceeds upper bound");
    ConstraintSet c(Kind::box, lo.size());
    c.lo_ = std::move(lo);
    c.hi_ = std::move(hi);
    return c;
  }

  /// [lo, hi]^dim
  static ConstraintSet box(Eigen::Index dim, Scalar lo, Scalar hi) {
    return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
  }

  static ConstraintSet ball(Vector center, Scalar radius) {
    if (!(radius > Scalar(0))) throw InvalidArgument("ball radius must be positive");
    ConstraintSet c(Kind::ball, center.size());
    c.center_ = std::move(center);
    c.radius_ = radius;
    return c;
  }

  Kind kind() const noexcept { return kind_; }
  Eigen::Index dimension() const noexcept { return dim_; }
  const Vector& lower() const noexcept { return lo_; }
  const Vector& upper() const noexcept { return hi_; }
  const Vector& center() const noexcept { return center_; }
  Scalar radius() const noexcept { return radius_; }

  Scalar diameter() const {
    switch (kind_) {
      case Kind::unconstrained: return std::numeric_limits<Scalar>::infinity();
      case Kind::box: return (hi_ - lo_).norm();
      case Kind::ball: return Scalar(2) * radius_;
    }
    return Scalar(0);
  }

  template <typename Derived>
  Vector project(const Eigen::MatrixBase<Derived>& x) const {
    switch (kind_) {
      case Kind::unconstrained: return x;
      case Kind::box: return x.cwiseMax(lo_).cwiseMin(hi_);
      case Kind::ball: {
        Vector offset = x - center_;
        const Scalar r = offset.norm();
        if (r <= radius_) return x;
        return center_ + offset * (radius_ / r);
      }
    }
    return x;
  }

  /// Projects every row of an n x d matrix in place.
  template <typename Derived>
  void project_rows(Eigen::MatrixBase<Derived>& rows) const {
    if (kind_ == Kind::unconstrained) return;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      rows.row(i) = project(rows.row(i).transpose()).transpose();
    }
  }

  /// True if some coordinate of the projection differs from x (the set boundary was hit).
  template <typename Derived>
  bool projection_active(const Eigen::MatrixBase<Derived>& x) const {
    switch (kind_) {
      case Kind::unconstrained: return false;
      case Kind::box: return (x.array() < lo_.array()).any() || (x.array() > hi_.array()).any();
      case Kind::ball: return (x - center_).norm() > radius_;
    }
    return false;
  }

  /// Strictly inside the set (box: open box; ball: open ball).
  template <typename Derived>
  bool interior(const Eigen::MatrixBase<Derived>& x) const {
    switch (kind_) {
      case Kind::unconstrained: return true;
      case Kind::box: return (x.array() > lo_.array()).all() && (x.array() < hi_.array()).all();
      case Kind::ball: return (x - center_).norm() < radius_;
    }
    return false;
  }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x, Scalar tol = Scalar(0)) const {
    switch (kind_) {
      case Kind::unconstrained: return x.allFinite();
      case Kind::box:
        return (x.array() >= lo_.array() - tol).all() && (x.array() <= hi_.array() + tol).all();
      case Kind::ball: return (x - center_).norm() <= radius_ + tol;
    }
    return false;
  }

 private:
  ConstraintSet(Kind kind, Eigen::Index dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  Eigen::Index dim_;
  Vector lo_, hi_, center_;
  Scalar radius_{0};
};

template <typename Scalar, typename Derived>
VectorX<Scalar> project(const ConstraintSet<Scalar>& c, const Eigen::MatrixBase<Derived>& x) {
  return c.project(x);
}

}  // namespace netsub
