#pragma once

#include "netsub/error.hpp"

#include <string>
#include <string_view>

namespace netsub {

/// Step sizes alpha(t), t = 1, 2, ...: either 1/t^beta or a constant.
class StepSchedule {
 public:
  enum class Kind { polynomial, constant };

  static StepSchedule polynomial(double beta);
  static StepSchedule constant(double c);
  /// "poly:<beta>" or "const:<c>".
  static StepSchedule parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  double beta() const noexcept { return kind_ == Kind::polynomial ? value_ : 0.0; }
  double constant_value() const noexcept { return kind_ == Kind::constant ? value_ : 0.0; }
  double alpha_max() const { return alpha(1); }
  double alpha(long t) const;

  bool square_summable() const noexcept { return kind_ == Kind::polynomial && value_ > 0.5; }
  bool summable() const noexcept { return false; }

  std::string to_string() const;

 private:
  StepSchedule(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

inline double alpha(const StepSchedule& s, long t) { return s.alpha(t); }

struct ScheduleConstants {
  double c_alpha;
  double c_alpha_prime;
  bool square_summable;
  bool summable;
};

/// max over t in [2, t_max] of sum_{k<=t} alpha(k) / sum_{k=ceil(t/2)}^{t} alpha(k).
double estimate_c_alpha(const StepSchedule& s, long t_max);

/// max over t in [2, t_max] of alpha(floor(t/2)) / alpha(t).
double estimate_c_alpha_prime(const StepSchedule& s, long t_max);

/// Same ratio restricted to t in [ceil(t_max/2), t_max]; tracks the limit
/// 2^beta for polynomial schedules, which the full-range maximum (attained at
/// t = 3) does not.
double asymptotic_c_alpha_prime(const StepSchedule& s, long t_max);

/// sup over all t >= 2 of alpha(floor(t/2)) / alpha(t), in closed form:
/// 3^beta for 1/t^beta, 1 for a constant schedule.
double c_alpha_prime_bound(const StepSchedule& s);

ScheduleConstants schedule_constants(const StepSchedule& s, long t_max);

/// Certified upper bound on sum_{k=floor(t/2)}^{inf} alpha(k)^2.
///
/// Exact partial sum from floor(t/2) to cutoff = max(floor(t/2), min_cutoff), then the remainder
/// sum_{k>cutoff} k^{-2 beta} <= int_{cutoff+1/2}^{inf} u^{-2 beta} du
/// (midpoint bound, valid since u^{-2 beta} is convex).
double tail_sum_squares(const StepSchedule& s, long t, long min_cutoff = 10000);

/// Smallest t >= 2 from which sum_{k>=floor(t/2)} alpha^2 <= bound holds.
long tail_threshold(const StepSchedule& s, double bound);

/// Smallest t from which t >= (2/(1-sigma)) log((1-sigma) t alpha_max / (C' alpha(t)))
/// holds for every later t as well. C' = c_alpha_prime_bound(s).
long distance_threshold(const StepSchedule& s, double sigma);

/// Transient after which the network-independent bound applies: both the
/// tail condition sum alpha^2 <= D^2 (1-sigma) / (10 C' L^2) and the
/// distance_threshold condition hold from this t on. D may be +inf.
long transient_threshold(const StepSchedule& s, double D, double L, double sigma);

/// Threshold for the centralized bound: sum_{k>=floor(t/2)} alpha^2 <= D^2/L^2.
long centralized_threshold(const StepSchedule& s, double D, double L);

}  // namespace netsub
