#include "netsub/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "netsub/error.hpp"

namespace netsub {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  std::string buf(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != buf.size()) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + buf + "'");
  }
  return v;
}

long ceil_half(long t) { return (t + 1) / 2; }

}  // namespace

StepSchedule StepSchedule::polynomial(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("polynomial step exponent must lie in (0, 1]");
  return StepSchedule(Kind::polynomial, beta);
}

StepSchedule StepSchedule::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("constant step must be positive");
  return StepSchedule(Kind::constant, c);
}

StepSchedule StepSchedule::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("schedule must be 'poly:<beta>' or 'const:<c>', got '" + std::string(spec) + "'");
  }
  const auto head = spec.substr(0, colon);
  const auto tail = spec.substr(colon + 1);
  if (head == "poly") return polynomial(parse_double(tail, "beta"));
  if (head == "const") return constant(parse_double(tail, "step"));
  throw InvalidArgument("unknown schedule kind '" + std::string(head) + "'");
}

double StepSchedule::alpha(long t) const {
  if (t < 1) throw InvalidArgument("step index must be >= 1 (got " + std::to_string(t) + ")");
  if (kind_ == Kind::constant) return value_;
  const double td = static_cast<double>(t);
  if (value_ == 0.5) return 1.0 / std::sqrt(td);
  if (value_ == 1.0) return 1.0 / td;
  return 1.0 / std::pow(td, value_);
}

std::string StepSchedule::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind_ == Kind::polynomial ? "poly:" : "const:") << value_;
  return os.str();
}

double estimate_c_alpha(const StepSchedule& s, long t_max) {
  if (t_max < 2) throw InvalidArgument("estimate_c_alpha needs t_max >= 2");
  // prefix[k] = sum_{j<=k} alpha(j), extended precision
  std::vector<long double> prefix(static_cast<std::size_t>(t_max) + 1, 0.0L);
  for (long k = 1; k <= t_max; ++k) {
    prefix[static_cast<std::size_t>(k)] = prefix[static_cast<std::size_t>(k - 1)] + s.alpha(k);
  }
  long double best = 0.0L;
  for (long t = 2; t <= t_max; ++t) {
    const long double window =
        prefix[static_cast<std::size_t>(t)] - prefix[static_cast<std::size_t>(ceil_half(t) - 1)];
    if (!(window > 0.0L)) throw std::domain_error("step schedule has an empty tail window");
    best = std::max(best, prefix[static_cast<std::size_t>(t)] / window);
  }
  return static_cast<double>(best);
}

namespace {

double c_prime_over(const StepSchedule& s, long lo, long hi) {
  double best = 0.0;
  for (long t = std::max(lo, 2L); t <= hi; ++t) best = std::max(best, s.alpha(t / 2) / s.alpha(t));
  return best;
}

}  // namespace

double estimate_c_alpha_prime(const StepSchedule& s, long t_max) {
  if (t_max < 2) throw InvalidArgument("estimate_c_alpha_prime needs t_max >= 2");
  return c_prime_over(s, 2, t_max);
}

double asymptotic_c_alpha_prime(const StepSchedule& s, long t_max) {
  if (t_max < 2) throw InvalidArgument("asymptotic_c_alpha_prime needs t_max >= 2");
  return c_prime_over(s, ceil_half(t_max), t_max);
}

double c_alpha_prime_bound(const StepSchedule& s) {
  if (s.kind() == StepSchedule::Kind::constant) return 1.0;
  return std::pow(3.0, s.beta());
}

ScheduleConstants schedule_constants(const StepSchedule& s, long t_max) {
  return {estimate_c_alpha(s, t_max), estimate_c_alpha_prime(s, t_max), s.square_summable(), s.summable()};
}

double tail_sum_squares(const StepSchedule& s, long t, long min_cutoff) {
  if (!s.square_summable()) {
    throw UnsupportedSchedule("tail sum of alpha^2 diverges for schedule " + s.to_string());
  }
  if (t < 2) throw InvalidArgument("tail_sum_squares needs t >= 2");
  const long start = t / 2;
  const long cutoff = std::max(start, min_cutoff);
  long double partial = 0.0L;
  // smallest terms first
  for (long k = cutoff; k >= start; --k) {
    const long double a = s.alpha(k);
    partial += a * a;
  }
  const double p = 2.0 * s.beta();
  const double remainder = std::pow(static_cast<double>(cutoff) + 0.5, 1.0 - p) / (p - 1.0);
  return static_cast<double>(partial) + remainder;
}

long tail_threshold(const StepSchedule& s, double bound) {
  if (!s.square_summable()) throw UnsupportedSchedule("tail threshold needs a square-summable schedule");
  if (std::isinf(bound) && bound > 0) return 2;
  if (!(bound > 0.0)) throw InvalidArgument("tail bound must be positive");
  auto ok = [&](long t) { return tail_sum_squares(s, t) <= bound; };
  long hi = 2;
  while (!ok(hi)) {
    if (hi > std::numeric_limits<long>::max() / 4) throw std::overflow_error("tail threshold overflow");
    hi *= 2;
  }
  long lo = hi / 2;  // ok(lo) false unless hi == 2
  if (hi == 2) return 2;
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

long distance_threshold(const StepSchedule& s, double sigma) {
  if (s.kind() != StepSchedule::Kind::polynomial) {
    throw UnsupportedSchedule("distance threshold is defined for polynomial schedules");
  }
  if (!(sigma >= 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in [0, 1)");
  const double gap = 1.0 - sigma;
  const double c_prime = c_alpha_prime_bound(s);
  const double scale = 2.0 / gap;
  auto h = [&](long t) {
    const double td = static_cast<double>(t);
    return td - scale * std::log(gap * td * s.alpha_max() / (c_prime * s.alpha(t)));
  };
  // h is convex for alpha = t^-beta with minimizer scale * (1 + beta); it is
  // nondecreasing from t0 on.
  const long t0 = std::max(2L, static_cast<long>(std::ceil(scale * (1.0 + s.beta()))));
  if (h(t0) >= 0.0) {
    long t = t0;
    while (t > 2 && h(t - 1) >= 0.0) --t;
    return t;
  }
  long lo = t0, hi = t0;
  while (h(hi) < 0.0) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (h(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

long transient_threshold(const StepSchedule& s, double D, double L, double sigma) {
  if (!s.square_summable()) {
    throw UnsupportedSchedule("transient threshold needs 1/t^beta with beta > 1/2, got " + s.to_string());
  }
  if (!(D > 0.0) || !(L > 0.0)) throw InvalidArgument("D and L must be positive");
  if (!(sigma >= 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in [0, 1)");
  const double bound = std::isinf(D) ? D : D * D * (1.0 - sigma) / (10.0 * c_alpha_prime_bound(s) * L * L);
  return std::max(tail_threshold(s, bound), distance_threshold(s, sigma));
}

long centralized_threshold(const StepSchedule& s, double D, double L) {
  if (!(D > 0.0) || !(L > 0.0)) throw InvalidArgument("D and L must be positive");
  return tail_threshold(s, std::isinf(D) ? D : D * D / (L * L));
}

}  // namespace netsub
