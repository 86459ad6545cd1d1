#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "netsub/schedule.hpp"

using namespace netsub;

TEST_CASE("polynomial and constant steps") {
  const auto s = StepSchedule::polynomial(0.5);
  CHECK(s.alpha(1) == 1.0);
  CHECK(s.alpha(4) == 0.5);
  CHECK(s.alpha_max() == 1.0);
  CHECK(StepSchedule::polynomial(1.0).alpha(8) == 0.125);
  CHECK(StepSchedule::polynomial(0.75).alpha(16) == doctest::Approx(0.125).epsilon(1e-15));
  const auto c = StepSchedule::constant(0.01);
  CHECK(c.alpha(1) == 0.01);
  CHECK(c.alpha(1000000) == 0.01);
  CHECK_FALSE(c.square_summable());
  CHECK(StepSchedule::polynomial(0.75).square_summable());
  CHECK_FALSE(StepSchedule::polynomial(0.5).square_summable());
  CHECK_THROWS_AS(s.alpha(0), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::polynomial(0.0), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::polynomial(1.5), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::constant(-1.0), InvalidArgument);
}

TEST_CASE("schedule spec strings") {
  CHECK(StepSchedule::parse("poly:0.75").beta() == 0.75);
  CHECK(StepSchedule::parse("const:0.1").constant_value() == 0.1);
  CHECK_THROWS_AS(StepSchedule::parse("exp:2"), InvalidArgument);
  CHECK(StepSchedule::parse(StepSchedule::polynomial(0.6).to_string()).beta() == 0.6);
}

TEST_CASE("alpha is positive and nonincreasing") {
  for (double beta : {0.5, 0.6, 0.75, 0.9, 1.0}) {
    const auto s = StepSchedule::polynomial(beta);
    for (long t = 1; t < 20000; ++t) {
      REQUIRE(s.alpha(t + 1) > 0.0);
      REQUIRE(s.alpha(t + 1) <= s.alpha(t));
    }
  }
}

// reference values from long-double prefix sums computed separately
TEST_CASE("C_alpha estimates") {
  CHECK(estimate_c_alpha(StepSchedule::polynomial(0.5), 1000000) == doctest::Approx(3.4117185215096137).epsilon(1e-9));
  CHECK(estimate_c_alpha(StepSchedule::polynomial(0.75), 1000000) == doctest::Approx(6.114215501297381).epsilon(1e-9));
  CHECK(estimate_c_alpha(StepSchedule::polynomial(0.9), 1000000) == doctest::Approx(11.395547143563459).epsilon(1e-9));
  // sup over t is 1/(1 - 2^{beta-1}), approached from below
  for (double beta : {0.5, 0.75, 0.9}) {
    CHECK(estimate_c_alpha(StepSchedule::polynomial(beta), 100000) < 1.0 / (1.0 - std::pow(2.0, beta - 1.0)));
  }
  // constant steps: t / (t - ceil(t/2) + 1), largest at t = 999
  CHECK(estimate_c_alpha(StepSchedule::constant(0.3), 1000) == doctest::Approx(1.998).epsilon(1e-12));
}

TEST_CASE("C_alpha' estimates") {
  for (double beta : {0.5, 0.75, 0.9}) {
    const auto s = StepSchedule::polynomial(beta);
    // floor(t/2) makes t = 3 the worst case: alpha(1)/alpha(3) = 3^beta
    CHECK(estimate_c_alpha_prime(s, 1000000) == doctest::Approx(std::pow(3.0, beta)).epsilon(1e-14));
    CHECK(c_alpha_prime_bound(s) == doctest::Approx(std::pow(3.0, beta)).epsilon(1e-14));
    CHECK(std::abs(asymptotic_c_alpha_prime(s, 1000000) - std::pow(2.0, beta)) < 1e-3);
  }
  CHECK(c_alpha_prime_bound(StepSchedule::constant(2.0)) == 1.0);
}

// mpmath Hurwitz zeta values
TEST_CASE("tail sums of alpha^2") {
  const double z32 = 2.612375348685488;  // sum_{k>=1} k^{-3/2}
  CHECK(tail_sum_squares(StepSchedule::polynomial(0.75), 2) == doctest::Approx(z32).epsilon(1e-9));
  CHECK(tail_sum_squares(StepSchedule::polynomial(0.75), 3) == doctest::Approx(z32).epsilon(1e-9));
  CHECK(tail_sum_squares(StepSchedule::polynomial(1.0), 200) ==
        doctest::Approx(0.010050166663333571).epsilon(1e-9));
  CHECK(tail_sum_squares(StepSchedule::polynomial(0.75), 100) ==
        doctest::Approx(0.28426399669242219).epsilon(1e-9));
  CHECK(tail_sum_squares(StepSchedule::polynomial(0.9), 10) ==
        doctest::Approx(0.37417123608408877).epsilon(1e-9));
  // certified: never below the true value
  CHECK(tail_sum_squares(StepSchedule::polynomial(0.75), 100) >= 0.28426399669242219);
  // the exact part has a fixed length, so huge t stays cheap
  const double big = tail_sum_squares(StepSchedule::polynomial(0.75), 2000000000000L);
  CHECK(big == doctest::Approx(2.0 / std::sqrt(1e12)).epsilon(1e-6));
  CHECK_THROWS_AS(tail_sum_squares(StepSchedule::polynomial(0.5), 10), UnsupportedSchedule);
  CHECK_THROWS_AS(tail_sum_squares(StepSchedule::constant(1.0), 10), UnsupportedSchedule);
}

TEST_CASE("tail thresholds") {
  CHECK(tail_threshold(StepSchedule::polynomial(0.75), 1e-3) == 8000002);
  CHECK(tail_threshold(StepSchedule::polynomial(0.9), 1e-3) == 14868);
  CHECK(tail_threshold(StepSchedule::polynomial(0.75), 0.1) == 802);
  CHECK(tail_threshold(StepSchedule::polynomial(0.75), 25.0) == 2);
  const long t6 = tail_threshold(StepSchedule::polynomial(0.6), 1e-2);
  CHECK(double(t6) == doctest::Approx(62500000000002.0).epsilon(1e-6));
  CHECK(tail_threshold(StepSchedule::polynomial(0.75), std::numeric_limits<double>::infinity()) == 2);
  // centralized, f = |x| on [-5, 5]: D^2/L^2 = 100
  CHECK(centralized_threshold(StepSchedule::polynomial(0.75), 10.0, 1.0) == 2);
}

TEST_CASE("distance threshold satisfies the log condition from there on") {
  for (double beta : {0.5, 0.75, 0.9}) {
    for (double sigma : {0.5, 0.875, 0.99}) {
      const auto s = StepSchedule::polynomial(beta);
      const long t = distance_threshold(s, sigma);
      const double gap = 1.0 - sigma, cp = c_alpha_prime_bound(s);
      auto holds = [&](long u) {
        return double(u) >= (2.0 / gap) * std::log(gap * double(u) * s.alpha_max() / (cp * s.alpha(u)));
      };
      for (long u = t; u < t + 5000; ++u) REQUIRE(holds(u));
      CHECK(t >= 2);
    }
  }
  CHECK_THROWS_AS(distance_threshold(StepSchedule::polynomial(0.75), 1.0), InvalidArgument);
}

TEST_CASE("transient threshold combines both conditions") {
  const auto s = StepSchedule::polynomial(0.75);
  const double D = 10, L = 2, sigma = 0.5;
  const long t = transient_threshold(s, D, L, sigma);
  CHECK(t >= distance_threshold(s, sigma));
  CHECK(tail_sum_squares(s, t) <= D * D * (1 - sigma) / (10 * c_alpha_prime_bound(s) * L * L));
  // unbounded Omega makes the tail condition vacuous
  CHECK(transient_threshold(s, std::numeric_limits<double>::infinity(), L, sigma) == distance_threshold(s, sigma));
}
