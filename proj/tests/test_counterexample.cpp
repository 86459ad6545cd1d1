#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "netsub/counterexample.hpp"

using namespace netsub;

TEST_CASE("y recursion by hand") {
  // Delta = (0 + 1/8)/(3/4) = 1/6; y(2) = 3/8 - 1/24
  CHECK(y_next(0.0, 1, 0.25) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  // y = 1 takes the sign(0) = +1 branch: y' = (1-e) - [(1/2)(1-e) + e (e sqrt t - e/2)/(1-e)]/sqrt t
  const double e = 0.25, t = 4;
  const double expect = (1 - e) - (0.5 * (1 - e) + e * (e * std::sqrt(t) - e / 2) / (1 - e)) / std::sqrt(t);
  CHECK(y_next(1.0, 4, e) == doctest::Approx(expect).epsilon(1e-15));
  // eps -> 0: y' = y + (1/2)/sqrt(t) below 1
  CHECK(y_next(0.5, 4, 1e-12) == doctest::Approx(0.75).epsilon(1e-9));
  // the general-alpha form agrees on 1/sqrt(t)
  for (double y : {0.0, 0.3, 1.0, 1.7}) {
    for (long k : {1L, 7L, 1000L}) {
      CHECK(y_next_alpha(y, 1.0 / std::sqrt(double(k)), 0.125) == doctest::Approx(y_next(y, k, 0.125)).epsilon(1e-13));
    }
  }
}

TEST_CASE("adversarial subgradients") {
  const auto c = adversarial_choice(1, 0.0, 0.25);
  CHECK(c.g_v == -0.5);
  CHECK(c.g_u == doctest::Approx(1.0 / 6).epsilon(1e-15));
  for (double eps : {0.25, 0.1}) {
    const auto z = adversarial_choice(5, 0.0, eps);
    CHECK(z.g_u == doctest::Approx(eps / (2 * (1 - eps))).epsilon(1e-15));
  }
  CHECK(adversarial_choice(3, 1.0, 0.25).g_v == 0.5);
  // sqrt(t) eps y <= 2 keeps |g_u| <= 17/6
  CHECK(std::abs(adversarial_choice(64, 1.0, 0.25, 3.0).g_u) <= 17.0 / 6);
  CHECK_THROWS_AS(adversarial_choice(1, 2.0, 0.25, 0.01, 2.0), InvalidAdversary);
  try {
    adversarial_choice(9, 2.0, 0.25, 0.01, 2.0);
  } catch (const InvalidAdversary& e) {
    CHECK(e.t() == 9);
  }
}

TEST_CASE("trajectory bounds") {
  CounterexampleConfig cfg{4, 0.25, 2.0, 5.0, 1, AdversaryMode::simulation};
  const auto one = y_trajectory(cfg);
  CHECK(one.values == std::vector<double>{0.0});
  CHECK_FALSE(one.t1_observed);
  for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
    cfg.eps = eps;
    cfg.T = 1000000;
    const auto tr = y_trajectory(cfg);
    CHECK(tr.values.size() == 1000000);
    CHECK(tr.values[0] == 0.0);
    CHECK(tr.min_y >= 0.0);
    CHECK(tr.max_y <= 2.0);
    CHECK(tr.max_scaled <= 2.0);
    REQUIRE(tr.t1_observed);
    CHECK(*tr.t1_observed <= 10000);
    for (long t = *tr.t1_observed; t <= cfg.T; ++t) {
      REQUIRE(eps * std::sqrt(double(t)) * tr.values[std::size_t(t - 1)] >= 1.0 / 16);
    }
  }
}

TEST_CASE("single-step properties") {
  for (double eps : {0.25, 0.03125}) {
    CounterexampleConfig cfg{4, eps, 2.0, 5.0, 200000, AdversaryMode::simulation};
    const auto tr = y_trajectory(cfg);
    for (std::size_t i = 0; i + 1 < tr.values.size(); ++i) {
      const double y = tr.values[i], yn = tr.values[i + 1], t = double(i + 1);
      if (y >= 1.0) REQUIRE(yn < y);
      if (y < 1.0) REQUIRE(yn <= y + 0.5 / std::sqrt(t) + 1e-15);
      REQUIRE(yn >= 0.0);
    }
  }
}

TEST_CASE("comparison sequence") {
  const auto two = z_bound_check(0.25, 2);
  CHECK(two.ok());
  // z(2) = 1/2 >= y(2) = 1/3
  CHECK(two.max_sqrt_t_z == doctest::Approx(std::sqrt(2.0) * 0.5));
  const auto r = z_bound_check(0.25, 100000);
  CHECK(r.dominance);
  CHECK(r.bound);
  CHECK(r.max_sqrt_t_z <= 8.0);
}

TEST_CASE("solver reproduces the closed form") {
  for (auto cfg : {CounterexampleConfig::simulation(4, 0.25, 100000), CounterexampleConfig::strict_proof(4, 0.25, 100000)}) {
    InvariantMonitor<double> mon;
    const auto r = verify_equivalence(cfg, StepSchedule::polynomial(0.5), {}, &mon);
    CHECK(r.passed);
    CHECK(r.max_u_abs <= 1e-9);
    CHECK(r.max_v_diff <= 1e-9);
    CHECK(r.max_pre_projection_abs < cfg.a);
    CHECK(r.max_g_u_abs <= 17.0 / 6);
    CHECK(mon.ok());
  }
  // larger n with eps = 1/n and beta = 3/4
  auto cfg = CounterexampleConfig::simulation(8, 0.125, 20000);
  CHECK(verify_equivalence(cfg, StepSchedule::polynomial(0.75)).passed);
}

TEST_CASE("a small interval activates the projection") {
  auto cfg = CounterexampleConfig::simulation(4, 0.25, 1000);
  cfg.a = 0.6;
  const auto r = verify_equivalence(cfg);
  CHECK_FALSE(r.passed);
  CHECK(r.reason == "projection active");
  // first t where some x - alpha g leaves (-1, 1), from the recursion alone
  long expect = -1;
  double y = 0.0;
  for (long t = 1; t < 1000 && expect < 0; ++t) {
    const double alpha = 1.0 / std::sqrt(double(t));
    const auto c = adversarial_choice(t, y, 0.25, alpha, 2.0);
    if (std::abs(alpha * c.g_u) >= 0.6 || std::abs(y - alpha * c.g_v) >= 0.6) expect = t;
    y = y_next(y, t, 0.25);
  }
  CHECK(r.first_violation == expect);
}

TEST_CASE("configuration checks") {
  CHECK_THROWS_AS(CounterexampleConfig::simulation(3, 0.25, 10).validate(), InvalidArgument);
  CHECK_THROWS_AS(CounterexampleConfig::simulation(8, 0.25, 10).validate(), InvalidArgument);
  CHECK_THROWS_AS(CounterexampleConfig::simulation(4, 0.3, 10).validate(), InvalidArgument);
  CounterexampleConfig strict = CounterexampleConfig::strict_proof(4, 0.25, 10);
  CHECK_NOTHROW(strict.validate());
  strict.a = 5.0;
  CHECK_THROWS_AS(strict.validate(), InvalidArgument);
}
