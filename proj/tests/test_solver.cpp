#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "netsub/counterexample.hpp"
#include "netsub/experiments.hpp"
#include "netsub/solver.hpp"

using namespace netsub;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

ProblemInstance<double> abs_problem(double lo, double hi, int agents = 1) {
  std::vector<LocalFunction<double>> f(std::size_t(agents), LocalFunction<double>::absolute(1.0, 0.0));
  ProblemInstance<double> p(std::move(f), ConstraintSet<double>::box(1, lo, hi));
  p.set_known_optimum({VectorXd::Zero(1), 0.0});
  return p;
}

}  // namespace

TEST_CASE("gradient mapping examples") {
  const auto box = ConstraintSet<double>::box(1, -5.0, 5.0);
  const VectorXd g = VectorXd::Constant(1, -1.0);
  CHECK(gradient_mapping(VectorXd::Constant(1, 5.0), g, 0.1, box)(0) == doctest::Approx(0.0));
  CHECK(gradient_mapping(VectorXd::Constant(1, 4.0), g, 0.1, box)(0) == doctest::Approx(-1.0).epsilon(1e-12));
  const auto free = ConstraintSet<double>::unconstrained(2);
  const VectorXd g2 = Eigen::Vector2d(0.3, -7.0);
  CHECK(gradient_mapping(VectorXd(Eigen::Vector2d(1.0, 2.0)), g2, 0.5, free).isApprox(g2));
  CHECK_THROWS_AS(gradient_mapping(VectorXd::Constant(1, 4.0), g, 0.0, box), InvalidArgument);
}

TEST_CASE("consensus is preserved with identical rows and functions") {
  LocalFunction<double> f(2);
  f.set_quartic(MatrixXd(MatrixXd::Ones(1, 2)), VectorXd::Constant(1, 0.5));
  std::vector<LocalFunction<double>> fs(5, f);
  ProblemInstance<double> p(std::move(fs), ConstraintSet<double>::box(2, -3.0, 3.0));
  const auto w = mixing_matrix<double>(build_standard(Topology::ring, 5), 0.3);
  auto st = initial_state(p, Variant::mix_after_project, VectorXd(Eigen::Vector2d(1.0, -0.5)));
  StepConfig<double> sc;
  for (int k = 0; k < 50; ++k) {
    st = step(std::move(st), w, p, StepSchedule::polynomial(0.5), sc);
    CHECK(st.disagreement() <= 1e-13);
  }
  CHECK(st.t == 51);
}

TEST_CASE("a tiny constant step is pure consensus") {
  const auto p = abs_problem(-5, 5, 4);
  const auto w = mixing_matrix<double>(build_standard(Topology::line, 4), 0.3);
  SolverState<double> st(MatrixXd(MatrixXd::Zero(4, 1)), WindowRule::full);
  st.x << 1, 2, -1, 3;
  const MatrixXd mixed = w.entries() * st.x;
  for (Variant v : {Variant::pre_mix, Variant::projected_pre_mix, Variant::mix_after_project}) {
    StepConfig<double> sc;
    sc.variant = v;
    const auto next = step(st, w, p, StepSchedule::constant(1e-15), sc);
    CHECK((next.x - mixed).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("variant updates by hand") {
  // two agents, f_i = |x - c_i|, box [-1, 1]
  std::vector<LocalFunction<double>> fs{LocalFunction<double>::absolute(1.0, 0.9),
                                        LocalFunction<double>::absolute(1.0, -0.9)};
  ProblemInstance<double> p(std::move(fs), ConstraintSet<double>::box(1, -1.0, 1.0));
  Graph g(2, {{0, 1}});
  const auto w = mixing_matrix<double>(g, 0.25);
  SolverState<double> st(MatrixXd(MatrixXd::Zero(2, 1)), WindowRule::full);
  st.x << 0.95, -0.5;
  const auto s = StepSchedule::constant(0.2);
  StepConfig<double> sc;

  sc.variant = Variant::pre_mix;  // W x - a g, g = (+1, +1)
  auto n1 = step(st, w, p, s, sc);
  CHECK(n1.x(0, 0) == doctest::Approx(0.75 * 0.95 - 0.125 - 0.2));
  CHECK(n1.x(1, 0) == doctest::Approx(0.25 * 0.95 - 0.375 - 0.2));

  sc.variant = Variant::mix_after_project;  // W P[x - a g]
  StepTrace<double> tr;
  auto n2 = step(st, w, p, s, sc, &tr);
  const double z0 = 0.75, z1 = -0.7;
  CHECK(n2.x(0, 0) == doctest::Approx(0.75 * z0 + 0.25 * z1));
  CHECK(n2.x(1, 0) == doctest::Approx(0.25 * z0 + 0.75 * z1));
  CHECK(tr.s(0, 0) == doctest::Approx(1.0));

  sc.variant = Variant::projected_pre_mix;  // P[W x - a g'(W x)]
  st.x << 1.0, 1.0;
  auto n3 = step(st, w, p, s, sc, &tr);
  CHECK(n3.x(0, 0) == doctest::Approx(0.8));  // g' = +1 at 1 > 0.9
  CHECK(n3.x(1, 0) == doctest::Approx(0.8));
  st.x << -1.0, -1.0;
  auto n4 = step(st, w, p, s, sc, &tr);  // g' = -1 for both at -1
  CHECK(n4.x(0, 0) == doctest::Approx(-0.8));
  CHECK(n4.x(1, 0) == doctest::Approx(-0.8));
}

TEST_CASE("shape checks") {
  const auto p = abs_problem(-5, 5, 3);
  const auto w3 = mixing_matrix<double>(build_standard(Topology::line, 3), 0.3);
  const auto w4 = mixing_matrix<double>(build_standard(Topology::line, 4), 0.3);
  StepConfig<double> sc;
  auto st = initial_state(p, Variant::mix_after_project);
  CHECK_THROWS_AS(step(st, w4, p, StepSchedule::polynomial(0.5), sc), InvalidArgument);
  sc.variant = Variant::centralized;
  auto sc1 = initial_state(p, Variant::centralized);
  CHECK(sc1.x.rows() == 1);
  CHECK_THROWS_AS(step(sc1, w3, p, StepSchedule::polynomial(0.5), sc), InvalidArgument);
  CHECK_NOTHROW(step(sc1, MixingMatrix<double>::identity(1), p, StepSchedule::polynomial(0.5), sc));
  CHECK_THROWS_AS(initial_state(p, Variant::mix_after_project, VectorXd(VectorXd::Constant(1, 6.0))), InvalidArgument);
  CHECK_THROWS_AS(initial_state(p, Variant::mix_after_project, VectorXd(VectorXd::Zero(2))), InvalidArgument);
}

TEST_CASE("running averages") {
  const int T = 37;
  const auto s = StepSchedule::polynomial(0.75);
  RunningAverage<double> half(WindowRule::half, 1), full(WindowRule::full, 1), dyadic(WindowRule::dyadic, 1);
  std::vector<double> xs;
  for (int t = 1; t <= T; ++t) {
    const double x = std::sin(0.3 * t) + 0.1 * t;
    xs.push_back(x);
    const VectorXd v = VectorXd::Constant(1, x);
    half.add(t, s.alpha(t), v);
    full.add(t, s.alpha(t), v);
    dyadic.add(t, s.alpha(t), v);
    auto window = [&](int from) {
      double num = 0, den = 0;
      for (int k = from; k <= t; ++k) num += s.alpha(k) * xs[k - 1], den += s.alpha(k);
      return std::pair{num / den, den};
    };
    const auto [h, hw] = window((t + 1) / 2);
    CHECK(half.average()(0) == doctest::Approx(h).epsilon(1e-12));
    CHECK(half.weight_total() == doctest::Approx(hw).epsilon(1e-12));
    CHECK(half.window_start() == (t + 1) / 2);
    CHECK(full.average()(0) == doctest::Approx(window(1).first).epsilon(1e-12));
    int p2 = 1;
    while (p2 * 2 <= t) p2 *= 2;
    CHECK(dyadic.window_start() == p2);
    CHECK(dyadic.average()(0) == doctest::Approx(window(p2).first).epsilon(1e-12));
  }
}

TEST_CASE("counterexample first step") {
  auto setup = make_counterexample_setup(CounterexampleConfig::simulation(4, 0.25, 10));
  const auto s = StepSchedule::polynomial(0.5);
  StepConfig<double> sc;
  sc.selector = adversarial_selector(CounterexampleConfig::simulation(4, 0.25, 10), s);
  auto st = initial_state(setup.problem, Variant::mix_after_project);
  StepTrace<double> tr;
  st = step(std::move(st), setup.w, setup.problem, s, sc, &tr);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(st.x(gn_prime_u(i), 0)) <= 1e-15);
    CHECK(st.x(gn_prime_v(4, i), 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(tr.g(gn_prime_u(i), 0) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(tr.g(gn_prime_v(4, i), 0) == -0.5);
  }
}

TEST_CASE("centralized run on |x| meets the averaged bound") {
  const auto p = abs_problem(-5, 5);
  const auto s = StepSchedule::polynomial(0.75);
  InvariantMonitor<double> mon;
  const auto r = centralized_bound_check(p, s, 10000, VectorXd::Constant(1, 4.0), &mon);
  CHECK(r.violations == 0);
  CHECK(r.checked > 9000);
  CHECK(mon.ok());
  CHECK(mon.telescoping.checks == 10000);
  // the bound with C_alpha = 6 and D = 10
  RunOptions<double> opts;
  opts.initial_point = VectorXd::Constant(1, 4.0);
  StepConfig<double> sc;
  sc.variant = Variant::centralized;
  const auto rec = run(MixingMatrix<double>::identity(1), p, s, sc, 10000, opts);
  double sum = 0;
  for (long t = 1; t <= 10000; ++t) sum += s.alpha(t);
  CHECK(rec.rows.back().avg_gap <= 100.0 * 6.0 / sum);
}

TEST_CASE("starting at a smooth optimum stays there") {
  LocalFunction<double> f(1);
  f.set_quartic(MatrixXd(MatrixXd::Ones(1, 1)), VectorXd::Constant(1, 0.5));
  std::vector<LocalFunction<double>> fs(4, f);
  ProblemInstance<double> p(std::move(fs), ConstraintSet<double>::box(1, -2.0, 2.0));
  p.set_known_optimum({VectorXd::Constant(1, 0.5), 0.0});
  const auto w = mixing_matrix<double>(build_standard(Topology::star, 4), 0.2);
  RunOptions<double> opts;
  opts.initial_point = VectorXd::Constant(1, 0.5);
  const auto rec = run(w, p, StepSchedule::polynomial(0.5), StepConfig<double>{}, 200, opts);
  for (const auto& r : rec.rows) CHECK(r.gap <= 1e-30);
}

TEST_CASE("run records") {
  const auto p = abs_problem(-5, 5, 4);
  const auto w = mixing_matrix<double>(build_standard(Topology::line, 4), 0.3);
  RunOptions<double> opts;
  opts.initial_point = VectorXd::Constant(1, 3.0);
  const auto rec = run(w, p, StepSchedule::polynomial(0.75), StepConfig<double>{}, 500, opts);
  REQUIRE(rec.rows.size() == 500);
  CHECK(rec.rows.front().t == 1);
  CHECK(rec.rows.front().gap == doctest::Approx(3.0));
  CHECK(rec.rows.front().scaled_gap == doctest::Approx(3.0));
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    CHECK(rec.rows[i].t == rec.rows[i - 1].t + 1);
    CHECK(rec.rows[i].gap >= -1e-9);
    CHECK(rec.rows[i].scaled_gap == doctest::Approx(std::pow(double(rec.rows[i].t), 0.25) * rec.rows[i].gap));
  }
  CHECK_THROWS_AS(run(w, p, StepSchedule::polynomial(0.75), StepConfig<double>{}, 0, opts), InvalidArgument);
}

TEST_CASE("long runs are strided with geometric checkpoints") {
  long kept = 0, last = 0;
  bool increasing = true;
  for (long t = 1; t <= 1000000; ++t) {
    if (recorded(t, 1000000, 100000)) {
      increasing = increasing && t > last;
      last = t, ++kept;
    }
  }
  CHECK(increasing);
  CHECK(last == 1000000);
  CHECK(kept >= 100000);
  CHECK(kept < 100400);
  for (long t = 1; t <= 20; ++t) CHECK(recorded(t, 1000000, 100000));
}

TEST_CASE("termination on the gradient mapping") {
  // |x| with the iterate already at the kink: best choice gives s = 0
  const auto p = abs_problem(-1, 1, 3);
  const auto w = mixing_matrix<double>(build_standard(Topology::line, 3), 0.25);
  const auto s = StepSchedule::polynomial(0.5);
  auto r = terminate_on_mapping(w, p, s, Variant::mix_after_project, 0.03, 1e-6, 1000L);
  CHECK(r.terminated);
  CHECK(r.iterations == 1);
  auto c = terminate_on_mapping(MixingMatrix<double>::identity(1), p, s, Variant::centralized, 0.03, 1e-6, 1000L);
  CHECK(c.iterations == 1);
  // from 0.5 with steps of 0.25 the iterate reaches the kink at t = 3
  auto d = terminate_on_mapping(MixingMatrix<double>::identity(1), p, StepSchedule::constant(0.25), Variant::centralized,
                                0.03, 1e-6, 1000L, std::optional<VectorXd>(VectorXd::Constant(1, 0.5)));
  CHECK(d.terminated);
  CHECK(d.iterations == 3);
  // a cap that is too small is reported, not thrown
  auto e = terminate_on_mapping(MixingMatrix<double>::identity(1), p, StepSchedule::constant(0.01), Variant::centralized,
                                0.03, 1e-6, 5L, std::optional<VectorXd>(VectorXd::Constant(1, 0.5)));
  CHECK_FALSE(e.terminated);
  CHECK(e.iterations == 5);
  CHECK_THROWS_AS(terminate_on_mapping(w, p, s, Variant::mix_after_project, 0.0, 1e-6, 10L), InvalidArgument);
}

TEST_CASE("best-choice mapping on the l1 term") {
  std::vector<LocalFunction<double>> fs{LocalFunction<double>::absolute(1.0, 0.0),
                                        LocalFunction<double>::absolute(1.0, 0.0)};
  ProblemInstance<double> p(std::move(fs), ConstraintSet<double>::box(1, -1.0, 1.0));
  MatrixXd pts = MatrixXd::Zero(2, 1);
  MatrixXd chosen;
  CHECK(best_choice_mapping_norm(pts, p, 0.1, Variant::mix_after_project, 1e-6, &chosen) == 0.0);
  CHECK(chosen.isZero());
  pts << 0.5, 0.5;
  CHECK(best_choice_mapping_norm(pts, p, 0.1, Variant::mix_after_project, 1e-6) == doctest::Approx(1.0));
}

TEST_CASE("invariant monitor on a quartic run") {
  QuarticConfig qc;
  qc.seed = 2;
  const auto p = make_quartic_elasticnet<double>(qc);
  const auto w = mixing_matrix<double>(build_standard(Topology::line, 10), 0.25);
  for (Variant v : {Variant::mix_after_project, Variant::projected_pre_mix}) {
    InvariantMonitor<double> mon;
    StepConfig<double> sc;
    sc.variant = v;
    RunOptions<double> opts;
    opts.monitor = &mon;
    run(w, p, StepSchedule::polynomial(0.6), sc, 2000, opts);
    CHECK(mon.ok());
    CHECK(mon.feasibility.checks == 2000);
    if (v == Variant::mix_after_project) {
      CHECK(mon.mean_identity.checks == 2000);
      CHECK(mon.mapping_inequality.checks == 20000);
    }
  }
}
