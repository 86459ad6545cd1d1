#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "netsub/error.hpp"
#include "netsub/graph.hpp"
#include "netsub/mixing.hpp"
#include "netsub/problem.hpp"
#include "netsub/schedule.hpp"
#include "netsub/solver.hpp"

namespace netsub {

enum class AdversaryMode { simulation, strict_proof };

struct CounterexampleConfig {
  int n = 4;
  double eps = 0.25;
  double gamma = 2.0;
  double a = 5.0;
  long T = 100000;
  AdversaryMode mode = AdversaryMode::simulation;

  /// gamma = 2, a = 5
  static CounterexampleConfig simulation(int n, double eps, long T) {
    return {n, eps, 2.0, 5.0, T, AdversaryMode::simulation};
  }
  /// gamma = 3, a = 3 + gamma
  static CounterexampleConfig strict_proof(int n, double eps, long T) {
    return {n, eps, 3.0, 6.0, T, AdversaryMode::strict_proof};
  }

  void validate() const;
};

inline double sign_plus(double x) { return x >= 0.0 ? 1.0 : -1.0; }

/// One step of the closed-form recursion with alpha(t) = 1/sqrt(t):
///   y(t+1) = (1-eps) y - [(1/2)(1-eps) sign(y-1) + eps Delta] / sqrt(t),
///   Delta  = (eps sqrt(t) y - (eps/2) sign(y-1)) / (1-eps).
double y_next(double y, long t, double eps);

/// Same recursion for an arbitrary step alpha (the v-row value the adversary
/// produces); equals y_next(y, t, eps) when alpha = 1/sqrt(t).
double y_next_alpha(double y, double alpha, double eps);

struct YTrajectory {
  std::vector<double> values;  // values[t-1] = y(t)
  std::optional<long> t1_observed;
  double max_y = 0.0;
  double min_y = 0.0;
  double max_scaled = 0.0;  // max eps sqrt(t) y(t)
};

/// y(1) = 0, iterated to cfg.T with alpha(t) = 1/sqrt(t).
YTrajectory y_trajectory(const CounterexampleConfig& cfg);

struct AdversarialChoice {
  double g_u;
  double g_v;
};

/// g_v = (1/2) sign(y - 1), g_u = (eps y / alpha - eps g_v) / (1 - eps), which
/// zeroes every u-row after mixing. Throws InvalidAdversary if |g_u| > gamma
/// (the choice would not be a subgradient of gamma|x| at 0).
AdversarialChoice adversarial_choice(long t, double y, double eps, double alpha, double gamma);

inline AdversarialChoice adversarial_choice(long t, double y, double eps, double gamma = 2.0) {
  return adversarial_choice(t, y, eps, 1.0 / std::sqrt(double(t)), gamma);
}

/// Selector for the solver on G_n' (rows 0..n-1 = u, n..2n-1 = v): reads y
/// from the v-rows and writes the adversarial subgradients.
SubgradientSelector<double> adversarial_selector(const CounterexampleConfig& cfg, const StepSchedule& schedule);

struct ZBoundReport {
  bool dominance = true;  // y(t) <= z(t)
  bool bound = true;      // sqrt(t) z(t) <= 2/eps
  double max_sqrt_t_z = 0.0;
  long first_violation = -1;
  bool ok() const { return dominance && bound; }
};

/// z(1) = 0, z(t+1) = (1-eps) z(t) + 1/(2 sqrt(t)).
ZBoundReport z_bound_check(double eps, long T);

struct EquivalenceReport {
  bool passed = true;
  long first_violation = -1;
  std::string reason;
  double max_u_abs = 0.0;
  double max_v_diff = 0.0;
  double max_pre_projection_abs = 0.0;
  double max_g_u_abs = 0.0;
};

/// Runs mix_after_project on G_n' with the adversarial selector and compares
/// every row against the closed form at each t. Optional per-step callback
/// sees (t, y(t), x_v solver row 0 value).
EquivalenceReport verify_equivalence(const CounterexampleConfig& cfg, const StepSchedule& schedule,
                                     const std::function<void(long, double, double)>& on_step = {},
                                     InvariantMonitor<double>* monitor = nullptr);

inline EquivalenceReport verify_equivalence(const CounterexampleConfig& cfg) {
  return verify_equivalence(cfg, StepSchedule::polynomial(0.5));
}

/// Everything needed to run the construction through the generic solver.
struct CounterexampleSetup {
  Graph graph;
  MixingMatrix<double> w;
  ProblemInstance<double> problem;
};

CounterexampleSetup make_counterexample_setup(const CounterexampleConfig& cfg);

}  // namespace netsub
