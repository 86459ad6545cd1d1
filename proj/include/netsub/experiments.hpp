#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "netsub/counterexample.hpp"
#include "netsub/graph.hpp"
#include "netsub/mixing.hpp"
#include "netsub/problem.hpp"
#include "netsub/schedule.hpp"
#include "netsub/solver.hpp"

namespace netsub {

/// Runs f(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to slot i by the caller, which keeps output order fixed.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& f) {
  const std::size_t workers = std::min<std::size_t>(count, std::size_t(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct CheckResult {
  std::string name;
  bool pass;
  double measured;
  double bound;
  std::string note;
};

struct Report {
  std::vector<CheckResult> checks;

  void add(std::string name, bool pass, double measured, double bound, std::string note = {}) {
    checks.push_back({std::move(name), pass, measured, bound, std::move(note)});
  }
  void append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
  bool ok() const;
  void print(std::ostream& os) const;
};

// ---- spectrum ---------------------------------------------------------------

struct SpectrumResult {
  int n;
  double eps;
  std::vector<double> closed_form;  // descending
  std::vector<double> numeric;      // descending
  double max_abs_diff;
  double sigma_power;
  double sigma_dense;
  double sigma_closed;  // max |lambda| over the non-unit closed-form eigenvalues
};

SpectrumResult spectrum(int n, double eps);
/// `index,closed_form,numeric,abs_diff`
void write_spectrum_csv(std::ostream& os, const SpectrumResult& r);

/// min over `samples` random x of sigma ||x - 1 xbar|| - ||W x - 1 xbar||, relative to ||x - 1 xbar||.
double contraction_min_slack(const MixingMatrix<double>& w, int samples, std::uint64_t seed);

// ---- generic run ------------------------------------------------------------

struct RunSpec {
  std::string problem = "counterexample";  // counterexample | quartic
  std::string topology = "gn_prime";       // gn_prime | line | complete | star | ring
  int n = 4;                               // G_n' half size, or agent count for the other topologies
  std::optional<double> eps;               // default: 1/n on G_n', 1/(2 max_degree) otherwise
  std::string schedule = "poly:0.5";
  Variant variant = Variant::mix_after_project;
  WindowRule window = WindowRule::half;
  long T = 1000;
  bool adversary = true;  // counterexample only
  double gamma = 2.0, a = 5.0;
  QuarticConfig quartic;
  std::optional<double> x0;  // every coordinate of the initial point
};

struct RunOutput {
  RunRecord record;
  double eps;
  double sigma;
  double lipschitz;
  double diameter;
};

RunOutput run_experiment(const RunSpec& spec, InvariantMonitor<double>* monitor = nullptr);

// ---- centralized averaged-iterate bound -------------------------------------

struct CentralizedBoundResult {
  long threshold = 0;   // from the tail condition sum_{k>=t/2} alpha^2 <= D^2/L^2
  double c_alpha = 0;   // estimate_c_alpha(schedule, T)
  long checked = 0;     // steps t >= threshold within the horizon
  long violations = 0;  // among the checked steps
  double max_ratio = 0;  // max over checked t of (F(y'(t)) - F*) / bound(t)
  long violations_any_t = 0;  // same inequality at every t >= 2, for information
  double max_ratio_any_t = 0;
};

/// Centralized run with the half window average y'(t); checks
/// F(y'(t)) - F* <= D^2 C_alpha / sum_{k<=t} alpha(k).
CentralizedBoundResult centralized_bound_check(const ProblemInstance<double>& p, const StepSchedule& s, long T,
                                               const VectorX<double>& x0,
                                               InvariantMonitor<double>* monitor = nullptr);

// ---- counterexample trace ---------------------------------------------------

/// Rows `t,y,eps_sqrt_t_y,x_v_solver,abs_diff` for t = 1..T.
EquivalenceReport write_counterexample_csv(std::ostream& os, const CounterexampleConfig& cfg,
                                           const StepSchedule& schedule);

// ---- network (in)dependence -------------------------------------------------

struct IndependenceConfig {
  std::vector<int> n_list{4, 8, 16};
  double beta = 0.75;
  long T = 1000000;
  double gamma = 2.0;
  double a = 5.0;
  int threads = 1;
};

struct IndependenceCurve {
  int n;
  double eps;
  RunRecord record;
  long first_below_one = -1;  // first recorded t with scaled_gap <= 1
  long last_above_one = -1;   // last recorded t with scaled_gap > 1
  double max_scaled = 0.0;
  double terminal_scaled = 0.0;
  InvariantMonitor<double> monitor;
};

/// Counterexample runs on G_n' with eps = 1/n and the adversarial selector.
std::vector<IndependenceCurve> fig_independence(const IndependenceConfig& cfg);
/// `t,scaled_gap,gap,below_one`
void write_independence_csv(std::ostream& os, const IndependenceCurve& c);

// ---- step-size inversion ----------------------------------------------------

struct InversionConfig {
  std::vector<double> betas{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
  int R = 500;
  std::uint64_t seed = 1;
  double threshold = 0.03;
  double zero_band = 1e-6;
  QuarticConfig problem;  // seed/stream are set per draw
  double eps = 0.25;
  long cap = 1000000;
  double x0 = 1.0;
  int threads = 1;
};

struct InversionRow {
  double beta;
  double mean_c, se_c;
  double mean_d, se_d;
  long capped;  // runs of either method that hit the cap
  bool warning;  // cap hit in more than half of the runs of one method
  std::vector<long> iters_c, iters_d;
};

std::vector<InversionRow> fig_inversion(const InversionConfig& cfg);
/// `beta,mean_iters_centralized,se_c,mean_iters_distributed,se_d,capped_runs`
void write_inversion_csv(std::ostream& os, const std::vector<InversionRow>& rows);

/// Rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);
/// True if the sequence has both a strict increase and a strict decrease
/// between consecutive entries (so neither nondecreasing nor nonincreasing).
bool non_monotone(const std::vector<double>& v);

// ---- verification suites ----------------------------------------------------

Report verify_schedule();
Report verify_spectral();
Report verify_lemmas();
Report verify_counterexample();
Report verify_suite(const std::string& name);  // schedule | spectral | lemmas | counterexample | all

}  // namespace netsub
