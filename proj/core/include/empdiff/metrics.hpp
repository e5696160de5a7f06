#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "empdiff/dataset.hpp"
#include "empdiff/predictors.hpp"
#include "empdiff/samplers.hpp"
#include "empdiff/schedule.hpp"

namespace empdiff {

using Series = std::vector<std::pair<double, double>>;

// Everything an experiment measures: named scalars, named (index, value)
// series, and a string echo of how it was produced. Serialization layout is
// documented in the README; all numbers print with 17 significant digits so
// reruns are byte-comparable.
struct MetricsReport {
  std::string name;
  std::map<std::string, double> scalars;
  std::map<std::string, Series> series;
  std::map<std::string, std::string> info;

  // Writes scalars.csv, info.csv, resolved_config.cfg (when the report
  // carries config_* keys), one <series>.csv per series, and a matching
  // <series>.svg polyline plot. Creates dir if needed.
  void write(const std::string& dir) const;
};

// Exhaustive nearest-training-point audit. scalars: median, mean,
// memorized_fraction (distance <= tau counts as memorized); series
// "distances" holds the per-sample minima.
MetricsReport nn_audit(const Eigen::MatrixXd& samples, const Dataset& data, double tau);

// Mean squared per-dimension gap between paired trajectories at each step.
// Both batches must share step grids and start states.
MetricsReport trajectory_divergence(const std::vector<Trajectory>& a,
                                    const std::vector<Trajectory>& b);

struct MiBound {
  double value = 0.0;
  Series terms;  // (t, term); term 1 covers the final reverse step
};

// Closed-form upper bound on the information a stochastically generated
// sample can carry about the training set, given its support radius.
MiBound mi_upper_bound(const Schedule& sched, double radius);

struct GaussianExampleErrors {
  double optimization = 0.0;    // d/n
  double generalization = 0.0;  // (d/2) ln(1 + 1/n)
};

// Analytic error splits for estimating a unit-covariance Gaussian mean from
// n samples.
GaussianExampleErrors gaussian_example_errors(int d, int n);

// Monte Carlo check of the d/n optimization error: E|sample mean - mean|^2
// over `trials` repetitions. scalars: estimate, expected, stderr,
// within_5_stderr.
MetricsReport gaussian_example_simulate(int d, int n, int trials, std::uint64_t seed);

// Root mean squared per-dimension disagreement between two predictors over
// probe rows at step t.
double predictor_rmse(const Predictor& pred_a, const Predictor& pred_b,
                      const Eigen::MatrixXd& probes, int t);

}  // namespace empdiff
