#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "empdiff/dataset.hpp"
#include "empdiff/schedule.hpp"
#include "empdiff/target.hpp"

namespace empdiff {

enum class predictor_kind {
  eps_empirical,
  xi_empirical,
  eps_oracle,
  score_oracle_derived,
};

std::string predictor_kind_name(predictor_kind kind);

// eps-kind predictors estimate the unit noise injected between step 0 and
// step t; xi-kind predictors estimate the negative score of the noised
// marginal (the rescaled two-step noise). Samplers check the kind they need.
inline bool is_eps_kind(predictor_kind k) {
  return k == predictor_kind::eps_empirical || k == predictor_kind::eps_oracle;
}
inline bool is_xi_kind(predictor_kind k) {
  return k == predictor_kind::xi_empirical || k == predictor_kind::score_oracle_derived;
}

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Eigen::VectorXd operator()(const Eigen::VectorXd& x, int t) const = 0;
  virtual predictor_kind kind() const = 0;
  virtual int dim() const = 0;
};

// Softmax weights over training points given a noised observation at step t.
// Computed in log space with max subtraction; stable down to bandwidths
// 1 - alpha_bar(t) of 1e-8 and inputs with norms in the hundreds.
Eigen::VectorXd posterior_weights(const Schedule& sched, const Dataset& data,
                                  const Eigen::VectorXd& x, int t);

// Implied estimate of the clean point: the weight-averaged training set.
// Satisfies x = sqrt(alpha_bar) * estimate + sqrt(1-alpha_bar) * eps exactly,
// with eps the EmpiricalEps prediction at (x, t).
Eigen::VectorXd posterior_mean_estimate(const Schedule& sched, const Dataset& data,
                                        const Eigen::VectorXd& x, int t);

// Exact minimizer of the standard noise-prediction objective over the finite
// training set: a softmax-weighted kernel estimator, no training involved.
class EmpiricalEps final : public Predictor {
 public:
  EmpiricalEps(Schedule sched, Dataset data);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x, int t) const override;
  predictor_kind kind() const override { return predictor_kind::eps_empirical; }
  int dim() const override { return data_.dim(); }

  const Schedule& schedule() const { return sched_; }
  const Dataset& data() const { return data_; }

 private:
  Schedule sched_;
  Dataset data_;
};

// (gap, source) pair for the two-step objective: gap uniform on {1..T-1},
// then source uniform on {0..T-gap}, so source + gap never leaves the chain.
struct SDraw {
  int gap;
  int source;
};

SDraw sample_s(int steps, std::uint64_t seed);

// Evaluation grid for the two-step predictor: earlier steps s_j with one
// noised copy of each training point and a probability mass per step.
// Fixed once per experiment and regenerable from the recorded seeds.
struct SGridEntry {
  int s = 0;
  double weight = 1.0;
  Eigen::MatrixXd states;  // row i: training point i noised to step s
  std::uint64_t seed = 0;
};

struct SGrid {
  std::vector<SGridEntry> entries;

  // Single entry at s = 0: the raw training points, weight 1.
  static SGrid point_mass_zero(const Dataset& data);

  // draws values of s via sample_s from the master seed and noises every
  // training point once per drawn s. include_zero prepends an s = 0 atom so
  // full reverse runs keep at least one usable entry down to t = 1.
  static SGrid sampled(const Schedule& sched, const Dataset& data, int draws,
                       std::uint64_t seed, bool include_zero = true);
};

// Exact minimizer of the two-step objective. At evaluation step t only grid
// entries with s < t participate; their kernel terms carry the
// dimension-dependent normalizing constants, which differ across s and do
// not cancel. All sums run in log space via log-sum-exp.
class EmpiricalXi final : public Predictor {
 public:
  EmpiricalXi(Schedule sched, Dataset data, SGrid grid);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x, int t) const override;
  predictor_kind kind() const override { return predictor_kind::xi_empirical; }
  int dim() const override { return data_.dim(); }

 private:
  Schedule sched_;
  Dataset data_;
  SGrid grid_;
};

// Closed-form noise predictor for an analytic target: the noised marginal is
// a Gaussian mixture with component variance alpha_bar*sigma^2 + 1-alpha_bar,
// and the prediction is -sqrt(1-alpha_bar) times its score. Point clouds are
// the sigma = 0 case of the same formula.
class OracleEps final : public Predictor {
 public:
  OracleEps(Schedule sched, TargetSpec spec);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x, int t) const override;
  predictor_kind kind() const override { return predictor_kind::eps_oracle; }
  int dim() const override { return spec_.dim(); }

  // Negative score of the noised marginal at (x, t).
  Eigen::VectorXd neg_score(const Eigen::VectorXd& x, int t) const;

 private:
  Schedule sched_;
  TargetSpec spec_;
};

// xi-kind counterpart of OracleEps: predicts the negative score directly,
// i.e. OracleEps divided by sqrt(1 - alpha_bar(t)). Reference predictor for
// EmpiricalXi comparisons.
class OracleScore final : public Predictor {
 public:
  OracleScore(Schedule sched, TargetSpec spec) : inner_(std::move(sched), std::move(spec)) {}

  Eigen::VectorXd operator()(const Eigen::VectorXd& x, int t) const override {
    return inner_.neg_score(x, t);
  }
  predictor_kind kind() const override { return predictor_kind::score_oracle_derived; }
  int dim() const override { return inner_.dim(); }

 private:
  OracleEps inner_;
};

// Invariance probe for the rescaled conditional two-step noise: computes
// E[xi_{t,s} | x_t] / sqrt(1 - r(t,s)) analytically for each listed s by
// Gaussian conditioning through the step-s mixture, and returns the largest
// pairwise max-norm deviation. The quantity is one and the same negative
// score for every s, so the deviation is pure numerical error.
double tweedie_check(const TargetSpec& spec, const Schedule& sched,
                     const Eigen::VectorXd& x, int t, const std::vector<int>& s_list);

}  // namespace empdiff
