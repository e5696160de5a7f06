#pragma once

#include <vector>

namespace empdiff {

// Variance schedule for the forward noising chain. Steps are 1-based
// (t = 1..T) to match the usual indexing; alpha_bar(0) == 1 by convention.
//
// alpha_bar is accumulated in log space so long schedules with tiny betas
// do not underflow, and signal ratios between two steps stay accurate.
class Schedule {
 public:
  static Schedule linear(int steps, double beta_start, double beta_end);
  static Schedule from_betas(std::vector<double> betas);

  // Coarser schedule built from every ceil(c*i)-th step, c = T/K, i = 1..K.
  // Step K always lands on the parent's final step. The result's
  // parent_step() maps back through this schedule's own parents, so
  // nesting composes.
  Schedule subsequence(int coarse_steps) const;

  int steps() const { return static_cast<int>(betas_.size()); }

  double beta(int t) const;        // t in [1, T]
  double alpha(int t) const;       // 1 - beta(t)
  double alpha_bar(int t) const;   // t in [0, T]
  double log_alpha_bar(int t) const;
  double tilde_beta(int t) const;  // posterior variance factor; 0 at t = 1

  // alpha_bar(t) / alpha_bar(s) for 0 <= s <= t: how much signal survives
  // between the two steps.
  double ratio(int t, int s) const;

  // Index of step t in the schedule this one was thinned from (identity for
  // schedules built directly from betas).
  int parent_step(int t) const;

 private:
  Schedule() = default;
  void check_step(int t, int lo) const;

  std::vector<double> betas_;        // betas_[t-1] = beta_t
  std::vector<double> log_abar_;     // log_abar_[t] = log alpha_bar(t), [0..T]
  std::vector<double> tilde_betas_;  // tilde_betas_[t-1]
  std::vector<int> parent_;          // parent_[t], [0..T]
};

// Step whose (sqrt(alpha_bar), sqrt(1 - alpha_bar)) pair is closest in
// Euclidean distance to (coef_signal, coef_noise). Published coefficient
// pairs are rounded and need not satisfy a^2 + b^2 = 1, so nearest match is
// the honest lookup.
int closest_coefficient_step(const Schedule& sched, double coef_signal, double coef_noise);

}  // namespace empdiff
