#include "empdiff/schedule.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "empdiff/errors.hpp"

namespace empdiff {

Schedule Schedule::from_betas(std::vector<double> betas) {
  if (betas.empty()) throw config_error("schedule needs at least one step");
  const int T = static_cast<int>(betas.size());
  Schedule s;
  s.log_abar_.resize(T + 1);
  s.log_abar_[0] = 0.0;
  for (int t = 1; t <= T; ++t) {
    double b = betas[t - 1];
    if (!(b > 0.0 && b < 1.0)) {
      throw config_error("beta out of (0,1) at step " + std::to_string(t) +
                         ": " + std::to_string(b));
    }
    s.log_abar_[t] = s.log_abar_[t - 1] + std::log1p(-b);
  }
  s.tilde_betas_.resize(T);
  s.tilde_betas_[0] = 0.0;  // no earlier step to condition on
  for (int t = 2; t <= T; ++t) {
    double abar_prev = std::exp(s.log_abar_[t - 1]);
    double abar_t = std::exp(s.log_abar_[t]);
    s.tilde_betas_[t - 1] = betas[t - 1] * (1.0 - abar_prev) / (1.0 - abar_t);
  }
  s.parent_.resize(T + 1);
  std::iota(s.parent_.begin(), s.parent_.end(), 0);
  s.betas_ = std::move(betas);
  return s;
}

Schedule Schedule::linear(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw config_error("schedule needs at least one step");
  std::vector<double> betas(steps);
  if (steps == 1) {
    betas[0] = beta_start;
  } else {
    double span = (beta_end - beta_start) / (steps - 1);
    for (int t = 0; t < steps; ++t) betas[t] = beta_start + span * t;
  }
  return from_betas(std::move(betas));
}

Schedule Schedule::subsequence(int coarse_steps) const {
  const int T = steps();
  if (coarse_steps < 1 || coarse_steps > T) {
    throw config_error("subsequence length must lie in [1, " + std::to_string(T) +
                       "], got " + std::to_string(coarse_steps));
  }
  const double c = static_cast<double>(T) / coarse_steps;
  Schedule s;
  s.betas_.resize(coarse_steps);
  s.tilde_betas_.resize(coarse_steps);
  s.log_abar_.resize(coarse_steps + 1);
  s.parent_.resize(coarse_steps + 1);
  s.log_abar_[0] = 0.0;
  s.parent_[0] = 0;
  for (int i = 1; i <= coarse_steps; ++i) {
    int t = static_cast<int>(std::ceil(c * i));
    s.log_abar_[i] = log_abar_[t];
    s.parent_[i] = parent_[t];
    double r = std::exp(s.log_abar_[i] - s.log_abar_[i - 1]);
    s.betas_[i - 1] = 1.0 - r;
  }
  s.tilde_betas_[0] = 0.0;
  for (int i = 2; i <= coarse_steps; ++i) {
    double abar_prev = std::exp(s.log_abar_[i - 1]);
    double abar_i = std::exp(s.log_abar_[i]);
    s.tilde_betas_[i - 1] = s.betas_[i - 1] * (1.0 - abar_prev) / (1.0 - abar_i);
  }
  return s;
}

void Schedule::check_step(int t, int lo) const {
  if (t < lo || t > steps()) {
    throw argument_error("step " + std::to_string(t) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(steps()) + "]");
  }
}

double Schedule::beta(int t) const {
  check_step(t, 1);
  return betas_[t - 1];
}

double Schedule::alpha(int t) const { return 1.0 - beta(t); }

double Schedule::alpha_bar(int t) const {
  check_step(t, 0);
  return std::exp(log_abar_[t]);
}

double Schedule::log_alpha_bar(int t) const {
  check_step(t, 0);
  return log_abar_[t];
}

double Schedule::tilde_beta(int t) const {
  check_step(t, 1);
  return tilde_betas_[t - 1];
}

double Schedule::ratio(int t, int s) const {
  check_step(t, 0);
  check_step(s, 0);
  if (s > t) {
    throw argument_error("ratio needs s <= t, got s=" + std::to_string(s) +
                         " t=" + std::to_string(t));
  }
  return std::exp(log_abar_[t] - log_abar_[s]);
}

int Schedule::parent_step(int t) const {
  check_step(t, 0);
  return parent_[t];
}

int closest_coefficient_step(const Schedule& sched, double coef_signal, double coef_noise) {
  int best = 1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= sched.steps(); ++t) {
    double ab = sched.alpha_bar(t);
    double da = std::sqrt(ab) - coef_signal;
    double db = std::sqrt(1.0 - ab) - coef_noise;
    double d2 = da * da + db * db;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = t;
    }
  }
  return best;
}

}  // namespace empdiff
