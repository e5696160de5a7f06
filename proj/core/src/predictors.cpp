#include "empdiff/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "empdiff/errors.hpp"
#include "empdiff/forward.hpp"
#include "empdiff/rng.hpp"

namespace empdiff {

namespace {

constexpr double log_2pi = 1.8378770664093454836;  // log(2*pi)

void check_predictor_step(const Schedule& sched, int t) {
  if (t < 1 || t > sched.steps()) {
    throw argument_error("predictors are defined for 1 <= t <= T, got t=" +
                         std::to_string(t));
  }
}

}  // namespace

std::string predictor_kind_name(predictor_kind kind) {
  switch (kind) {
    case predictor_kind::eps_empirical: return "eps-empirical";
    case predictor_kind::xi_empirical: return "xi-empirical";
    case predictor_kind::eps_oracle: return "eps-oracle";
    case predictor_kind::score_oracle_derived: return "score-oracle-derived";
  }
  return "unknown";
}

Eigen::VectorXd posterior_weights(const Schedule& sched, const Dataset& data,
                                  const Eigen::VectorXd& x, int t) {
  check_predictor_step(sched, t);
  if (x.size() != data.dim()) {
    throw argument_error("query dimension " + std::to_string(x.size()) +
                         " does not match dataset dimension " + std::to_string(data.dim()));
  }
  const double ab = sched.alpha_bar(t);
  const double h = 1.0 - ab;
  const double sab = std::sqrt(ab);

  // Row i of the intermediate is x - sqrt(ab) x_i.
  Eigen::VectorXd sq =
      ((data.points * (-sab)).rowwise() + x.transpose()).rowwise().squaredNorm();
  Eigen::VectorXd logw = -sq / (2.0 * h);
  const double m = logw.maxCoeff();
  Eigen::VectorXd w = (logw.array() - m).exp();
  w /= w.sum();
  return w;
}

Eigen::VectorXd posterior_mean_estimate(const Schedule& sched, const Dataset& data,
                                        const Eigen::VectorXd& x, int t) {
  Eigen::VectorXd w = posterior_weights(sched, data, x, t);
  return data.points.transpose() * w;
}

EmpiricalEps::EmpiricalEps(Schedule sched, Dataset data)
    : sched_(std::move(sched)), data_(std::move(data)) {}

Eigen::VectorXd EmpiricalEps::operator()(const Eigen::VectorXd& x, int t) const {
  const double ab = sched_.alpha_bar(t);
  Eigen::VectorXd x0_hat = posterior_mean_estimate(sched_, data_, x, t);
  // Same algebra as the softmax form of the estimator; routing through the
  // implied clean point keeps the reconstruction identity exact.
  return (x - std::sqrt(ab) * x0_hat) / std::sqrt(1.0 - ab);
}

SDraw sample_s(int steps, std::uint64_t seed) {
  if (steps < 2) {
    throw argument_error("sample_s needs at least a 2-step chain, got T=" +
                         std::to_string(steps));
  }
  rng_stream rng(seed, stream_tag::s_grid, 0, 0);
  int gap = 1 + static_cast<int>(rng.uniform() * (steps - 1));
  if (gap > steps - 1) gap = steps - 1;
  int source = static_cast<int>(rng.uniform() * (steps - gap + 1));
  if (source > steps - gap) source = steps - gap;
  return SDraw{gap, source};
}

SGrid SGrid::point_mass_zero(const Dataset& data) {
  SGrid grid;
  SGridEntry entry;
  entry.s = 0;
  entry.weight = 1.0;
  entry.states = data.points;
  entry.seed = 0;
  grid.entries.push_back(std::move(entry));
  return grid;
}

SGrid SGrid::sampled(const Schedule& sched, const Dataset& data, int draws,
                     std::uint64_t seed, bool include_zero) {
  if (draws < 1 && !include_zero) {
    throw config_error("grid needs at least one entry");
  }
  SGrid grid;
  const double total = static_cast<double>(draws + (include_zero ? 1 : 0));
  if (include_zero) {
    SGridEntry zero;
    zero.s = 0;
    zero.weight = 1.0 / total;
    zero.states = data.points;
    zero.seed = seed;
    grid.entries.push_back(std::move(zero));
  }
  for (int e = 0; e < draws; ++e) {
    SGridEntry entry;
    entry.seed = derive_seed(seed, static_cast<std::uint64_t>(e));
    entry.s = sample_s(sched.steps(), entry.seed).source;
    entry.weight = 1.0 / total;
    if (entry.s == 0) {
      entry.states = data.points;
    } else {
      entry.states.resize(data.n(), data.dim());
      for (int i = 0; i < data.n(); ++i) {
        NoisePair np = noise_to(sched, data.points.row(i).transpose(), entry.s,
                                derive_seed(entry.seed, static_cast<std::uint64_t>(i)));
        entry.states.row(i) = np.state.transpose();
      }
    }
    grid.entries.push_back(std::move(entry));
  }
  return grid;
}

EmpiricalXi::EmpiricalXi(Schedule sched, Dataset data, SGrid grid)
    : sched_(std::move(sched)), data_(std::move(data)), grid_(std::move(grid)) {
  if (grid_.entries.empty()) throw config_error("grid has no entries");
  for (const auto& entry : grid_.entries) {
    if (entry.states.rows() != data_.n() || entry.states.cols() != data_.dim()) {
      throw config_error("grid entry shape does not match dataset");
    }
  }
}

Eigen::VectorXd EmpiricalXi::operator()(const Eigen::VectorXd& x, int t) const {
  check_predictor_step(sched_, t);
  if (x.size() != data_.dim()) {
    throw argument_error("query dimension does not match dataset dimension");
  }
  const int d = data_.dim();
  const int n = data_.n();

  struct active_entry {
    const SGridEntry* entry;
    double sqrt_r;
    double h;        // 1 - r
    double log_base; // log weight + log kernel normalizer
  };
  std::vector<active_entry> active;
  for (const auto& entry : grid_.entries) {
    if (entry.s >= t || entry.weight <= 0.0) continue;
    const double r = sched_.ratio(t, entry.s);
    if (r >= 1.0) throw argument_error("degenerate ratio r=1 between grid step and t");
    const double h = 1.0 - r;
    active.push_back({&entry, std::sqrt(r), h,
                      std::log(entry.weight) - 0.5 * d * (log_2pi + std::log(h))});
  }
  if (active.empty()) {
    throw config_error("grid has no entry earlier than t=" + std::to_string(t));
  }

  // Pass 1: all log kernel terms, tracking the max for stable exponentials.
  Eigen::MatrixXd logterm(active.size(), n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < active.size(); ++a) {
    const auto& ae = active[a];
    Eigen::VectorXd sq =
        ((ae.entry->states * (-ae.sqrt_r)).rowwise() + x.transpose()).rowwise().squaredNorm();
    logterm.row(a) = (ae.log_base - (sq.array() / (2.0 * ae.h))).transpose();
    peak = std::max(peak, logterm.row(a).maxCoeff());
  }

  // Pass 2: ratio of the two kernel sums.
  Eigen::VectorXd numer = Eigen::VectorXd::Zero(d);
  double denom = 0.0;
  for (std::size_t a = 0; a < active.size(); ++a) {
    const auto& ae = active[a];
    Eigen::VectorXd w = (logterm.row(a).transpose().array() - peak).exp();
    denom += w.sum();
    Eigen::VectorXd avg = ae.entry->states.transpose() * w;  // sum_i w_i x_s^i
    numer += (w.sum() * x - ae.sqrt_r * avg) / ae.h;
  }
  return numer / denom;
}

OracleEps::OracleEps(Schedule sched, TargetSpec spec)
    : sched_(std::move(sched)), spec_(std::move(spec)) {
  spec_.validate();
  if (!spec_.analytic()) {
    throw config_error("no closed-form noised marginal for target kind " +
                       target_kind_name(spec_.kind));
  }
}

Eigen::VectorXd OracleEps::neg_score(const Eigen::VectorXd& x, int t) const {
  check_predictor_step(sched_, t);
  if (x.size() != spec_.dim()) {
    throw argument_error("query dimension does not match target dimension");
  }
  const double ab = sched_.alpha_bar(t);
  const double sab = std::sqrt(ab);
  const int d = spec_.dim();
  const std::size_t K = spec_.means.size();

  std::vector<double> logg(K, -std::numeric_limits<double>::infinity());
  std::vector<double> var(K, 0.0);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    if (spec_.weights[k] <= 0.0) continue;
    var[k] = ab * spec_.scales[k] * spec_.scales[k] + (1.0 - ab);
    const double sq = (x - sab * spec_.means[k]).squaredNorm();
    logg[k] = std::log(spec_.weights[k]) - 0.5 * d * (log_2pi + std::log(var[k])) -
              sq / (2.0 * var[k]);
    peak = std::max(peak, logg[k]);
  }

  Eigen::VectorXd score_neg = Eigen::VectorXd::Zero(d);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (spec_.weights[k] <= 0.0) continue;
    const double g = std::exp(logg[k] - peak);
    total += g;
    score_neg += g * (x - sab * spec_.means[k]) / var[k];
  }
  return score_neg / total;
}

Eigen::VectorXd OracleEps::operator()(const Eigen::VectorXd& x, int t) const {
  const double ab = sched_.alpha_bar(t);
  return std::sqrt(1.0 - ab) * neg_score(x, t);
}

double tweedie_check(const TargetSpec& spec, const Schedule& sched,
                     const Eigen::VectorXd& x, int t, const std::vector<int>& s_list) {
  spec.validate();
  if (!spec.analytic()) {
    throw config_error("no closed-form noised marginal for target kind " +
                       target_kind_name(spec.kind));
  }
  if (s_list.empty()) throw argument_error("empty s list");
  const int d = spec.dim();
  const std::size_t K = spec.means.size();

  std::vector<Eigen::VectorXd> rescaled;
  rescaled.reserve(s_list.size());
  for (int s : s_list) {
    if (s < 0 || s >= t) {
      throw argument_error("s=" + std::to_string(s) + " not earlier than t=" +
                           std::to_string(t));
    }
    const double r = sched.ratio(t, s);
    const double ab_s = sched.alpha_bar(s);
    const double sr = std::sqrt(r);

    // Mixture components of the step-s marginal, conditioned forward to t.
    std::vector<double> logg(K, -std::numeric_limits<double>::infinity());
    std::vector<Eigen::VectorXd> cond(K);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      if (spec.weights[k] <= 0.0) continue;
      const Eigen::VectorXd m = std::sqrt(ab_s) * spec.means[k];
      const double v = ab_s * spec.scales[k] * spec.scales[k] + (1.0 - ab_s);
      const double vt = r * v + (1.0 - r);
      const Eigen::VectorXd gap = x - sr * m;
      logg[k] = std::log(spec.weights[k]) - 0.5 * d * (log_2pi + std::log(vt)) -
                gap.squaredNorm() / (2.0 * vt);
      cond[k] = m + (sr * v / vt) * gap;  // E[x_s | x_t, component k]
      peak = std::max(peak, logg[k]);
    }
    Eigen::VectorXd mean_s = Eigen::VectorXd::Zero(d);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (spec.weights[k] <= 0.0) continue;
      const double g = std::exp(logg[k] - peak);
      total += g;
      mean_s += g * cond[k];
    }
    mean_s /= total;
    rescaled.push_back((x - sr * mean_s) / (1.0 - r));
  }

  double dev = 0.0;
  for (std::size_t a = 0; a + 1 < rescaled.size(); ++a) {
    for (std::size_t b = a + 1; b < rescaled.size(); ++b) {
      dev = std::max(dev, (rescaled[a] - rescaled[b]).cwiseAbs().maxCoeff());
    }
  }
  return dev;
}

}  // namespace empdiff
