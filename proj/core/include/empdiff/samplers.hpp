#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "empdiff/predictors.hpp"
#include "empdiff/schedule.hpp"

namespace empdiff {

enum class sampler_method { ddpm, ddim, prev_status };

std::string sampler_method_name(sampler_method method);

// Posterior-mean part of the stochastic reverse update. Exposed separately
// because several identities are statements about the mean alone.
Eigen::VectorXd ddpm_mean(const Schedule& sched, const Predictor& pred,
                          const Eigen::VectorXd& x_t, int t);

// Stochastic reverse step: mean plus noise of standard deviation
// sqrt(tilde_beta(t)). The final step t = 1 returns the mean unchanged
// (tilde_beta(1) = 0), so the seed is never consumed there.
Eigen::VectorXd ddpm_step(const Schedule& sched, const Predictor& pred,
                          const Eigen::VectorXd& x_t, int t, std::uint64_t seed);

// Deterministic reverse step: re-noises the implied clean-point estimate to
// step t-1 along the predicted direction; alpha_bar(0) = 1 makes the last
// step return the estimate itself.
Eigen::VectorXd ddim_step(const Schedule& sched, const Predictor& pred,
                          const Eigen::VectorXd& x_t, int t);

Eigen::VectorXd prev_status_mean(const Schedule& sched, const Predictor& pred,
                                 const Eigen::VectorXd& x_t, int t);

// Reverse step driven by a xi-kind (negative-score) predictor through the
// one-step ratio r(t, t-1). Noise handling matches ddpm_step.
Eigen::VectorXd prev_status_step(const Schedule& sched, const Predictor& pred,
                                 const Eigen::VectorXd& x_t, int t, bool stochastic,
                                 std::uint64_t seed);

struct StartFromNoise {
  int dim = 0;
};

// Reverse from step s of a known clean point instead of from pure noise.
// source_id tags which point this was so recovery metrics can find it again.
struct StartFromPartial {
  Eigen::VectorXd x0;
  int step = 0;
  int source_id = -1;
};

using StartSpec = std::variant<StartFromNoise, StartFromPartial>;

struct Trajectory {
  std::uint64_t seed = 0;   // master seed of the batch this came from
  std::uint32_t index = 0;  // position within the batch
  sampler_method method = sampler_method::ddim;
  predictor_kind pred_kind = predictor_kind::eps_empirical;
  StartSpec start;
  std::vector<std::pair<int, Eigen::VectorXd>> states;  // (t, x_t), start step down to 0

  const Eigen::VectorXd& final_state() const { return states.back().second; }
};

// Batch of independent reverse runs. Each trajectory's randomness is derived
// from (seed, index), so results are identical for any thread count;
// threads = 0 picks hardware concurrency. prev-status runs stochastic.
std::vector<Trajectory> generate(const Schedule& sched, const Predictor& pred,
                                 sampler_method method, int count, const StartSpec& start,
                                 std::uint64_t seed, int threads = 0);

// Re-executes one trajectory from its recorded seed and index; the result
// must match the stored states bit for bit.
Trajectory replay(const Schedule& sched, const Predictor& pred, const Trajectory& traj);

}  // namespace empdiff
