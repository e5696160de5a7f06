#include "empdiff/samplers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "empdiff/errors.hpp"
#include "empdiff/forward.hpp"
#include "empdiff/rng.hpp"

namespace empdiff {

std::string sampler_method_name(sampler_method method) {
  switch (method) {
    case sampler_method::ddpm: return "ddpm";
    case sampler_method::ddim: return "ddim";
    case sampler_method::prev_status: return "prev-status";
  }
  return "unknown";
}

namespace {

void check_sampler_step(const Schedule& sched, int t) {
  if (t < 1 || t > sched.steps()) {
    throw argument_error("sampler step " + std::to_string(t) + " outside [1, " +
                         std::to_string(sched.steps()) + "]");
  }
}

Eigen::VectorXd step_noise(const Schedule& sched, Eigen::Index d, int t,
                           std::uint64_t seed) {
  rng_stream rng(seed, stream_tag::reverse_noise, 0, static_cast<std::uint32_t>(t));
  return std::sqrt(sched.tilde_beta(t)) * rng.gaussian_vector(d);
}

}  // namespace

Eigen::VectorXd ddpm_mean(const Schedule& sched, const Predictor& pred,
                          const Eigen::VectorXd& x_t, int t) {
  check_sampler_step(sched, t);
  const double a = sched.alpha(t);
  const double ab = sched.alpha_bar(t);
  return (x_t - (sched.beta(t) / std::sqrt(1.0 - ab)) * pred(x_t, t)) / std::sqrt(a);
}

Eigen::VectorXd ddpm_step(const Schedule& sched, const Predictor& pred,
                          const Eigen::VectorXd& x_t, int t, std::uint64_t seed) {
  Eigen::VectorXd mean = ddpm_mean(sched, pred, x_t, t);
  if (t == 1) return mean;  // final step is mean-only
  return mean + step_noise(sched, x_t.size(), t, seed);
}

Eigen::VectorXd ddim_step(const Schedule& sched, const Predictor& pred,
                          const Eigen::VectorXd& x_t, int t) {
  check_sampler_step(sched, t);
  const double ab_t = sched.alpha_bar(t);
  const double ab_prev = sched.alpha_bar(t - 1);
  Eigen::VectorXd eps = pred(x_t, t);
  Eigen::VectorXd x0_est = (x_t - std::sqrt(1.0 - ab_t) * eps) / std::sqrt(ab_t);
  return std::sqrt(ab_prev) * x0_est + std::sqrt(1.0 - ab_prev) * eps;
}

Eigen::VectorXd prev_status_mean(const Schedule& sched, const Predictor& pred,
                                 const Eigen::VectorXd& x_t, int t) {
  check_sampler_step(sched, t);
  const double r = sched.ratio(t, t - 1);
  const double sr = std::sqrt(r);
  return x_t / sr - ((1.0 - r) / sr) * pred(x_t, t);
}

Eigen::VectorXd prev_status_step(const Schedule& sched, const Predictor& pred,
                                 const Eigen::VectorXd& x_t, int t, bool stochastic,
                                 std::uint64_t seed) {
  Eigen::VectorXd mean = prev_status_mean(sched, pred, x_t, t);
  if (!stochastic || t == 1) return mean;
  return mean + step_noise(sched, x_t.size(), t, seed);
}

namespace {

Trajectory run_one(const Schedule& sched, const Predictor& pred, sampler_method method,
                   const StartSpec& start, std::uint64_t seed, std::uint32_t index) {
  const std::uint64_t traj_seed = derive_seed(seed, index);

  Trajectory traj;
  traj.seed = seed;
  traj.index = index;
  traj.method = method;
  traj.pred_kind = pred.kind();
  traj.start = start;

  int start_step = 0;
  Eigen::VectorXd x;
  if (const auto* noise_start = std::get_if<StartFromNoise>(&start)) {
    if (noise_start->dim < 1) throw config_error("noise start needs a positive dimension");
    start_step = sched.steps();
    rng_stream rng(traj_seed, stream_tag::reverse_init, 0, 0);
    x = rng.gaussian_vector(noise_start->dim);
  } else {
    const auto& partial = std::get<StartFromPartial>(start);
    if (partial.step < 1 || partial.step > sched.steps()) {
      throw argument_error("partial start step " + std::to_string(partial.step) +
                           " outside [1, " + std::to_string(sched.steps()) + "]");
    }
    start_step = partial.step;
    x = noise_to(sched, partial.x0, partial.step, traj_seed).state;
  }

  traj.states.reserve(static_cast<std::size_t>(start_step) + 1);
  traj.states.emplace_back(start_step, x);
  for (int t = start_step; t >= 1; --t) {
    switch (method) {
      case sampler_method::ddpm:
        x = ddpm_step(sched, pred, x, t, traj_seed);
        break;
      case sampler_method::ddim:
        x = ddim_step(sched, pred, x, t);
        break;
      case sampler_method::prev_status:
        x = prev_status_step(sched, pred, x, t, true, traj_seed);
        break;
    }
    traj.states.emplace_back(t - 1, x);
  }
  return traj;
}

}  // namespace

std::vector<Trajectory> generate(const Schedule& sched, const Predictor& pred,
                                 sampler_method method, int count, const StartSpec& start,
                                 std::uint64_t seed, int threads) {
  if (count < 1) throw config_error("batch size must be at least 1");
  const bool eps_method = method == sampler_method::ddpm || method == sampler_method::ddim;
  if (eps_method && !is_eps_kind(pred.kind())) {
    throw config_error(sampler_method_name(method) + " needs an eps-kind predictor, got " +
                       predictor_kind_name(pred.kind()));
  }
  if (!eps_method && !is_xi_kind(pred.kind())) {
    throw config_error("prev-status needs a xi-kind predictor, got " +
                       predictor_kind_name(pred.kind()));
  }

  std::vector<Trajectory> out(static_cast<std::size_t>(count));
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  threads = std::min(threads, count);

  if (threads == 1) {
    for (int i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] =
          run_one(sched, pred, method, start, seed, static_cast<std::uint32_t>(i));
    }
    return out;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[static_cast<std::size_t>(i)] =
            run_one(sched, pred, method, start, seed, static_cast<std::uint32_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

Trajectory replay(const Schedule& sched, const Predictor& pred, const Trajectory& traj) {
  return run_one(sched, pred, traj.method, traj.start, traj.seed, traj.index);
}

}  // namespace empdiff
