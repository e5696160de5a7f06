#include "empdiff/forward.hpp"

#include <cmath>
#include <string>

#include "empdiff/errors.hpp"
#include "empdiff/rng.hpp"

namespace empdiff {

NoisePair noise_between(const Schedule& sched, const Eigen::VectorXd& x_s, int t,
                        int s, std::uint64_t seed) {
  if (s < 0 || s >= t || t > sched.steps()) {
    throw argument_error("noise_between needs 0 <= s < t <= T, got s=" +
                         std::to_string(s) + " t=" + std::to_string(t));
  }
  const double r = sched.ratio(t, s);
  rng_stream rng(seed, stream_tag::forward, static_cast<std::uint32_t>(s),
                 static_cast<std::uint32_t>(t));
  NoisePair out;
  out.noise = rng.gaussian_vector(x_s.size());
  out.state = std::sqrt(r) * x_s + std::sqrt(1.0 - r) * out.noise;
  return out;
}

NoisePair noise_to(const Schedule& sched, const Eigen::VectorXd& x0, int t,
                   std::uint64_t seed) {
  return noise_between(sched, x0, t, 0, seed);
}

}  // namespace empdiff
