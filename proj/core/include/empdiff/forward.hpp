#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "empdiff/schedule.hpp"

namespace empdiff {

// Noised state plus the exact standard-normal draw that produced it, so
// callers can verify state = sqrt(r) * input + sqrt(1-r) * noise.
struct NoisePair {
  Eigen::VectorXd state;
  Eigen::VectorXd noise;
};

// One jump x_0 -> x_t of the noising chain. Equal (inputs, seed) give
// bit-identical output.
NoisePair noise_to(const Schedule& sched, const Eigen::VectorXd& x0, int t,
                   std::uint64_t seed);

// Jump x_s -> x_t between two chain steps, 0 <= s < t. With s = 0 this is
// noise_to, bit for bit.
NoisePair noise_between(const Schedule& sched, const Eigen::VectorXd& x_s, int t,
                        int s, std::uint64_t seed);

}  // namespace empdiff
