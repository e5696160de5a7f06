#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Core>

namespace empdiff {

// Counter-based randomness. Every draw is addressed by
// (key = 64-bit seed, tag, stream, step, block): the Philox4x32-10 block
// cipher turns the address into 128 random bits, so draw i of a given
// (seed, tag, stream, step) is the same no matter which thread asks for it
// or in which order streams are consumed. That is the whole point: batch
// results must not depend on scheduling.
//
// Gaussians use the basic Box-Muller transform on two 53-bit uniforms
// (u1 in (0,1], u2 in [0,1)), two normals per 128-bit block, no rejection
// loops. Reimplementations in other languages reproduce the streams by
// matching this recipe exactly.

namespace detail {

struct philox_block {
  std::uint32_t v[4];
};

inline std::uint64_t mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t* hi) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  *hi = static_cast<std::uint32_t>(p >> 32);
  return static_cast<std::uint32_t>(p);
}

// Philox4x32-10 (Salmon et al., Random123). Constants are the published ones.
inline philox_block philox4x32(philox_block ctr, std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint32_t M0 = 0xD2511F53u;
  constexpr std::uint32_t M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u;
  constexpr std::uint32_t W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, hi1;
    std::uint32_t lo0 = static_cast<std::uint32_t>(mulhilo(M0, ctr.v[0], &hi0));
    std::uint32_t lo1 = static_cast<std::uint32_t>(mulhilo(M1, ctr.v[2], &hi1));
    philox_block next;
    next.v[0] = hi1 ^ ctr.v[1] ^ k0;
    next.v[1] = lo1;
    next.v[2] = hi0 ^ ctr.v[3] ^ k1;
    next.v[3] = lo0;
    ctr = next;
    k0 += W0;
    k1 += W1;
  }
  return ctr;
}

}  // namespace detail

// splitmix64 finalizer; used to fold indices into fresh 64-bit seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
  return mix64(seed ^ mix64(a));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

// Purpose tags keep unrelated consumers of one seed on disjoint counters.
enum class stream_tag : std::uint32_t {
  dataset = 1,
  forward = 2,
  reverse_init = 3,
  reverse_noise = 4,
  probe = 5,
  simulate = 6,
  s_grid = 7,
  misc = 8,
};

class rng_stream {
 public:
  rng_stream(std::uint64_t seed, stream_tag tag, std::uint32_t stream, std::uint32_t step)
      : k0_(static_cast<std::uint32_t>(seed)),
        k1_(static_cast<std::uint32_t>(seed >> 32)),
        tag_(static_cast<std::uint32_t>(tag)),
        stream_(stream),
        step_(step) {}

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    refill_if_needed();
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    refill_if_needed();
    std::uint64_t a = next_u64();
    std::uint64_t b = next_u64();
    // u1 in (0,1] so the log is finite.
    double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = gaussian();
    return v;
  }

 private:
  void refill_if_needed() {
    if (words_left_ > 0) return;
    detail::philox_block ctr{{block_, step_, stream_, tag_}};
    buf_ = detail::philox4x32(ctr, k0_, k1_);
    ++block_;
    words_left_ = 4;
  }

  std::uint64_t next_u64() {
    refill_if_needed();
    // Consume two 32-bit words; pairs never straddle a block boundary
    // because blocks hold exactly four words.
    std::uint32_t lo = buf_.v[4 - words_left_];
    --words_left_;
    std::uint32_t hi = buf_.v[4 - words_left_];
    --words_left_;
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  std::uint32_t k0_, k1_, tag_, stream_, step_;
  std::uint32_t block_ = 0;
  detail::philox_block buf_{};
  int words_left_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace empdiff
