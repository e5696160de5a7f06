#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "empdiff/target.hpp"

namespace empdiff {

// Training set: one point per row. radius is the largest row norm, the
// support radius entering the mutual-information bound.
struct Dataset {
  Eigen::MatrixXd points;
  double radius = 0.0;

  static Dataset from_points(Eigen::MatrixXd points);

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

enum class data_format { csv, cifar10_binary };

// n i.i.d. draws, deterministic given seed. A point-cloud spec with
// n == #points returns exactly those points in order; any other n draws
// rows uniformly with replacement.
Dataset sample_dataset(const TargetSpec& spec, int n, std::uint64_t seed);

// CSV: header-less comma-separated reals, one point per row.
// CIFAR-10 binary: 3073-byte records (label byte + 3072 pixels); labels are
// dropped and pixel v maps to 2v/255 - 1. Malformed input throws
// format_error carrying the byte offset.
Dataset load_dataset(const std::string& path, data_format format);

// 17 significant digits so a save/load round trip is bit-exact.
void save_csv(const Dataset& data, const std::string& path);

}  // namespace empdiff
