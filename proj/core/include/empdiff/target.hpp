#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace empdiff {

enum class target_kind {
  isotropic_gaussian,
  gaussian_mixture,
  ring,
  point_cloud,
};

std::string target_kind_name(target_kind kind);

// Synthetic data distribution. Gaussian kinds admit a closed-form noised
// marginal and score; the ring does not (sampling only).
//
// Field layout per kind:
//   isotropic_gaussian: means = {mu}, scales = {sigma}, weights = {1}
//   gaussian_mixture:   means = {mu_k}, scales = {sigma_k}, weights = {pi_k}
//   ring (2-D only):    means = {center}, scales = {radius, thickness},
//                       weights = {1}
//   point_cloud:        means = the points, scales all 0, weights uniform
struct TargetSpec {
  target_kind kind = target_kind::isotropic_gaussian;
  std::vector<Eigen::VectorXd> means;
  std::vector<double> scales;
  std::vector<double> weights;

  static TargetSpec isotropic_gaussian(Eigen::VectorXd mean, double sigma);
  static TargetSpec gaussian_mixture(std::vector<Eigen::VectorXd> means,
                                     std::vector<double> sigmas,
                                     std::vector<double> weights);
  static TargetSpec ring(Eigen::VectorXd center, double radius, double thickness);
  static TargetSpec point_cloud(const Eigen::MatrixXd& points);

  int dim() const;

  // True when the noised marginal has a closed form (everything but ring).
  bool analytic() const { return kind != target_kind::ring; }

  // Throws config_error on malformed parameters: empty components, weights
  // off the simplex by more than 1e-12, nonpositive mixture scales,
  // mismatched dimensions, non-2-D ring.
  void validate() const;
};

}  // namespace empdiff
