#include "empdiff/target.hpp"

#include <cmath>
#include <numeric>

#include "empdiff/errors.hpp"

namespace empdiff {

std::string target_kind_name(target_kind kind) {
  switch (kind) {
    case target_kind::isotropic_gaussian: return "isotropic-gaussian";
    case target_kind::gaussian_mixture: return "gaussian-mixture";
    case target_kind::ring: return "ring";
    case target_kind::point_cloud: return "point-cloud";
  }
  return "unknown";
}

TargetSpec TargetSpec::isotropic_gaussian(Eigen::VectorXd mean, double sigma) {
  TargetSpec spec;
  spec.kind = target_kind::isotropic_gaussian;
  spec.means.push_back(std::move(mean));
  spec.scales.push_back(sigma);
  spec.weights.push_back(1.0);
  spec.validate();
  return spec;
}

TargetSpec TargetSpec::gaussian_mixture(std::vector<Eigen::VectorXd> means,
                                        std::vector<double> sigmas,
                                        std::vector<double> weights) {
  TargetSpec spec;
  spec.kind = target_kind::gaussian_mixture;
  spec.means = std::move(means);
  spec.scales = std::move(sigmas);
  spec.weights = std::move(weights);
  spec.validate();
  return spec;
}

TargetSpec TargetSpec::ring(Eigen::VectorXd center, double radius, double thickness) {
  TargetSpec spec;
  spec.kind = target_kind::ring;
  spec.means.push_back(std::move(center));
  spec.scales = {radius, thickness};
  spec.weights = {1.0};
  spec.validate();
  return spec;
}

TargetSpec TargetSpec::point_cloud(const Eigen::MatrixXd& points) {
  TargetSpec spec;
  spec.kind = target_kind::point_cloud;
  const auto n = points.rows();
  if (n < 1) throw config_error("point cloud needs at least one point");
  spec.means.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) spec.means.push_back(points.row(i).transpose());
  spec.scales.assign(static_cast<std::size_t>(n), 0.0);
  spec.weights.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  spec.validate();
  return spec;
}

int TargetSpec::dim() const {
  return means.empty() ? 0 : static_cast<int>(means.front().size());
}

void TargetSpec::validate() const {
  if (means.empty()) throw config_error("target has no components");
  const auto d = means.front().size();
  if (d < 1) throw config_error("target dimension must be at least 1");
  for (const auto& m : means) {
    if (m.size() != d) throw config_error("target component dimensions disagree");
    if (!m.allFinite()) throw config_error("target mean is not finite");
  }
  double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw config_error("target weights sum to " + std::to_string(wsum) + ", expected 1");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw config_error("target weight out of range");
  }
  switch (kind) {
    case target_kind::isotropic_gaussian:
      if (means.size() != 1 || scales.size() != 1 || weights.size() != 1) {
        throw config_error("isotropic-gaussian target takes one mean, one scale");
      }
      if (!(scales[0] > 0.0)) throw config_error("gaussian sigma must be positive");
      break;
    case target_kind::gaussian_mixture:
      if (means.size() != scales.size() || means.size() != weights.size()) {
        throw config_error("mixture component counts disagree");
      }
      for (double s : scales) {
        if (!(s > 0.0)) throw config_error("mixture sigma must be positive");
      }
      break;
    case target_kind::ring:
      if (d != 2) throw config_error("ring target is 2-D only");
      if (means.size() != 1 || scales.size() != 2) {
        throw config_error("ring target takes one center and {radius, thickness}");
      }
      if (!(scales[0] > 0.0)) throw config_error("ring radius must be positive");
      if (!(scales[1] >= 0.0)) throw config_error("ring thickness must be nonnegative");
      break;
    case target_kind::point_cloud:
      if (means.size() != scales.size() || means.size() != weights.size()) {
        throw config_error("point cloud component counts disagree");
      }
      for (double s : scales) {
        if (s != 0.0) throw config_error("point cloud scales must be zero");
      }
      break;
  }
}

}  // namespace empdiff
