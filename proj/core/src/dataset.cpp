#include "empdiff/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "empdiff/errors.hpp"
#include "empdiff/rng.hpp"

namespace empdiff {

Dataset Dataset::from_points(Eigen::MatrixXd points) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw config_error("dataset needs at least one point and one dimension");
  }
  if (!points.allFinite()) throw config_error("dataset entries must be finite");
  Dataset d;
  d.radius = points.rowwise().norm().maxCoeff();
  d.points = std::move(points);
  return d;
}

namespace {

Eigen::VectorXd draw_point(const TargetSpec& spec, rng_stream& rng) {
  const int d = spec.dim();
  switch (spec.kind) {
    case target_kind::isotropic_gaussian:
      return spec.means[0] + spec.scales[0] * rng.gaussian_vector(d);
    case target_kind::gaussian_mixture: {
      double u = rng.uniform();
      std::size_t k = 0;
      double acc = 0.0;
      for (; k + 1 < spec.weights.size(); ++k) {
        acc += spec.weights[k];
        if (u < acc) break;
      }
      return spec.means[k] + spec.scales[k] * rng.gaussian_vector(d);
    }
    case target_kind::ring: {
      double theta = 2.0 * std::numbers::pi * rng.uniform();
      double rad = spec.scales[0] + spec.scales[1] * rng.gaussian();
      Eigen::VectorXd p(2);
      p << spec.means[0][0] + rad * std::cos(theta), spec.means[0][1] + rad * std::sin(theta);
      return p;
    }
    case target_kind::point_cloud: {
      auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(spec.means.size()));
      if (idx >= spec.means.size()) idx = spec.means.size() - 1;
      return spec.means[idx];
    }
  }
  throw config_error("unknown target kind");
}

}  // namespace

Dataset sample_dataset(const TargetSpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw config_error("sample count must be at least 1");
  const int d = spec.dim();
  Eigen::MatrixXd points(n, d);
  if (spec.kind == target_kind::point_cloud &&
      static_cast<std::size_t>(n) == spec.means.size()) {
    for (int i = 0; i < n; ++i) points.row(i) = spec.means[i].transpose();
    return Dataset::from_points(std::move(points));
  }
  for (int i = 0; i < n; ++i) {
    rng_stream rng(seed, stream_tag::dataset, static_cast<std::uint32_t>(i), 0);
    points.row(i) = draw_point(spec, rng).transpose();
  }
  return Dataset::from_points(std::move(points));
}

namespace {

Dataset load_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path, 0);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.empty()) throw format_error("empty file " + path, 0);

  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  const std::size_t len = text.size();
  while (pos < len) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = len;
    std::size_t line_end = eol;
    if (line_end > pos && text[line_end - 1] == '\r') --line_end;
    if (line_end > pos) {
      std::vector<double> row;
      std::size_t field = pos;
      while (field <= line_end) {
        std::size_t comma = text.find(',', field);
        if (comma == std::string::npos || comma > line_end) comma = line_end;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data() + field, text.data() + comma, v);
        if (ec != std::errc() || ptr != text.data() + comma) {
          throw format_error("bad number in " + path, field);
        }
        if (!std::isfinite(v)) throw format_error("non-finite value in " + path, field);
        row.push_back(v);
        if (comma == line_end) break;
        field = comma + 1;
      }
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw format_error("ragged row in " + path, pos);
      }
      rows.push_back(std::move(row));
    }
    pos = eol + 1;
  }
  if (rows.empty()) throw format_error("no data rows in " + path, 0);

  Eigen::MatrixXd points(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return Dataset::from_points(std::move(points));
}

constexpr std::size_t cifar_record = 3073;  // label byte + 32*32*3 pixels
constexpr std::size_t cifar_dim = 3072;

Dataset load_cifar_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path, 0);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.empty()) throw format_error("empty file " + path, 0);
  if (bytes.size() % cifar_record != 0) {
    std::size_t complete = bytes.size() / cifar_record;
    throw format_error("truncated record in " + path, complete * cifar_record);
  }
  const std::size_t n = bytes.size() / cifar_record;
  Eigen::MatrixXd points(n, cifar_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* rec = bytes.data() + i * cifar_record + 1;  // skip label
    for (std::size_t j = 0; j < cifar_dim; ++j) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          2.0 * static_cast<double>(rec[j]) / 255.0 - 1.0;
    }
  }
  return Dataset::from_points(std::move(points));
}

}  // namespace

Dataset load_dataset(const std::string& path, data_format format) {
  switch (format) {
    case data_format::csv: return load_csv_file(path);
    case data_format::cifar10_binary: return load_cifar_file(path);
  }
  throw config_error("unknown data format");
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path);
  char buf[64];
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.dim(); ++j) {
      int len = std::snprintf(buf, sizeof buf, "%.17g", data.points(i, j));
      if (j) out.put(',');
      out.write(buf, len);
    }
    out.put('\n');
  }
}

}  // namespace empdiff
