#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "empdiff/dataset.hpp"
#include "empdiff/errors.hpp"
#include "empdiff/target.hpp"

using namespace empdiff;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / (std::string("empdiff_test_") + name);
}

struct file_guard {
  fs::path path;
  ~file_guard() {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("from_points keeps rows and computes the support radius") {
  Eigen::MatrixXd pts(2, 2);
  pts << 3.0, 4.0, 0.0, 1.0;
  Dataset d = Dataset::from_points(pts);
  CHECK(d.n() == 2);
  CHECK(d.dim() == 2);
  CHECK(d.radius == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(d.points(0, 0) == 3.0);
  CHECK(d.points(1, 1) == 1.0);

  CHECK_THROWS_AS(Dataset::from_points(Eigen::MatrixXd(0, 2)), config_error);
  CHECK_THROWS_AS(Dataset::from_points(Eigen::MatrixXd(2, 0)), config_error);
}

TEST_CASE("point cloud spec with matching n returns the points verbatim") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0.1, -0.2, 1.5, 0.4, -0.7, 0.9;
  TargetSpec spec = TargetSpec::point_cloud(pts);
  Dataset d = sample_dataset(spec, 3, 77);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(d.points(i, j) == pts(i, j));

  // other sizes resample rows of the cloud
  Dataset big = sample_dataset(spec, 50, 77);
  CHECK(big.n() == 50);
  for (int i = 0; i < 50; ++i) {
    bool found = false;
    for (int k = 0; k < 3; ++k)
      if (big.points.row(i) == pts.row(k)) found = true;
    CHECK(found);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  TargetSpec spec = TargetSpec::isotropic_gaussian(Eigen::Vector2d(0.5, -1.0), 2.0);
  Dataset a = sample_dataset(spec, 40, 123);
  Dataset b = sample_dataset(spec, 40, 123);
  Dataset c = sample_dataset(spec, 40, 124);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
}

TEST_CASE("isotropic gaussian sample moments") {
  Eigen::Vector2d mu(1.0, -2.0);
  TargetSpec spec = TargetSpec::isotropic_gaussian(mu, 0.7);
  const int n = 20000;
  Dataset d = sample_dataset(spec, n, 9);
  Eigen::VectorXd mean = d.points.colwise().mean();
  double band = 4.0 * 0.7 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean[0] - mu[0]) < band);
  CHECK(std::abs(mean[1] - mu[1]) < band);
  Eigen::MatrixXd centered = d.points.rowwise() - mean.transpose();
  double var = centered.squaredNorm() / (2.0 * n);
  CHECK(var == doctest::Approx(0.49).epsilon(0.05));
}

TEST_CASE("mixture samples land near their components") {
  std::vector<Eigen::VectorXd> means = {Eigen::Vector2d(-6.0, 0.0), Eigen::Vector2d(6.0, 0.0)};
  TargetSpec spec = TargetSpec::gaussian_mixture(means, {0.1, 0.1}, {0.25, 0.75});
  const int n = 8000;
  Dataset d = sample_dataset(spec, n, 3);
  int right = 0;
  for (int i = 0; i < n; ++i) {
    double dl = (d.points.row(i).transpose() - means[0]).norm();
    double dr = (d.points.row(i).transpose() - means[1]).norm();
    CHECK(std::min(dl, dr) < 1.0);
    if (dr < dl) ++right;
  }
  double frac = static_cast<double>(right) / n;
  CHECK(frac == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("ring samples sit in the annulus") {
  TargetSpec spec = TargetSpec::ring(Eigen::Vector2d(1.0, 2.0), 3.0, 0.05);
  Dataset d = sample_dataset(spec, 4000, 5);
  for (int i = 0; i < d.n(); ++i) {
    double r = (d.points.row(i) - Eigen::RowVector2d(1.0, 2.0)).norm();
    CHECK(r > 3.0 - 6.0 * 0.05);
    CHECK(r < 3.0 + 6.0 * 0.05);
  }
  // angles should cover the circle: all four quadrants populated
  int quad[4] = {0, 0, 0, 0};
  for (int i = 0; i < d.n(); ++i) {
    double x = d.points(i, 0) - 1.0, y = d.points(i, 1) - 2.0;
    quad[(x >= 0 ? 0 : 1) + (y >= 0 ? 0 : 2)]++;
  }
  for (int q = 0; q < 4; ++q) CHECK(quad[q] > 600);
}

TEST_CASE("sample size must be positive") {
  TargetSpec spec = TargetSpec::isotropic_gaussian(Eigen::Vector2d(0, 0), 1.0);
  CHECK_THROWS_AS(sample_dataset(spec, 0, 1), config_error);
  CHECK_THROWS_AS(sample_dataset(spec, -3, 1), config_error);
}

TEST_CASE("csv round trip is bit exact") {
  TargetSpec spec = TargetSpec::isotropic_gaussian(Eigen::Vector3d(0.1, -0.2, 0.3), 1.3);
  Dataset d = sample_dataset(spec, 25, 31);
  file_guard g{temp_file("roundtrip.csv")};
  save_csv(d, g.path.string());
  Dataset back = load_dataset(g.path.string(), data_format::csv);
  REQUIRE(back.n() == d.n());
  REQUIRE(back.dim() == d.dim());
  CHECK(back.points == d.points);
  CHECK(back.radius == d.radius);
}

TEST_CASE("csv parse errors carry byte offsets") {
  file_guard empty{temp_file("empty.csv")};
  { std::ofstream out(empty.path); }
  try {
    load_dataset(empty.path.string(), data_format::csv);
    FAIL("expected format_error");
  } catch (const format_error& e) {
    CHECK(e.byte_offset() == 0);
  }

  // "1.0,2.0\n1.0,oops\n": the bad field starts at byte 12
  file_guard bad{temp_file("badnum.csv")};
  {
    std::ofstream out(bad.path);
    out << "1.0,2.0\n1.0,oops\n";
  }
  try {
    load_dataset(bad.path.string(), data_format::csv);
    FAIL("expected format_error");
  } catch (const format_error& e) {
    CHECK(e.byte_offset() == 12);
  }

  // ragged row: second line starts at byte 8 and has the wrong arity
  file_guard ragged{temp_file("ragged.csv")};
  {
    std::ofstream out(ragged.path);
    out << "1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_AS(load_dataset(ragged.path.string(), data_format::csv), format_error);

  CHECK_THROWS_AS(load_dataset("/nonexistent/empdiff.csv", data_format::csv), format_error);
}

TEST_CASE("cifar10 records decode and truncation is located") {
  // two records: label byte + 3072 pixels each
  file_guard ok{temp_file("ok.bin")};
  {
    std::ofstream out(ok.path, std::ios::binary);
    std::vector<unsigned char> rec(3073, 0);
    rec[0] = 7;          // label, dropped
    rec[1] = 0;          // -> -1
    rec[2] = 255;        // -> 1
    rec[3] = 51;         // -> 2*51/255 - 1 = -0.6
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
    rec[0] = 2;
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  }
  Dataset d = load_dataset(ok.path.string(), data_format::cifar10_binary);
  CHECK(d.n() == 2);
  CHECK(d.dim() == 3072);
  CHECK(d.points(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(d.points(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.points(0, 2) == doctest::Approx(2.0 * 51.0 / 255.0 - 1.0).epsilon(1e-15));
  CHECK(d.points.row(0) == d.points.row(1));

  file_guard trunc{temp_file("trunc.bin")};
  {
    std::ofstream out(trunc.path, std::ios::binary);
    std::vector<unsigned char> bytes(3073 + 100, 1);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }
  try {
    load_dataset(trunc.path.string(), data_format::cifar10_binary);
    FAIL("expected format_error");
  } catch (const format_error& e) {
    CHECK(e.byte_offset() == 3073);  // end of the last complete record
  }
}

TEST_CASE("target spec validation") {
  CHECK_THROWS_AS(TargetSpec::isotropic_gaussian(Eigen::VectorXd(), 1.0), config_error);
  CHECK_THROWS_AS(TargetSpec::isotropic_gaussian(Eigen::Vector2d(0, 0), 0.0), config_error);
  CHECK_THROWS_AS(TargetSpec::isotropic_gaussian(Eigen::Vector2d(0, 0), -1.0), config_error);

  std::vector<Eigen::VectorXd> means = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
  CHECK_THROWS_AS(TargetSpec::gaussian_mixture(means, {1.0, 1.0}, {0.5, 0.6}), config_error);
  CHECK_THROWS_AS(TargetSpec::gaussian_mixture(means, {1.0}, {0.5, 0.5}), config_error);
  std::vector<Eigen::VectorXd> mixed_dims = {Eigen::Vector2d(0, 0), Eigen::Vector3d(1, 1, 1)};
  CHECK_THROWS_AS(TargetSpec::gaussian_mixture(mixed_dims, {1.0, 1.0}, {0.5, 0.5}),
                  config_error);

  CHECK_THROWS_AS(TargetSpec::ring(Eigen::Vector3d(0, 0, 0), 1.0, 0.1), config_error);
  CHECK_THROWS_AS(TargetSpec::ring(Eigen::Vector2d(0, 0), -1.0, 0.1), config_error);

  CHECK(TargetSpec::isotropic_gaussian(Eigen::Vector2d(0, 0), 1.0).analytic());
  CHECK(TargetSpec::point_cloud(Eigen::MatrixXd::Zero(2, 2)).analytic());
  CHECK_FALSE(TargetSpec::ring(Eigen::Vector2d(0, 0), 1.0, 0.1).analytic());
}

}  // TEST_SUITE
