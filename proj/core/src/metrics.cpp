#include "empdiff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "empdiff/errors.hpp"
#include "empdiff/rng.hpp"

namespace empdiff {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) throw argument_error("median of empty list");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  if (m % 2 == 1) return v[m / 2];
  return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// Minimal polyline plot; the CSV next to it is the source of truth.
void write_series_svg(const std::string& path, const std::string& title, const Series& s) {
  const double W = 640, H = 400, ML = 70, MR = 20, MT = 30, MB = 40;
  double xmin = s.front().first, xmax = s.front().first;
  double ymin = s.front().second, ymax = s.front().second;
  for (const auto& [x, y] : s) {
    xmin = std::min(xmin, x); xmax = std::max(xmax, x);
    ymin = std::min(ymin, y); ymax = std::max(ymax, y);
  }
  if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
  if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }
  auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path);
  char buf[160];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n";
  out << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                ML, H - MB, W - MR, H - MB);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                ML, MT, ML, H - MB);
  out << buf;
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(s[i].first), py(s[i].second));
    out << buf;
  }
  out << "\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">%s</text>\n",
                ML, title.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
                5.0, py(ymin), ymin);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
                5.0, py(ymax) + 4.0, ymax);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
                px(xmin), H - MB + 16, xmin);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" "
                "text-anchor=\"end\">%.6g</text>\n",
                px(xmax), H - MB + 16, xmax);
  out << buf;
  out << "</svg>\n";
}

}  // namespace

void MetricsReport::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    std::ofstream out(fs::path(dir) / "scalars.csv", std::ios::binary);
    if (!out) throw config_error("cannot write scalars.csv under " + dir);
    out << "name,value\n";
    for (const auto& [k, v] : scalars) out << k << ',' << fmt17(v) << '\n';
  }
  {
    std::ofstream out(fs::path(dir) / "info.csv", std::ios::binary);
    if (!out) throw config_error("cannot write info.csv under " + dir);
    out << "key,value\n";
    for (const auto& [k, v] : info) out << k << ',' << csv_quote(v) << '\n';
  }
  bool any_config = false;
  for (const auto& [k, v] : info) {
    if (k.rfind("config_", 0) == 0) { any_config = true; break; }
  }
  if (any_config) {
    std::ofstream out(fs::path(dir) / "resolved_config.cfg", std::ios::binary);
    for (const auto& [k, v] : info) {
      if (k.rfind("config_", 0) == 0) out << k.substr(7) << " = " << v << '\n';
    }
  }
  for (const auto& [sname, s] : series) {
    std::ofstream out(fs::path(dir) / (sname + ".csv"), std::ios::binary);
    if (!out) throw config_error("cannot write series " + sname + " under " + dir);
    out << "index,value\n";
    for (const auto& [i, v] : s) out << fmt17(i) << ',' << fmt17(v) << '\n';
    if (!s.empty()) {
      write_series_svg((fs::path(dir) / (sname + ".svg")).string(), sname, s);
    }
  }
}

MetricsReport nn_audit(const Eigen::MatrixXd& samples, const Dataset& data, double tau) {
  if (samples.cols() != data.dim()) {
    throw argument_error("sample dimension " + std::to_string(samples.cols()) +
                         " does not match dataset dimension " + std::to_string(data.dim()));
  }
  if (!(tau > 0.0)) throw argument_error("tau must be positive");
  const auto m = samples.rows();
  if (m < 1) throw argument_error("no samples to audit");

  std::vector<double> dist(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    dist[static_cast<std::size_t>(i)] =
        (data.points.rowwise() - samples.row(i)).rowwise().norm().minCoeff();
  }

  MetricsReport rep;
  rep.name = "nn_audit";
  double mean = 0.0;
  std::size_t within = 0;
  Series dseries;
  dseries.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    mean += dist[i];
    if (dist[i] <= tau) ++within;  // boundary counts as memorized
    dseries.emplace_back(static_cast<double>(i), dist[i]);
  }
  mean /= static_cast<double>(dist.size());
  rep.scalars["median"] = median_of(dist);
  rep.scalars["mean"] = mean;
  rep.scalars["memorized_fraction"] =
      static_cast<double>(within) / static_cast<double>(dist.size());
  rep.scalars["tau"] = tau;
  rep.series["distances"] = std::move(dseries);
  return rep;
}

MetricsReport trajectory_divergence(const std::vector<Trajectory>& a,
                                    const std::vector<Trajectory>& b) {
  if (a.empty() || a.size() != b.size()) {
    throw argument_error("trajectory batches must be nonempty and equally sized");
  }
  const std::size_t steps = a.front().states.size();
  const auto d = a.front().states.front().second.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].states.size() != steps || b[i].states.size() != steps) {
      throw argument_error("trajectory step grids differ");
    }
    for (std::size_t j = 0; j < steps; ++j) {
      if (a[i].states[j].first != b[i].states[j].first) {
        throw argument_error("trajectory step grids differ");
      }
    }
    const auto& start_a = a[i].states.front().second;
    const auto& start_b = b[i].states.front().second;
    if (start_a.size() != start_b.size() || (start_a.array() != start_b.array()).any()) {
      throw argument_error("paired trajectories must share start states");
    }
  }

  MetricsReport rep;
  rep.name = "trajectory_divergence";
  Series series;
  series.reserve(steps);
  double last = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      acc += (a[i].states[j].second - b[i].states[j].second).squaredNorm();
    }
    double val = acc / (static_cast<double>(a.size()) * static_cast<double>(d));
    series.emplace_back(static_cast<double>(a.front().states[j].first), val);
    last = val;
  }
  rep.scalars["final"] = last;
  rep.scalars["pairs"] = static_cast<double>(a.size());
  rep.series["divergence"] = std::move(series);
  return rep;
}

MiBound mi_upper_bound(const Schedule& sched, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw argument_error("radius must be a finite nonnegative real");
  }
  const double R2 = radius * radius;
  MiBound out;
  const double b1 = sched.beta(1);
  out.terms.emplace_back(1.0, (1.0 - b1) * R2 / (2.0 * b1 * b1));
  for (int t = 2; t <= sched.steps(); ++t) {
    const double prev = 1.0 - sched.alpha_bar(t - 1);
    out.terms.emplace_back(static_cast<double>(t),
                           sched.alpha_bar(t) * R2 / (2.0 * prev * prev));
  }
  for (const auto& [t, term] : out.terms) out.value += term;
  return out;
}

GaussianExampleErrors gaussian_example_errors(int d, int n) {
  if (d < 1 || n < 1) throw argument_error("need d >= 1 and n >= 1");
  GaussianExampleErrors e;
  e.optimization = static_cast<double>(d) / static_cast<double>(n);
  e.generalization = 0.5 * static_cast<double>(d) * std::log1p(1.0 / static_cast<double>(n));
  return e;
}

MetricsReport gaussian_example_simulate(int d, int n, int trials, std::uint64_t seed) {
  if (d < 1 || n < 1) throw argument_error("need d >= 1 and n >= 1");
  if (trials < 100) throw argument_error("need at least 100 trials for stable bands");

  double sum = 0.0, sumsq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    rng_stream rng(seed, stream_tag::simulate, static_cast<std::uint32_t>(trial), 0);
    Eigen::VectorXd mean_hat = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) mean_hat += rng.gaussian_vector(d);
    mean_hat /= static_cast<double>(n);
    const double sq = mean_hat.squaredNorm();
    sum += sq;
    sumsq += sq * sq;
  }
  const double estimate = sum / trials;
  const double var = std::max(0.0, sumsq / trials - estimate * estimate);
  const double se = std::sqrt(var / trials);
  const double expected = static_cast<double>(d) / static_cast<double>(n);

  MetricsReport rep;
  rep.name = "gaussian_example_simulate";
  rep.scalars["estimate"] = estimate;
  rep.scalars["expected"] = expected;
  rep.scalars["stderr"] = se;
  rep.scalars["trials"] = static_cast<double>(trials);
  rep.scalars["within_5_stderr"] = (std::abs(estimate - expected) <= 5.0 * se) ? 1.0 : 0.0;
  return rep;
}

double predictor_rmse(const Predictor& pred_a, const Predictor& pred_b,
                      const Eigen::MatrixXd& probes, int t) {
  if (probes.rows() < 1) throw argument_error("probe set is empty");
  const auto d = probes.cols();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probes.rows(); ++i) {
    const Eigen::VectorXd x = probes.row(i).transpose();
    acc += (pred_a(x, t) - pred_b(x, t)).squaredNorm();
  }
  return std::sqrt(acc / (static_cast<double>(probes.rows()) * static_cast<double>(d)));
}

}  // namespace empdiff
