#include "empdiff/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "empdiff/dataset.hpp"
#include "empdiff/errors.hpp"
#include "empdiff/forward.hpp"
#include "empdiff/predictors.hpp"
#include "empdiff/rng.hpp"
#include "empdiff/samplers.hpp"
#include "empdiff/schedule.hpp"
#include "empdiff/target.hpp"

namespace empdiff {

namespace {

std::string trim(const std::string& s) {
  std::size_t lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return "";
  std::size_t hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(trim(s.substr(pos)));
      return out;
    }
    out.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
}

double parse_num(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw config_error("key '" + key + "' is not a number: '" + raw + "'");
  }
  return v;
}

long long parse_ll(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw config_error("key '" + key + "' is not an integer: '" + raw + "'");
  }
  return v;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
    }
    cfg.values[key] = value;
  }
  return cfg;
}

bool ExperimentConfig::has(const std::string& key) const { return values.count(key) > 0; }

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  values[key] = value;
}

std::string ExperimentConfig::get_str(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw config_error("missing required config key '" + key + "'");
  return it->second;
}

std::string ExperimentConfig::get_str(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ExperimentConfig::get_num(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : parse_num(key, it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  long long v = parse_ll(key, it->second);
  if (v < INT_MIN || v > INT_MAX) throw config_error("key '" + key + "' out of int range");
  return static_cast<int>(v);
}

std::uint64_t ExperimentConfig::seed() const {
  auto it = values.find("seed");
  if (it == values.end()) {
    throw config_error("seed is mandatory; set it in the config or with --seed");
  }
  const std::string s = trim(it->second);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw config_error("seed is not an unsigned integer: '" + it->second + "'");
  }
  return v;
}

namespace {

// Tracks which keys a runner consumed and with what resolved value, so the
// report can echo a complete, re-runnable configuration and typos in the
// input file surface as errors instead of silently applying defaults.
class Resolver {
 public:
  explicit Resolver(const ExperimentConfig& cfg) : cfg_(cfg) {
    record("kind", cfg_.get_str("kind", ""));
    record("seed", std::to_string(cfg_.seed()));
    used_.insert("kind");
    used_.insert("seed");
  }

  int get_int(const std::string& key, int fallback) {
    int v = cfg_.get_int(key, fallback);
    use(key, std::to_string(v));
    return v;
  }

  double get_num(const std::string& key, double fallback) {
    double v = cfg_.get_num(key, fallback);
    use(key, cfg_.has(key) ? cfg_.get_str(key) : fmt17(v));
    return v;
  }

  std::string get_str(const std::string& key, const std::string& fallback) {
    std::string v = cfg_.get_str(key, fallback);
    use(key, v);
    return v;
  }

  std::uint64_t seed() const { return cfg_.seed(); }

  void check_all_used() const {
    for (const auto& kv : cfg_.values) {
      if (!used_.count(kv.first)) {
        throw config_error("unknown config key '" + kv.first + "' for kind " +
                           cfg_.get_str("kind", "?"));
      }
    }
  }

  void stamp(MetricsReport& rep) const {
    for (const auto& [k, v] : echo_) rep.info["config_" + k] = v;
  }

 private:
  void use(const std::string& key, const std::string& resolved) {
    used_.insert(key);
    record(key, resolved);
  }
  void record(const std::string& key, const std::string& resolved) { echo_[key] = resolved; }

  const ExperimentConfig& cfg_;
  std::set<std::string> used_;
  std::map<std::string, std::string> echo_;
};

Eigen::VectorXd parse_vector(const std::string& key, const std::string& raw, int dim) {
  std::vector<std::string> parts = split(raw, ',');
  if (static_cast<int>(parts.size()) == 1 && dim > 1) {
    // scalar broadcast
    Eigen::VectorXd v(dim);
    v.setConstant(parse_num(key, parts[0]));
    return v;
  }
  if (static_cast<int>(parts.size()) != dim) {
    throw config_error("key '" + key + "' needs " + std::to_string(dim) + " coordinates");
  }
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = parse_num(key, parts[static_cast<std::size_t>(i)]);
  return v;
}

// Target description keys; see README for the full table.
TargetSpec target_from_config(Resolver& r, int default_d = 2) {
  const std::string kind = r.get_str("target", "isotropic-gaussian");
  const int d = r.get_int("d", default_d);
  if (kind == "isotropic-gaussian") {
    Eigen::VectorXd mean = parse_vector("mean", r.get_str("mean", "0"), d);
    return TargetSpec::isotropic_gaussian(std::move(mean), r.get_num("sigma", 1.0));
  }
  if (kind == "gaussian-mixture") {
    std::vector<std::string> mean_parts = split(r.get_str("means", "-4,0;4,0"), ';');
    std::vector<Eigen::VectorXd> means;
    for (const auto& p : mean_parts) means.push_back(parse_vector("means", p, d));
    const std::size_t K = means.size();
    std::vector<std::string> sig_parts = split(r.get_str("sigmas", "0.5"), ';');
    std::vector<double> sigmas;
    if (sig_parts.size() == 1) {
      sigmas.assign(K, parse_num("sigmas", sig_parts[0]));
    } else {
      for (const auto& p : sig_parts) sigmas.push_back(parse_num("sigmas", p));
    }
    std::vector<std::string> w_parts = split(r.get_str("weights", ""), ';');
    std::vector<double> weights;
    if (w_parts.size() == 1 && w_parts[0].empty()) {
      weights.assign(K, 1.0 / static_cast<double>(K));
    } else {
      for (const auto& p : w_parts) weights.push_back(parse_num("weights", p));
    }
    return TargetSpec::gaussian_mixture(std::move(means), std::move(sigmas), std::move(weights));
  }
  if (kind == "ring") {
    Eigen::VectorXd center = parse_vector("center", r.get_str("center", "0,0"), 2);
    return TargetSpec::ring(std::move(center), r.get_num("ring_radius", 2.0),
                            r.get_num("ring_thickness", 0.1));
  }
  if (kind == "point-cloud") {
    Dataset cloud = load_dataset(r.get_str("data", ""), data_format::csv);
    return TargetSpec::point_cloud(cloud.points);
  }
  throw config_error("unknown target kind '" + kind + "'");
}

Schedule schedule_from_config(Resolver& r) {
  return Schedule::linear(r.get_int("T", 1000), r.get_num("beta_start", 1e-4),
                          r.get_num("beta_end", 0.02));
}

Series quantile_series(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Series out;
  const std::size_t m = values.size();
  for (int qi = 0; qi <= 20; ++qi) {
    const double q = qi / 20.0;
    const double pos = q * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, m - 1);
    const double frac = pos - static_cast<double>(lo);
    out.emplace_back(q, values[lo] * (1.0 - frac) + values[hi] * frac);
  }
  return out;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  if (m % 2 == 1) return v[m / 2];
  return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

Eigen::MatrixXd final_states(const std::vector<Trajectory>& batch) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(batch.size()),
                      batch.front().final_state().size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = batch[i].final_state().transpose();
  }
  return out;
}

}  // namespace

MetricsReport run_converge(const ExperimentConfig& cfg) {
  Resolver r(cfg);
  const std::uint64_t seed = r.seed();
  Schedule sched = schedule_from_config(r);
  TargetSpec spec = target_from_config(r);
  if (!spec.analytic()) {
    throw config_error("converge needs an analytic target, got " + target_kind_name(spec.kind));
  }
  const std::string predictor = r.get_str("predictor", "eps");
  if (predictor != "eps" && predictor != "xi") {
    throw config_error("predictor must be 'eps' or 'xi', got '" + predictor + "'");
  }
  const int grid_draws = r.get_int("grid_draws", 0);
  const int probes = r.get_int("probes", 256);
  const int seeds = r.get_int("seeds", 3);
  std::vector<std::string> n_parts = split(r.get_str("n_grid", "100,1000,10000"), ',');
  std::vector<int> n_grid;
  for (const auto& p : n_parts) n_grid.push_back(static_cast<int>(parse_ll("n_grid", p)));
  r.check_all_used();

  const int T = sched.steps();
  const std::vector<int> t_list = {std::max(1, T / 4), std::max(1, T / 2),
                                   std::max(1, 3 * T / 4)};

  OracleEps oracle_eps(sched, spec);
  OracleScore oracle_score(sched, spec);
  const Predictor& reference =
      (predictor == "eps") ? static_cast<const Predictor&>(oracle_eps)
                           : static_cast<const Predictor&>(oracle_score);

  // Probe basis: fresh target draws, renoised per evaluation step. Fixed
  // across the n grid and dataset seeds.
  Dataset probe_basis = sample_dataset(spec, probes, derive_seed(seed, 101));

  MetricsReport rep;
  rep.name = "converge";
  bool ok = true;
  for (int t : t_list) {
    Eigen::MatrixXd probe_x(probes, spec.dim());
    for (int j = 0; j < probes; ++j) {
      probe_x.row(j) = noise_to(sched, probe_basis.points.row(j).transpose(), t,
                                derive_seed(seed, 202, static_cast<std::uint64_t>(t) * 1000003 +
                                                           static_cast<std::uint64_t>(j)))
                           .state.transpose();
    }

    Series medians;
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
      const int n = n_grid[ni];
      std::vector<double> vals;
      for (int si = 0; si < seeds; ++si) {
        Dataset data =
            (spec.kind == target_kind::point_cloud)
                ? sample_dataset(spec, static_cast<int>(spec.means.size()), 0)
                : sample_dataset(spec, n,
                                 derive_seed(seed, 303,
                                             static_cast<std::uint64_t>(ni) * 100 +
                                                 static_cast<std::uint64_t>(si)));
        double rmse = 0.0;
        if (predictor == "eps") {
          EmpiricalEps pred(sched, std::move(data));
          rmse = predictor_rmse(pred, reference, probe_x, t);
        } else {
          SGrid grid = grid_draws > 0
                           ? SGrid::sampled(sched, data, grid_draws,
                                            derive_seed(seed, 404,
                                                        static_cast<std::uint64_t>(ni) * 100 +
                                                            static_cast<std::uint64_t>(si)),
                                            true)
                           : SGrid::point_mass_zero(data);
          EmpiricalXi pred(sched, std::move(data), std::move(grid));
          rmse = predictor_rmse(pred, reference, probe_x, t);
        }
        vals.push_back(rmse);
        rep.series["rmse_t" + std::to_string(t) + "_seed" + std::to_string(si)]
            .emplace_back(static_cast<double>(n), rmse);
      }
      medians.emplace_back(static_cast<double>(n), median_of(vals));
    }
    rep.series["rmse_t" + std::to_string(t) + "_median"] = medians;
    rep.scalars["rmse_final_t" + std::to_string(t)] = medians.back().second;

    if (spec.kind == target_kind::point_cloud) {
      for (const auto& [n, v] : medians) ok = ok && v < 1e-10;
    } else {
      for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
        ok = ok && medians[i + 1].second < medians[i].second;
      }
    }
  }
  rep.scalars["contract_ok"] = ok ? 1.0 : 0.0;
  rep.info["probes"] = "drawn from the true noised marginal via forward noising of fresh "
                       "target draws";
  r.stamp(rep);
  return rep;
}

MetricsReport run_memorize(const ExperimentConfig& cfg) {
  Resolver r(cfg);
  const std::uint64_t seed = r.seed();
  Schedule full = schedule_from_config(r);
  const int steps = r.get_int("steps", 50);
  TargetSpec spec = target_from_config(r);
  const int n = r.get_int("n", 64);
  const int count = r.get_int("count", 256);
  const double tau_factor = r.get_num("tau_factor", 0.05);
  r.check_all_used();

  if (n > 1000) throw config_error("memorize is a desk-scale experiment; n must be <= 1000");
  Schedule sched = (steps == full.steps()) ? full : full.subsequence(steps);

  Dataset data = (spec.kind == target_kind::point_cloud)
                     ? sample_dataset(spec, static_cast<int>(spec.means.size()), 0)
                     : sample_dataset(spec, n, derive_seed(seed, 1));
  const double tau = tau_factor * data.radius;
  EmpiricalEps pred(sched, data);

  StartSpec start = StartFromNoise{data.dim()};
  auto ddim_batch = generate(sched, pred, sampler_method::ddim, count, start,
                             derive_seed(seed, 2));
  auto ddpm_batch = generate(sched, pred, sampler_method::ddpm, count, start,
                             derive_seed(seed, 2));

  MetricsReport rep;
  rep.name = "memorize";
  bool ok = true;
  std::map<std::string, double> fractions;
  for (const auto& [label, batch] :
       std::vector<std::pair<std::string, const std::vector<Trajectory>*>>{
           {"ddim", &ddim_batch}, {"ddpm", &ddpm_batch}}) {
    MetricsReport audit = nn_audit(final_states(*batch), data, tau);
    rep.scalars[label + "_memorized_fraction"] = audit.scalars["memorized_fraction"];
    rep.scalars[label + "_median_nn"] = audit.scalars["median"];
    rep.scalars[label + "_mean_nn"] = audit.scalars["mean"];
    std::vector<double> dists;
    for (const auto& [i, v] : audit.series["distances"]) dists.push_back(v);
    rep.series[label + "_nn_distances"] = audit.series["distances"];
    rep.series[label + "_nn_quantiles"] = quantile_series(std::move(dists));
    fractions[label] = audit.scalars["memorized_fraction"];
  }
  rep.scalars["tau"] = tau;
  ok = fractions["ddim"] >= 0.95 && fractions["ddpm"] < fractions["ddim"] &&
       rep.scalars["ddpm_median_nn"] > rep.scalars["ddim_median_nn"];
  rep.scalars["contract_ok"] = ok ? 1.0 : 0.0;
  r.stamp(rep);
  return rep;
}

MetricsReport run_partial_recover(const ExperimentConfig& cfg) {
  Resolver r(cfg);
  const std::uint64_t seed = r.seed();
  Schedule full = schedule_from_config(r);
  const int steps = r.get_int("steps", 50);
  // Recovery asymmetry needs well-separated sources; moderate dimension
  // keeps every pairwise gap far above the kernel bandwidth.
  TargetSpec spec = target_from_config(r, 16);
  const int n = r.get_int("n", 256);
  const int heldout_n = r.get_int("heldout", 128);
  const int sources = r.get_int("sources", 128);
  const int seeds = r.get_int("seeds", 3);
  const double coef_signal = r.get_num("coef_signal", 0.6678);
  const double coef_noise = r.get_num("coef_noise", 0.7743);
  const int step_override = r.get_int("step", 0);
  r.check_all_used();

  if (sources > n || sources > heldout_n) {
    throw config_error("sources must not exceed either set size");
  }
  Schedule sched = (steps == full.steps()) ? full : full.subsequence(steps);
  const int matched =
      step_override > 0 ? step_override
                        : closest_coefficient_step(sched, coef_signal, coef_noise);

  Dataset train = sample_dataset(spec, n, derive_seed(seed, 11));
  Dataset held = sample_dataset(spec, heldout_n, derive_seed(seed, 12));
  for (int i = 0; i < train.n(); ++i) {
    for (int j = 0; j < held.n(); ++j) {
      if ((train.points.row(i).array() == held.points.row(j).array()).all()) {
        throw config_error("train and held-out sets overlap at rows " +
                           std::to_string(i) + "/" + std::to_string(j));
      }
    }
  }
  EmpiricalEps pred(sched, train);

  MetricsReport rep;
  rep.name = "partial_recover";
  std::map<std::string, std::vector<double>> pooled;
  for (const auto& [label, set] :
       std::vector<std::pair<std::string, const Dataset*>>{{"train", &train},
                                                           {"heldout", &held}}) {
    Series dist_series;
    for (int si = 0; si < seeds; ++si) {
      for (int i = 0; i < sources; ++i) {
        const Eigen::VectorXd x0 = set->points.row(i).transpose();
        StartSpec start = StartFromPartial{x0, matched, i};
        auto batch = generate(sched, pred, sampler_method::ddim, 1, start,
                              derive_seed(seed, label == "train" ? 21 : 22,
                                          static_cast<std::uint64_t>(si) * 1000000 +
                                              static_cast<std::uint64_t>(i)),
                              1);
        const double dist = (batch.front().final_state() - x0).norm();
        pooled[label].push_back(dist);
        dist_series.emplace_back(static_cast<double>(si * sources + i), dist);
      }
    }
    rep.series[label + "_distances"] = std::move(dist_series);
    rep.scalars[label + "_median"] = median_of(pooled[label]);
  }

  rep.scalars["matched_step"] = static_cast<double>(matched);
  rep.scalars["matched_parent_step"] = static_cast<double>(sched.parent_step(matched));
  rep.scalars["contract_ok"] =
      rep.scalars["train_median"] < rep.scalars["heldout_median"] ? 1.0 : 0.0;
  rep.info["matched_step_rule"] =
      "closest (sqrt(alpha_bar), sqrt(1-alpha_bar)) to (" + fmt17(coef_signal) + ", " +
      fmt17(coef_noise) + ") over the generation schedule";
  r.stamp(rep);
  return rep;
}

MetricsReport run_trajectory_compare(const ExperimentConfig& cfg) {
  Resolver r(cfg);
  const std::uint64_t seed = r.seed();
  Schedule full = schedule_from_config(r);
  const int steps = r.get_int("steps", 50);
  TargetSpec spec = target_from_config(r);
  if (!spec.analytic()) {
    throw config_error("trajectory-compare needs an analytic target");
  }
  const int n = r.get_int("n", 10000);
  const int count = r.get_int("count", 64);
  const std::string method_name = r.get_str("method", "ddim");
  r.check_all_used();

  sampler_method method;
  if (method_name == "ddim") method = sampler_method::ddim;
  else if (method_name == "ddpm") method = sampler_method::ddpm;
  else throw config_error("method must be 'ddim' or 'ddpm', got '" + method_name + "'");

  Schedule sched = (steps == full.steps()) ? full : full.subsequence(steps);
  Dataset data = sample_dataset(spec, n, derive_seed(seed, 31));
  OracleEps oracle(sched, spec);
  EmpiricalEps emp(sched, std::move(data));

  StartSpec start = StartFromNoise{spec.dim()};
  auto batch_oracle = generate(sched, oracle, method, count, start, derive_seed(seed, 32));
  auto batch_emp = generate(sched, emp, method, count, start, derive_seed(seed, 32));

  MetricsReport rep = trajectory_divergence(batch_oracle, batch_emp);
  rep.name = "trajectory_compare";

  const Series& div = rep.series["divergence"];
  int nondecreasing = 0;
  for (std::size_t j = 0; j + 1 < div.size(); ++j) {
    if (div[j + 1].second >= div[j].second) ++nondecreasing;
  }
  const double frac =
      div.size() > 1 ? static_cast<double>(nondecreasing) / static_cast<double>(div.size() - 1)
                     : 1.0;
  rep.scalars["nondecreasing_fraction"] = frac;
  rep.scalars["contract_ok"] = frac >= 0.8 ? 1.0 : 0.0;
  rep.info["reference"] =
      "analytic-oracle predictor stands in for a learned one; the gap measures "
      "finite-sample effects of the empirical predictor only";
  r.stamp(rep);
  return rep;
}

MetricsReport run_mi_bound(const ExperimentConfig& cfg) {
  Resolver r(cfg);
  Schedule sched = schedule_from_config(r);
  const double radius = r.get_num("R", 1.0);
  r.check_all_used();

  MiBound bound = mi_upper_bound(sched, radius);
  MetricsReport rep;
  rep.name = "mi_bound";
  rep.scalars["value"] = bound.value;
  rep.scalars["R"] = radius;
  rep.series["terms"] = bound.terms;
  double sum = 0.0;
  for (const auto& [t, term] : bound.terms) sum += term;
  const bool ok = bound.value >= 0.0 &&
                  std::abs(sum - bound.value) <= 1e-9 * std::max(1.0, std::abs(bound.value));
  rep.scalars["contract_ok"] = ok ? 1.0 : 0.0;
  r.stamp(rep);
  return rep;
}

MetricsReport run_gaussian_example(const ExperimentConfig& cfg) {
  Resolver r(cfg);
  const std::uint64_t seed = r.seed();
  const int d = r.get_int("d", 2);
  const int n = r.get_int("n", 100);
  const int trials = r.get_int("trials", 10000);
  r.check_all_used();

  GaussianExampleErrors errors = gaussian_example_errors(d, n);
  MetricsReport rep = gaussian_example_simulate(d, n, trials, derive_seed(seed, 41));
  rep.name = "gaussian_example";
  rep.scalars["optimization_error"] = errors.optimization;
  rep.scalars["generalization_bound"] = errors.generalization;
  rep.scalars["d"] = static_cast<double>(d);
  rep.scalars["n"] = static_cast<double>(n);
  rep.scalars["contract_ok"] = rep.scalars["within_5_stderr"];
  r.stamp(rep);
  return rep;
}

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  const std::string kind = cfg.get_str("kind");
  if (kind == "converge") return run_converge(cfg);
  if (kind == "memorize") return run_memorize(cfg);
  if (kind == "partial-recover") return run_partial_recover(cfg);
  if (kind == "trajectory-compare") return run_trajectory_compare(cfg);
  if (kind == "mi-bound") return run_mi_bound(cfg);
  if (kind == "gaussian-example") return run_gaussian_example(cfg);
  throw config_error("unknown experiment kind '" + kind + "'");
}

int run_all(const std::string& config_dir, const std::string& out_root, std::ostream& log) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(config_dir)) {
    log << "run-all: not a directory: " << config_dir << '\n';
    return 1;
  }
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(config_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") {
      configs.push_back(entry.path());
    }
  }
  std::sort(configs.begin(), configs.end());

  int failures = 0;
  for (const auto& path : configs) {
    const std::string stem = path.stem().string();
    try {
      ExperimentConfig cfg = ExperimentConfig::from_file(path.string());
      MetricsReport rep = run_experiment(cfg);
      rep.write((fs::path(out_root) / stem).string());
      const bool ok = rep.scalars.count("contract_ok") && rep.scalars.at("contract_ok") == 1.0;
      if (ok) {
        log << "ok   " << stem << '\n';
      } else {
        log << "FAIL " << stem << ": contract violated\n";
        ++failures;
      }
    } catch (const std::exception& e) {
      log << "FAIL " << stem << ": " << e.what() << '\n';
      ++failures;
    }
  }
  log << configs.size() << " experiment(s), " << failures << " failure(s)\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace empdiff
