#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "empdiff/errors.hpp"
#include "empdiff/experiments.hpp"

using namespace empdiff;
namespace fs = std::filesystem;

namespace {

fs::path write_cfg(const char* name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

struct dir_guard {
  fs::path path;
  explicit dir_guard(fs::path p) : path(std::move(p)) { fs::remove_all(path); }
  ~dir_guard() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool trees_equal(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> rel_a, rel_b;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) rel_a.push_back(fs::relative(e.path(), a));
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) rel_b.push_back(fs::relative(e.path(), b));
  }
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) return false;
  for (const auto& r : rel_a) {
    if (slurp(a / r) != slurp(b / r)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("config file parsing") {
  fs::path p = write_cfg("empdiff_parse.cfg",
                         "# leading comment\n"
                         "kind = mi-bound\n"
                         "seed=9\n"
                         "  R  =  2.5  # trailing comment\n"
                         "\n"
                         "label = a = b\n");
  ExperimentConfig cfg = ExperimentConfig::from_file(p.string());
  CHECK(cfg.get_str("kind") == "mi-bound");
  CHECK(cfg.seed() == 9);
  CHECK(cfg.get_num("R", 0.0) == 2.5);
  // value keeps everything after the first '='
  CHECK(cfg.get_str("label") == "a = b");
  CHECK(cfg.has("R"));
  CHECK_FALSE(cfg.has("missing"));
  CHECK(cfg.get_str("missing", "fallback") == "fallback");
  CHECK(cfg.get_int("missing", 7) == 7);
  fs::remove(p);
}

TEST_CASE("config rejects malformed input") {
  fs::path bare = write_cfg("empdiff_bare.cfg", "kind mi-bound\n");
  CHECK_THROWS_AS(ExperimentConfig::from_file(bare.string()), config_error);
  fs::remove(bare);

  fs::path nokey = write_cfg("empdiff_nokey.cfg", "= 5\n");
  CHECK_THROWS_AS(ExperimentConfig::from_file(nokey.string()), config_error);
  fs::remove(nokey);

  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/empdiff.cfg"), config_error);

  ExperimentConfig cfg;
  cfg.set("kind", "mi-bound");
  CHECK_THROWS_AS(cfg.seed(), config_error);  // seed is mandatory
  cfg.set("seed", "not-a-number");
  CHECK_THROWS_AS(cfg.seed(), config_error);
  cfg.set("seed", "12");
  CHECK(cfg.seed() == 12);
  cfg.set("R", "abc");
  CHECK_THROWS_AS(cfg.get_num("R", 1.0), config_error);
  cfg.set("n", "2.5");
  CHECK_THROWS_AS(cfg.get_int("n", 1), config_error);
}

TEST_CASE("unknown keys are refused") {
  ExperimentConfig cfg;
  cfg.set("kind", "mi-bound");
  cfg.set("seed", "1");
  cfg.set("R", "1.0");
  cfg.set("typo_key", "5");
  CHECK_THROWS_AS(run_experiment(cfg), config_error);
}

TEST_CASE("unknown experiment kind is refused") {
  ExperimentConfig cfg;
  cfg.set("kind", "frobnicate");
  cfg.set("seed", "1");
  CHECK_THROWS_AS(run_experiment(cfg), config_error);
}

TEST_CASE("information bound runner") {
  ExperimentConfig cfg;
  cfg.set("kind", "mi-bound");
  cfg.set("seed", "1");
  cfg.set("T", "2");
  cfg.set("beta_start", "0.5");
  cfg.set("beta_end", "0.5");
  cfg.set("R", "1.0");
  MetricsReport rep = run_mi_bound(cfg);
  CHECK(rep.scalars.at("value") == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(rep.scalars.at("contract_ok") == 1.0);
  CHECK(rep.series.at("terms").size() == 2);
  CHECK(rep.info.at("config_R") == "1.0");
  CHECK(rep.info.at("config_kind") == "mi-bound");

  // dispatcher routes on kind
  MetricsReport same = run_experiment(cfg);
  CHECK(same.scalars.at("value") == rep.scalars.at("value"));
}

TEST_CASE("convergence runner on a point cloud hits the oracle") {
  // the empirical predictor over the full cloud IS the cloud's closed-form
  // predictor, so every median must sit at numerical zero
  ExperimentConfig cfg;
  cfg.set("kind", "converge");
  cfg.set("seed", "5");
  cfg.set("T", "60");

  // build a small cloud csv to point the config at
  fs::path cloud = fs::temp_directory_path() / "empdiff_cloud.csv";
  {
    std::ofstream out(cloud, std::ios::binary);
    out << "0.4,0.1\n-0.3,0.8\n1.1,-0.6\n-0.9,-0.2\n0.2,0.5\n";
  }
  cfg.set("target", "point-cloud");
  cfg.set("data", cloud.string());
  cfg.set("probes", "16");
  cfg.set("seeds", "1");
  cfg.set("n_grid", "5");
  MetricsReport rep = run_converge(cfg);
  fs::remove(cloud);

  CHECK(rep.scalars.at("contract_ok") == 1.0);
  for (const auto& [k, v] : rep.scalars) {
    if (k.rfind("rmse_final_", 0) == 0) CHECK(v < 1e-10);
  }
  CHECK(rep.info.at("config_predictor") == "eps");
}

TEST_CASE("convergence runner medians shrink with data size") {
  ExperimentConfig cfg;
  cfg.set("kind", "converge");
  cfg.set("seed", "11");
  cfg.set("T", "40");
  cfg.set("target", "isotropic-gaussian");
  cfg.set("mean", "0");
  cfg.set("sigma", "1");
  cfg.set("d", "2");
  cfg.set("probes", "48");
  cfg.set("seeds", "2");
  cfg.set("n_grid", "20,200,2000");
  MetricsReport rep = run_converge(cfg);
  CHECK(rep.scalars.at("contract_ok") == 1.0);
  const Series& med = rep.series.at("rmse_t20_median");
  REQUIRE(med.size() == 3);
  CHECK(med[0].second > med[1].second);
  CHECK(med[1].second > med[2].second);
}

TEST_CASE("memorization runner flags the deterministic collapse") {
  ExperimentConfig cfg;
  cfg.set("kind", "memorize");
  cfg.set("seed", "25");
  cfg.set("T", "1000");
  cfg.set("steps", "50");
  cfg.set("target", "ring");
  cfg.set("center", "0,0");
  cfg.set("ring_radius", "1.9");
  cfg.set("ring_thickness", "0.08");
  cfg.set("n", "64");
  cfg.set("count", "96");
  cfg.set("tau_factor", "0.05");
  MetricsReport rep = run_memorize(cfg);
  // thresholds belong to the full-size run; here just check the plumbing
  CHECK(rep.scalars.count("ddim_memorized_fraction") == 1);
  CHECK(rep.scalars.count("ddpm_memorized_fraction") == 1);
  CHECK(rep.scalars.at("ddim_memorized_fraction") > 0.9);
  CHECK(rep.series.at("ddim_nn_distances").size() == 96);
  CHECK(rep.series.at("ddpm_nn_quantiles").size() == 21);
  CHECK(rep.scalars.at("tau") > 0.0);
}

TEST_CASE("recovery runner separates train from heldout") {
  ExperimentConfig cfg;
  cfg.set("kind", "partial-recover");
  cfg.set("seed", "42");
  cfg.set("steps", "25");
  cfg.set("n", "48");
  cfg.set("heldout", "32");
  cfg.set("sources", "12");
  cfg.set("seeds", "1");
  MetricsReport rep = run_partial_recover(cfg);
  CHECK(rep.scalars.at("train_median") < rep.scalars.at("heldout_median"));
  CHECK(rep.scalars.at("contract_ok") == 1.0);
  CHECK(rep.scalars.at("matched_step") >= 1.0);
  CHECK(rep.info.count("matched_step_rule") == 1);

  cfg.set("sources", "64");  // more sources than the heldout pool
  CHECK_THROWS_AS(run_partial_recover(cfg), config_error);
}

TEST_CASE("trajectory comparison runner") {
  ExperimentConfig cfg;
  cfg.set("kind", "trajectory-compare");
  cfg.set("seed", "42");
  cfg.set("steps", "20");
  cfg.set("n", "400");
  cfg.set("count", "24");
  cfg.set("target", "isotropic-gaussian");
  cfg.set("mean", "0");
  cfg.set("sigma", "1");
  cfg.set("d", "2");
  cfg.set("method", "ddim");
  MetricsReport rep = run_trajectory_compare(cfg);
  CHECK(rep.series.at("divergence").size() == 21);
  CHECK(rep.scalars.at("nondecreasing_fraction") >= 0.0);
  CHECK(rep.scalars.at("nondecreasing_fraction") <= 1.0);
  CHECK(rep.scalars.count("contract_ok") == 1);

  // first divergence entry is the shared start, exactly zero
  CHECK(rep.series.at("divergence").front().second == 0.0);

  cfg.set("target", "ring");
  cfg.set("center", "0,0");
  cfg.set("ring_radius", "1");
  cfg.set("ring_thickness", "0.1");
  CHECK_THROWS_AS(run_trajectory_compare(cfg), config_error);
}

TEST_CASE("gaussian example runner") {
  ExperimentConfig cfg;
  cfg.set("kind", "gaussian-example");
  cfg.set("seed", "7");
  cfg.set("d", "2");
  cfg.set("n", "100");
  cfg.set("trials", "2000");
  MetricsReport rep = run_gaussian_example(cfg);
  CHECK(rep.scalars.at("optimization_error") == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(rep.scalars.at("generalization_bound") ==
        doctest::Approx(0.0099503308531680828).epsilon(1e-13));
  CHECK(rep.scalars.at("within_5_stderr") == 1.0);
  CHECK(rep.scalars.at("contract_ok") == 1.0);
}

TEST_CASE("runners are deterministic") {
  ExperimentConfig cfg;
  cfg.set("kind", "memorize");
  cfg.set("seed", "3");
  cfg.set("T", "200");
  cfg.set("steps", "10");
  cfg.set("n", "16");
  cfg.set("count", "32");
  MetricsReport a = run_experiment(cfg);
  MetricsReport b = run_experiment(cfg);
  CHECK(a.scalars == b.scalars);
  REQUIRE(a.series.size() == b.series.size());
  for (const auto& [k, s] : a.series) CHECK(b.series.at(k) == s);
}

TEST_CASE("batch driver runs every config and reruns byte-identically") {
  dir_guard cfgs(fs::temp_directory_path() / "empdiff_test_cfgs");
  fs::create_directories(cfgs.path);
  {
    std::ofstream out(cfgs.path / "a_bound.cfg");
    out << "kind = mi-bound\nseed = 1\nR = 1.0\nT = 2\nbeta_start = 0.5\nbeta_end = 0.5\n";
  }
  {
    std::ofstream out(cfgs.path / "b_example.cfg");
    out << "kind = gaussian-example\nseed = 7\nd = 1\nn = 10\ntrials = 500\n";
  }

  dir_guard out1(fs::temp_directory_path() / "empdiff_test_out1");
  dir_guard out2(fs::temp_directory_path() / "empdiff_test_out2");
  std::ostringstream log1, log2;
  int rc1 = run_all(cfgs.path.string(), out1.path.string(), log1);
  int rc2 = run_all(cfgs.path.string(), out2.path.string(), log2);
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  CHECK(log1.str() == log2.str());
  CHECK(log1.str().find("ok   a_bound") != std::string::npos);
  CHECK(log1.str().find("ok   b_example") != std::string::npos);
  CHECK(fs::exists(out1.path / "a_bound" / "scalars.csv"));
  CHECK(fs::exists(out1.path / "a_bound" / "resolved_config.cfg"));
  CHECK(fs::exists(out1.path / "b_example" / "scalars.csv"));
  CHECK(trees_equal(out1.path, out2.path));

  // a failing contract turns into a nonzero return, not an exception
  {
    std::ofstream out(cfgs.path / "c_bad.cfg");
    out << "kind = mi-bound\nseed = 1\nR = nope\n";
  }
  dir_guard out3(fs::temp_directory_path() / "empdiff_test_out3");
  std::ostringstream log3;
  int rc3 = run_all(cfgs.path.string(), out3.path.string(), log3);
  CHECK(rc3 == 1);
  CHECK(log3.str().find("FAIL c_bad") != std::string::npos);
}

}  // TEST_SUITE
