#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "empdiff/metrics.hpp"

namespace empdiff {

// Flat key = value configuration, one experiment per file. '#' starts a
// comment. Keys are documented in the README; every experiment requires
// `kind` and `seed`. Typed getters throw config_error on malformed values.
struct ExperimentConfig {
  std::map<std::string, std::string> values;

  static ExperimentConfig from_file(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_str(const std::string& key) const;  // throws if missing
  std::string get_str(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t seed() const;  // mandatory, never defaulted from the clock
};

// Each runner returns a finished report whose info map echoes every resolved
// key (config_* entries) so the run can be reproduced from the report alone.
// The scalar contract_ok records whether the experiment's documented claim
// held (1) or not (0).
MetricsReport run_converge(const ExperimentConfig& cfg);
MetricsReport run_memorize(const ExperimentConfig& cfg);
MetricsReport run_partial_recover(const ExperimentConfig& cfg);
MetricsReport run_trajectory_compare(const ExperimentConfig& cfg);
MetricsReport run_mi_bound(const ExperimentConfig& cfg);
MetricsReport run_gaussian_example(const ExperimentConfig& cfg);

// Dispatch on cfg `kind`.
MetricsReport run_experiment(const ExperimentConfig& cfg);

// Runs every *.cfg in config_dir (sorted by name), writing each report to
// out_root/<config stem>/. Returns 0 when all contracts held, 1 otherwise;
// progress and failures go to log.
int run_all(const std::string& config_dir, const std::string& out_root, std::ostream& log);

}  // namespace empdiff
