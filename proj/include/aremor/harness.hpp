#pragma once

// Experiment driver: configuration file, method runs, CSV and manifest output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aremor/lqr_metrics.hpp"
#include "aremor/model_problems.hpp"
#include "aremor/types.hpp"

namespace aremor {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverFailure = 3;

struct ExperimentConfig {
  PdeConfig problem;
  std::vector<std::string> methods;  ///< subset of pod, bt, gark, pgark
  double tol = 1e-8;
  Index r_max = 60;
  std::vector<Index> pod_sweep;
  std::vector<Index> bt_sweep;
  double snapshot_horizon = 1.0;
  Index snapshot_steps = 50;
  bool use_b_variant = false;
  Index candidate_points = 200;
  std::optional<double> time_limit_s;
  Index reference_cutoff = 2000;
  std::string output_dir = "out";
  /// Writes wall times into the elapsed_s column; off leaves it empty.
  bool timings = true;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses the INI text. Unknown sections or keys are errors. Throws
/// ConfigError; the result is validated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// "2,4,8" or "start:step:stop" ranges, mixed freely: "1:1:10,20,40".
std::vector<Index> parse_index_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::string> parse_method_list(const std::string& text);

struct MethodOutcome {
  std::string method;
  /// converged, not_converged, breakdown, failed, completed (sweeps)
  std::string status;
  std::string message;
  ConvergenceHistory history;
  double wall_s = 0.0;
};

struct ExperimentResult {
  std::vector<MethodOutcome> outcomes;
  Index n = 0;
  bool has_reference = false;
  int exit_code = kExitOk;
};

/// Header r,R_P,E_K,E_G,elapsed_s; values as %.9e, missing values empty.
std::string format_history_csv(const ConvergenceHistory& history, bool timings);

/// Runs every configured method and writes <output_dir>/<method>.csv plus
/// manifest.json. Solver failures are recorded and give exit code 3.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  std::string method;
  double dx = 0.0;
  Index n = 0;
  Index r = 0;
  Index iterations = 0;
  double residual = 0.0;
  double elapsed_s = 0.0;
  std::string status;
};

/// Runs gark and pgark (those listed in cfg.methods) for each grid spacing and
/// writes <output_dir>/sweep.csv. Failures are recorded per row.
std::vector<SweepRow> scaling_sweep(const ExperimentConfig& cfg,
                                    const std::vector<double>& dx_list);

}  // namespace aremor
