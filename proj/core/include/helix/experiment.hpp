#pragma once

#include <optional>
#include <string>
#include <vector>

#include "helix/model.hpp"

namespace helix {

inline constexpr const char* library_version = "0.1.0";

// Experiment names accepted by run_experiment and the CLI.
const std::vector<std::string>& experiment_names();

struct SweepSpec {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  bool log_scale = false;
};

// User-supplied sweep fields; unset ones keep the per-experiment defaults.
struct SweepOverrides {
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<int> points;
  std::optional<bool> log_scale;
};

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::string experiment;
  // fixed fields; the swept one is overwritten per point
  ChainSpec chain{5, 1.0, 0.5, 1.5707963267948966, 0.0, 1.5707963267948966,
                  0.3141592653589793, 1000.0};
  double total_twist = 0.3141592653589793;  // Phi (= phi_right, phi_left = 0)
  int winding = 0;                          // m
  std::optional<double> twist;  // fixed twisting angle phi where needed
  SweepOverrides sweep;         // merged over per-experiment defaults
  std::string output_path = "out.csv";
  OutputFormat format = OutputFormat::Csv;
  int threads = 1;
  bool force = false;             // lift the desk-scale caps
  int max_counting_sites = 2000;  // omega_count upper N
  double solver_tolerance = 1e-10;
};

// Flat key = value file; '#' comments and blank lines ignored.
ExperimentConfig parse_config_file(const std::string& path);

// Per-experiment sweep defaults with the config's overrides applied.
SweepSpec effective_sweep(const ExperimentConfig& config);

// Single key = value assignment (shared by the file parser and CLI flags).
void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value);

// Angles as decimals or rational multiples of pi: "0.3", "pi", "pi/2",
// "2pi/5", "pi*1/10", "0.5pi", "-pi/4".
double parse_angle(const std::string& text);

struct RunReport {
  int exit_code = 0;        // 0 ok, 1 config error, 2 solver failure
  int rows = 0;
  int failures = 0;
  double wall_seconds = 0.0;
  std::string csv_path;
  std::string sidecar_path;
};

// Runs one experiment: writes the table, a '#' config header, and a JSON
// metadata sidecar next to it. Per-point failures are recorded in-row and
// the run continues.
RunReport run_experiment(const ExperimentConfig& config);

}  // namespace helix
