#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tinygan/analysis.hpp"
#include "tinygan/config.hpp"
#include "tinygan/svg.hpp"

namespace tinygan {

inline constexpr int kManifestSchemaVersion = 1;

/// Environment variable that overrides the output directory when no --out
/// flag is given.
inline constexpr const char* kOutputDirEnvVar = "TINYGAN_OUT";

struct SummaryTriple {
  OscillationSummary theta;
  OscillationSummary psi;
  OscillationSummary alpha;

  bool operator==(const SummaryTriple&) const = default;
};

/// Everything a run produced: config echo, steady-state analysis, oracle and
/// invariant checks, artifact paths. Round-trips losslessly through JSON.
struct RunManifest {
  int schema_version = kManifestSchemaVersion;
  std::string name;
  ExperimentConfig config;
  bool diverged = false;
  std::optional<double> failure_time;
  double transient_cut = 0.0;
  std::optional<SummaryTriple> summaries;
  std::array<double, 3> equilibrium_target{};
  std::optional<double> equilibrium_dist;
  std::optional<double> oracle_err;  // closed-form comparison, when one applies
  std::vector<std::pair<std::string, double>> invariant_drifts;
  std::vector<std::pair<std::string, std::string>> artifacts;
  std::vector<std::string> warnings;
  double duration_seconds = 0.0;

  bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_json_text(const RunManifest& m);
RunManifest manifest_from_json_text(std::string_view text);

struct RunOverrides {
  std::optional<std::string> output_dir;  // --out beats TINYGAN_OUT beats config
  std::optional<double> step;
  std::optional<double> horizon;

  bool operator==(const RunOverrides&) const = default;
};

/// Runs a validated config end to end: integrate (or iterate), analyze,
/// write the selected artifacts. Divergence is recorded in the manifest, not
/// rethrown. Returns the trajectory alongside the manifest.
struct RunResult {
  RunManifest manifest;
  Trajectory trajectory;
};

RunResult run_experiment(ExperimentConfig cfg, const RunOverrides& overrides = {});

/// Built-in scenario names: fig1a, fig1b, fig1c, fig1d.
std::vector<std::string> scenario_names();
ExperimentConfig scenario_config(std::string_view name);
RunResult run_scenario(std::string_view name, const RunOverrides& overrides = {});

/// Amplitude sweep over annealing time constants. The base must be a linear,
/// annealed, schedule-only (lambda = 0) integrator config; each row adjusts T,
/// re-derives the transient cut and horizon, and compares the measured steady
/// psi amplitude against the closed-form prediction. Divergent rows are
/// flagged and the sweep continues.
SweepTable sweep_time_constants(const ExperimentConfig& base, std::span<const double> time_constants);

std::string sweep_to_csv(const SweepTable& table);

}  // namespace tinygan
