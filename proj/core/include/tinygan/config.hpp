#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tinygan/integrator.hpp"

namespace tinygan {

/// Initial condition: either the annealed-start preset (theta = alpha = alpha0,
/// psi = 0) or explicit components. Autonomous runs take theta/psi only.
struct InitSpec {
  bool beta_preset = false;
  std::optional<double> theta;
  std::optional<double> psi;
  std::optional<double> alpha;

  bool operator==(const InitSpec&) const = default;
};

struct OutputSelection {
  bool trajectory_csv = true;
  bool manifest_json = true;
  bool plot_svg = true;

  bool operator==(const OutputSelection&) const = default;
};

/// One experiment: which system, where it starts, how it is driven, and what
/// gets written. Exactly one of `integrator`/`sgd` names the trajectory driver.
struct ExperimentConfig {
  std::string name;
  Criterion criterion;
  SystemMode mode = AutonomousMode{};
  InitSpec init;
  std::optional<IntegratorConfig> integrator;
  std::optional<SgdConfig> sgd;
  OutputSelection outputs;
  std::filesystem::path output_dir;  // empty: resolved by the runner
  std::optional<double> transient_cut;
  std::optional<std::array<double, 3>> equilibrium_target;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the sectioned key = value format. Unknown sections or keys are
/// errors; diagnostics carry source:line.
ExperimentConfig parse_experiment_config(std::string_view text, std::string_view source_name);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Checks every config invariant; throws ValidationError naming the violated
/// one. Returns non-fatal warnings (fast annealing with T <= 1).
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

/// Resolved initial state for a validated config.
State initial_state(const ExperimentConfig& cfg);

/// Default target: the equilibrium where the generator sits on the data.
std::array<double, 3> default_equilibrium_target(const SystemMode& mode);

}  // namespace tinygan
