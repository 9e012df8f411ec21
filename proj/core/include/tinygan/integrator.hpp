#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "tinygan/dynamics.hpp"
#include "tinygan/errors.hpp"

namespace tinygan {

enum class StepMethod { Euler, RK4 };

/// A state magnitude beyond this counts as divergence; integration halts and
/// the partial trajectory is preserved.
inline constexpr double kDivergenceGuard = 1e12;

struct IntegratorConfig {
  StepMethod method = StepMethod::RK4;
  double step = 1e-3;
  double t_end = 1.0;
  std::int64_t sample_stride = 1;  // keep every k-th step (t = 0 always kept)

  bool operator==(const IntegratorConfig&) const = default;
};

enum class UpdateOrder { Alternating, Simultaneous };

/// Discrete gradient-update simulation: step size epsilon, fixed iteration
/// count, and whether the discriminator update sees the fresh generator value.
struct SgdConfig {
  double learning_rate = 1e-2;
  std::int64_t iterations = 1;
  UpdateOrder order = UpdateOrder::Alternating;

  bool operator==(const SgdConfig&) const = default;
};

struct TrajectoryMeta {
  std::optional<Criterion> criterion;
  std::optional<SystemMode> mode;
  std::variant<IntegratorConfig, SgdConfig> driver = IntegratorConfig{};

  bool operator==(const TrajectoryMeta&) const = default;
};

/// Ordered samples with strictly increasing t, first sample at t = 0,
/// all values finite.
struct Trajectory {
  std::vector<State> samples;
  TrajectoryMeta meta;

  bool operator==(const Trajectory&) const = default;
};

/// Thrown when a state goes non-finite or past the magnitude guard. Carries
/// everything integrated so far, so divergence is observable rather than fatal.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, Trajectory partial, double failure_time)
      : Error(message), partial_(std::move(partial)), failure_time_(failure_time) {}

  const Trajectory& partial() const noexcept { return partial_; }
  double failure_time() const noexcept { return failure_time_; }

 private:
  Trajectory partial_;
  double failure_time_;
};

/// Time-varying right-hand side; reads the time from State::t.
using VectorField = std::function<Slope3(const State&)>;

/// Field for a system mode. Autonomous wraps the two-state field with
/// dalpha = 0 (alpha rides along frozen).
VectorField make_field(Criterion c, const SystemMode& mode);

/// Fixed-step explicit integration of `field` from `init` (init.t must be 0)
/// over ceil(t_end/step) steps, sampling every `sample_stride`-th step plus
/// the final one. Deterministic: identical inputs give bit-identical output.
Trajectory integrate(const VectorField& field, const State& init, const IntegratorConfig& cfg,
                     TrajectoryMeta meta = {});

/// Convenience wrapper that builds the field for `mode`, freezes alpha at
/// alpha_r in autonomous mode, and records criterion/mode in the meta.
Trajectory simulate(Criterion c, const SystemMode& mode, State init, const IntegratorConfig& cfg);

/// Discrete alternating/simultaneous gradient updates with step epsilon:
///   theta <- theta - eps * psi f'(psi theta)
///   psi   <- psi   + eps * (theta f'(psi theta) - alpha f'(-psi alpha))
///   alpha <- alpha + eps * lambda sigma psi f'(-psi alpha) + eps * rate(k eps)
/// (alpha line in annealed mode only). Sample times are t = k*eps.
Trajectory sgd_simulate(Criterion c, const SystemMode& mode, State init, const SgdConfig& cfg);

struct ConvergenceReport {
  double order = 0.0;
  bool degenerate_exact = false;   // all errors at rounding level; order meaningless
  std::size_t excluded_runs = 0;   // runs that diverged
  std::vector<std::pair<double, double>> errors;  // (step, max abs error vs reference)
};

/// Empirical order of accuracy: integrate at each step size (each must halve
/// the previous), measure max deviation from the finest-step run at shared
/// sample times, and fit the log-log slope. Divergent runs are excluded; fewer
/// than 3 surviving runs raises InsufficientDataError.
ConvergenceReport convergence_order(const VectorField& field, const State& init, StepMethod method,
                                    std::span<const double> steps, double t_end);

}  // namespace tinygan
