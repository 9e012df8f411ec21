#pragma once

#include <array>
#include <functional>
#include <string_view>

#include "tinygan/integrator.hpp"

namespace tinygan {

enum class StateComponent { Theta, Psi, Alpha };

std::string_view component_name(StateComponent c);
double component_value(const State& s, StateComponent c);

/// Steady-state summary of one trajectory component past the transient cut.
/// Center and amplitude come from parabola-refined extrema; the period is the
/// mean spacing of successive refined maxima.
struct OscillationSummary {
  StateComponent component = StateComponent::Theta;
  double center = 0.0;
  double amplitude = 0.0;
  double period = 0.0;  // meaningful only when period_defined
  bool period_defined = false;
  double transient_cut = 0.0;
  double window = 0.0;  // time span analyzed

  bool operator==(const OscillationSummary&) const = default;
};

/// Analyzes samples with t > transient_cut. The trajectory must extend at
/// least 4*pi beyond the cut (InsufficientWindowError otherwise). A flat
/// signal (range below 1e-12) reports amplitude 0 with the period undefined.
OscillationSummary steady_summary(const Trajectory& traj, StateComponent component,
                                  double transient_cut);

/// Euclidean distance between the steady (theta, psi, alpha) centers and a
/// target triple.
double equilibrium_distance(const Trajectory& traj, const std::array<double, 3>& target,
                            double transient_cut);

/// Max deviation of a scalar invariant from its value at the first sample.
double invariant_drift(const Trajectory& traj, const std::function<double(const State&)>& invariant);

/// Closed-form (theta, psi, alpha) as a function of time.
using StateOracle = std::function<std::array<double, 3>(double)>;

/// Max absolute componentwise deviation between trajectory samples and an oracle.
double oracle_error(const Trajectory& traj, const StateOracle& oracle);

/// Transient policy: 0 for autonomous runs, max(10*T, 20) for annealed runs
/// (the e^(-t/T) term is then below ~4.5e-5 of its initial size).
double default_transient_cut(const SystemMode& mode);

}  // namespace tinygan
