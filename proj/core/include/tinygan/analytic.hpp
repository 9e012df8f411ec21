#pragma once

#include <utility>

#include "tinygan/dynamics.hpp"

namespace tinygan {

/// Coefficients of the closed-form discriminator trace for the linear
/// criterion with schedule-only data dynamics:
///   psi(t) = A cos t + B sin t + C e^(-a t)
/// obtained by partial fractions of psi(s) = -K / ((1+s^2)(s+a)), with
/// a = 1/T and K = (alpha_r - alpha0)/T. The residue computation gives
///   A = K/(1+a^2),  B = -K a/(1+a^2),  C = -K/(1+a^2),
/// which satisfies both start conditions (A + C = 0 makes psi(0) = 0,
/// B = aC makes psi'(0) = 0) and the forcing condition psi''(0) = -K.
struct LaplaceCoefficients {
  double A = 0.0;  // cos t coefficient
  double B = 0.0;  // sin t coefficient
  double C = 0.0;  // e^(-a t) coefficient
  double a = 0.0;  // 1/T
  double K = 0.0;  // (alpha_r - alpha0)/T

  bool operator==(const LaplaceCoefficients&) const = default;
};

/// Steady-state oscillation predicted for the linear schedule-only system.
struct OscillationPrediction {
  double amplitude = 0.0;     // |K|/sqrt(1+a^2)
  double phase = 0.0;         // phi in (-pi, pi] with psi_1(t) = amplitude * sin(t + phi)
  double theta_center = 0.0;  // alpha_r
  double psi_center = 0.0;    // 0

  bool operator==(const OscillationPrediction&) const = default;
};

/// Exact solution of the linear two-state system theta' = -psi,
/// psi' = theta - alpha_r (unit-frequency rotation around (alpha_r, 0)):
///   theta(t) = alpha_r + (theta0 - alpha_r) cos t - psi0 sin t
///   psi(t)   = psi0 cos t + (theta0 - alpha_r) sin t
std::pair<double, double> autonomous_solution(double theta0, double psi0, double alpha_r, double t);

LaplaceCoefficients laplace_coefficients(const AnnealingSchedule& sch);

/// psi(t) = A cos t + B sin t + C e^(-a t), t >= 0.
double beta_psi_solution(const AnnealingSchedule& sch, double t);

/// theta(t) = alpha_r + (C/a) e^(-a t) - A sin t + B cos t; the coefficient
/// identities make theta(0) = alpha0 hold exactly, and the period-mean in
/// steady state is alpha_r for every T.
double beta_theta_solution(const AnnealingSchedule& sch, double t);

/// Persistent oscillation amplitude |K|/sqrt(1+a^2) = sqrt(A^2 + B^2);
/// strictly decreasing in T for fixed alpha0 != alpha_r.
double oscillation_amplitude(const AnnealingSchedule& sch);

/// Phase phi such that A cos t + B sin t = amplitude * sin(t + phi).
/// Undefined (throws UndefinedPhaseError) when K = 0.
double oscillation_phase(const AnnealingSchedule& sch);

OscillationPrediction oscillation_prediction(const AnnealingSchedule& sch);

}  // namespace tinygan
