#include "tinygan/analytic.hpp"

#include <cmath>

#include "tinygan/errors.hpp"

namespace tinygan {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("closed form evaluated at negative time");
}

void check_schedule(const AnnealingSchedule& sch) {
  if (!(sch.time_constant > 0.0) || !std::isfinite(sch.time_constant)) {
    throw DomainError("annealing schedule requires T > 0");
  }
}

}  // namespace

std::pair<double, double> autonomous_solution(double theta0, double psi0, double alpha_r, double t) {
  const double c = std::cos(t), s = std::sin(t);
  const double r = theta0 - alpha_r;
  return {alpha_r + r * c - psi0 * s, psi0 * c + r * s};
}

LaplaceCoefficients laplace_coefficients(const AnnealingSchedule& sch) {
  check_schedule(sch);
  const double a = 1.0 / sch.time_constant;
  const double K = (sch.alpha_r - sch.alpha0) / sch.time_constant;
  const double denom = 1.0 + a * a;
  return {K / denom, -K * a / denom, -K / denom, a, K};
}

double beta_psi_solution(const AnnealingSchedule& sch, double t) {
  check_time(t);
  const LaplaceCoefficients lc = laplace_coefficients(sch);
  return lc.A * std::cos(t) + lc.B * std::sin(t) + lc.C * std::exp(-lc.a * t);
}

double beta_theta_solution(const AnnealingSchedule& sch, double t) {
  check_time(t);
  const LaplaceCoefficients lc = laplace_coefficients(sch);
  return sch.alpha_r + (lc.C / lc.a) * std::exp(-lc.a * t) - lc.A * std::sin(t) + lc.B * std::cos(t);
}

double oscillation_amplitude(const AnnealingSchedule& sch) {
  const LaplaceCoefficients lc = laplace_coefficients(sch);
  return std::abs(lc.K) / std::hypot(1.0, lc.a);
}

double oscillation_phase(const AnnealingSchedule& sch) {
  const LaplaceCoefficients lc = laplace_coefficients(sch);
  if (lc.K == 0.0) throw UndefinedPhaseError("phase undefined for a zero-amplitude oscillation");
  // amplitude*sin(t+phi) = amplitude*(sin t cos phi + cos t sin phi),
  // so sin phi ~ A and cos phi ~ B
  return std::atan2(lc.A, lc.B);
}

OscillationPrediction oscillation_prediction(const AnnealingSchedule& sch) {
  OscillationPrediction p;
  p.amplitude = oscillation_amplitude(sch);
  p.phase = p.amplitude > 0.0 ? oscillation_phase(sch) : 0.0;
  p.theta_center = sch.alpha_r;
  p.psi_center = 0.0;
  return p;
}

}  // namespace tinygan
