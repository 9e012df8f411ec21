#include "tinygan/dynamics.hpp"

#include <cmath>

#include "tinygan/errors.hpp"

namespace tinygan {

namespace {

void check_schedule(const AnnealingSchedule& sch, double t) {
  if (!(sch.time_constant > 0.0) || !std::isfinite(sch.time_constant)) {
    throw DomainError("annealing schedule requires T > 0");
  }
  if (!std::isfinite(sch.alpha0) || !std::isfinite(sch.alpha_r)) {
    throw DomainError("annealing schedule endpoints must be finite");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("schedule evaluated at negative or non-finite time");
  }
}

void check_state(const State& s) {
  if (!s.finite()) {
    throw DomainError("non-finite state passed to vector field");
  }
}

}  // namespace

bool State::finite() const {
  return std::isfinite(t) && std::isfinite(theta) && std::isfinite(psi) && std::isfinite(alpha);
}

double schedule_value(const AnnealingSchedule& sch, double t) {
  check_schedule(sch, t);
  return (sch.alpha0 - sch.alpha_r) * std::exp(-t / sch.time_constant) + sch.alpha_r;
}

double schedule_rate(const AnnealingSchedule& sch, double t) {
  check_schedule(sch, t);
  return (sch.alpha_r - sch.alpha0) / sch.time_constant * std::exp(-t / sch.time_constant);
}

bool is_autonomous(const SystemMode& mode) {
  return std::holds_alternative<AutonomousMode>(mode);
}

const AnnealedMode* as_annealed(const SystemMode& mode) {
  return std::get_if<AnnealedMode>(&mode);
}

double mode_alpha_r(const SystemMode& mode) {
  if (const auto* a = std::get_if<AutonomousMode>(&mode)) return a->alpha_r;
  return std::get<AnnealedMode>(mode).schedule.alpha_r;
}

Slope2 autonomous_field(Criterion c, double alpha_r, const State& s) {
  check_state(s);
  if (!std::isfinite(alpha_r)) throw DomainError("non-finite alpha_r");
  const double slope_gen = f_slope(c, s.psi * s.theta);
  const double slope_data = f_slope(c, -s.psi * alpha_r);
  return {-s.psi * slope_gen, s.theta * slope_gen - alpha_r * slope_data};
}

Slope3 nonautonomous_field(Criterion c, const AnnealedMode& mode, const State& s) {
  check_state(s);
  if (s.t < 0.0) throw DomainError("annealed field evaluated at negative time");
  if (mode.lambda != 0 && mode.lambda != 1) {
    throw DomainError("lambda must be 0 or 1");
  }
  const double slope_gen = f_slope(c, s.psi * s.theta);
  const double slope_data = f_slope(c, -s.psi * s.alpha);
  const double rate = schedule_rate(mode.schedule, s.t);
  double dalpha = rate;
  if (mode.lambda == 1) {
    const double sigma = mode.sign == CouplingSign::Descent ? 1.0 : -1.0;
    dalpha += sigma * s.psi * slope_data;
  }
  return {-s.psi * slope_gen, s.theta * slope_gen - s.alpha * slope_data, dalpha};
}

State beta_initial_state(const AnnealingSchedule& sch) {
  check_schedule(sch, 0.0);
  return {0.0, sch.alpha0, 0.0, sch.alpha0};
}

}  // namespace tinygan
