#pragma once

#include <variant>

#include "tinygan/criterion.hpp"

namespace tinygan {

/// One time-stamped point of the three-state system. alpha is carried in every
/// mode; in autonomous mode it is frozen at the data location alpha_r.
struct State {
  double t = 0.0;
  double theta = 0.0;  // generated point
  double psi = 0.0;    // linear discriminator slope
  double alpha = 0.0;  // data point

  bool finite() const;
  bool operator==(const State&) const = default;
};

/// Exponential data path alpha(t) = (alpha0 - alpha_r) e^(-t/T) + alpha_r.
struct AnnealingSchedule {
  double alpha0 = 0.0;         // data location when annealing starts
  double alpha_r = 0.0;        // real data location, the target of the path
  double time_constant = 1.0;  // T > 0

  bool operator==(const AnnealingSchedule&) const = default;
};

/// alpha(t). Requires t >= 0 and T > 0.
double schedule_value(const AnnealingSchedule& sch, double t);

/// d alpha/dt = (alpha_r - alpha0)/T * e^(-t/T), the slow annealing drive.
double schedule_rate(const AnnealingSchedule& sch, double t);

/// Sign of the coupled alpha term. Descent moves alpha downhill on the
/// objective (+psi f'(-psi alpha)); AsPrinted keeps the opposite sign, which
/// for the linear criterion makes the homogeneous system nilpotent and the
/// solution grow polynomially.
enum class CouplingSign { Descent, AsPrinted };

struct AutonomousMode {
  double alpha_r = 0.0;  // static data location
  bool operator==(const AutonomousMode&) const = default;
};

struct AnnealedMode {
  int lambda = 0;  // 0: alpha follows the schedule only; 1: also coupled to psi
  AnnealingSchedule schedule;
  CouplingSign sign = CouplingSign::Descent;
  bool operator==(const AnnealedMode&) const = default;
};

using SystemMode = std::variant<AutonomousMode, AnnealedMode>;

bool is_autonomous(const SystemMode& mode);
const AnnealedMode* as_annealed(const SystemMode& mode);
/// Static data location (autonomous) or schedule target (annealed).
double mode_alpha_r(const SystemMode& mode);

struct Slope2 {
  double dtheta = 0.0;
  double dpsi = 0.0;
};

struct Slope3 {
  double dtheta = 0.0;
  double dpsi = 0.0;
  double dalpha = 0.0;
};

/// Right-hand side of the two-state flow with static data at alpha_r:
///   dtheta = -psi f'(psi theta)
///   dpsi   =  theta f'(psi theta) - alpha_r f'(-psi alpha_r)
/// Vanishes exactly at (theta, psi) = (alpha_r, 0) for every criterion.
Slope2 autonomous_field(Criterion c, double alpha_r, const State& s);

/// Right-hand side of the three-state annealed flow:
///   dtheta = -psi f'(psi theta)
///   dpsi   =  theta f'(psi theta) - alpha f'(-psi alpha)
///   dalpha =  lambda * sigma * psi f'(-psi alpha) + schedule_rate(t)
/// with sigma = +1 (Descent) or -1 (AsPrinted). With lambda = 0 the alpha line
/// is independent of (theta, psi).
Slope3 nonautonomous_field(Criterion c, const AnnealedMode& mode, const State& s);

/// Start state of an annealed run under the pretrained-to-the-initial-
/// distribution convention: theta(0) = alpha(0) = alpha0 and psi(0) = 0.
State beta_initial_state(const AnnealingSchedule& sch);

}  // namespace tinygan
