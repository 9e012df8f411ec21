#include "tinygan/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tinygan {

namespace {

void check_config(const IntegratorConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) throw DomainError("integrator step must be > 0");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw DomainError("integrator t_end must be > 0");
  if (cfg.step > cfg.t_end) throw DomainError("integrator step must not exceed t_end");
  if (cfg.sample_stride < 1) throw DomainError("sample_stride must be >= 1");
}

void check_init(const State& init) {
  if (!init.finite()) throw DomainError("non-finite initial state");
  if (init.t != 0.0) throw DomainError("initial state must start at t = 0");
}

bool within_guard(const State& s) {
  return s.finite() && std::abs(s.theta) <= kDivergenceGuard && std::abs(s.psi) <= kDivergenceGuard &&
         std::abs(s.alpha) <= kDivergenceGuard;
}

std::int64_t step_count(const IntegratorConfig& cfg) {
  const double ratio = cfg.t_end / cfg.step;
  auto n = static_cast<std::int64_t>(std::ceil(ratio - 1e-9));
  return std::max<std::int64_t>(n, 1);
}

State advance(const State& s, double dt_slope, const Slope3& k, double t) {
  return {t, s.theta + dt_slope * k.dtheta, s.psi + dt_slope * k.dpsi, s.alpha + dt_slope * k.dalpha};
}

State euler_step(const VectorField& f, const State& s, double h, double t_next) {
  const Slope3 k1 = f(s);
  return advance(s, h, k1, t_next);
}

State rk4_step(const VectorField& f, const State& s, double h, double t_next) {
  const double t_half = s.t + 0.5 * h;
  const Slope3 k1 = f(s);
  const Slope3 k2 = f(advance(s, 0.5 * h, k1, t_half));
  const Slope3 k3 = f(advance(s, 0.5 * h, k2, t_half));
  const Slope3 k4 = f(advance(s, h, k3, s.t + h));
  const double sixth = h / 6.0;
  return {t_next, s.theta + sixth * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta),
          s.psi + sixth * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi),
          s.alpha + sixth * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha)};
}

[[noreturn]] void throw_divergence(std::vector<State> samples, TrajectoryMeta meta, double t) {
  Trajectory partial{std::move(samples), std::move(meta)};
  throw DivergenceError("state exceeded the divergence guard at t = " + std::to_string(t),
                        std::move(partial), t);
}

}  // namespace

VectorField make_field(Criterion c, const SystemMode& mode) {
  if (const auto* automode = std::get_if<AutonomousMode>(&mode)) {
    const double alpha_r = automode->alpha_r;
    return [c, alpha_r](const State& s) -> Slope3 {
      const Slope2 two = autonomous_field(c, alpha_r, s);
      return {two.dtheta, two.dpsi, 0.0};
    };
  }
  const AnnealedMode annealed = std::get<AnnealedMode>(mode);
  return [c, annealed](const State& s) { return nonautonomous_field(c, annealed, s); };
}

Trajectory integrate(const VectorField& field, const State& init, const IntegratorConfig& cfg,
                     TrajectoryMeta meta) {
  check_config(cfg);
  check_init(init);
  meta.driver = cfg;

  const std::int64_t n = step_count(cfg);
  std::vector<State> samples;
  samples.reserve(static_cast<std::size_t>(n / cfg.sample_stride) + 2);

  if (!within_guard(init)) throw_divergence({}, std::move(meta), 0.0);
  samples.push_back(init);

  State s = init;
  for (std::int64_t k = 0; k < n; ++k) {
    const double t_next = static_cast<double>(k + 1) * cfg.step;
    s = cfg.method == StepMethod::RK4 ? rk4_step(field, s, cfg.step, t_next)
                                      : euler_step(field, s, cfg.step, t_next);
    if (!within_guard(s)) throw_divergence(std::move(samples), std::move(meta), t_next);
    if ((k + 1) % cfg.sample_stride == 0 || k + 1 == n) samples.push_back(s);
  }
  return {std::move(samples), std::move(meta)};
}

Trajectory simulate(Criterion c, const SystemMode& mode, State init, const IntegratorConfig& cfg) {
  if (const auto* automode = std::get_if<AutonomousMode>(&mode)) {
    init.alpha = automode->alpha_r;  // alpha rides along frozen
  }
  TrajectoryMeta meta;
  meta.criterion = c;
  meta.mode = mode;
  Trajectory traj = integrate(make_field(c, mode), init, cfg, std::move(meta));
  return traj;
}

Trajectory sgd_simulate(Criterion c, const SystemMode& mode, State init, const SgdConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw DomainError("learning_rate must be > 0");
  }
  if (cfg.iterations < 1) throw DomainError("iterations must be >= 1");
  check_init(init);

  const auto* annealed = as_annealed(mode);
  if (const auto* automode = std::get_if<AutonomousMode>(&mode)) init.alpha = automode->alpha_r;

  TrajectoryMeta meta;
  meta.criterion = c;
  meta.mode = mode;
  meta.driver = cfg;

  const double eps = cfg.learning_rate;
  std::vector<State> samples;
  samples.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  if (!within_guard(init)) throw_divergence({}, std::move(meta), 0.0);
  samples.push_back(init);

  State s = init;
  for (std::int64_t k = 0; k < cfg.iterations; ++k) {
    const double t = static_cast<double>(k) * eps;
    double theta = s.theta, psi = s.psi, alpha = s.alpha;
    if (cfg.order == UpdateOrder::Simultaneous) {
      const double slope_gen = f_slope(c, psi * theta);
      const double slope_data = f_slope(c, -psi * alpha);
      const double dtheta = -psi * slope_gen;
      const double dpsi = theta * slope_gen - alpha * slope_data;
      const double dalpha = annealed && annealed->lambda == 1
                                ? (annealed->sign == CouplingSign::Descent ? 1.0 : -1.0) * psi * slope_data
                                : 0.0;
      theta += eps * dtheta;
      psi += eps * dpsi;
      if (annealed) alpha += eps * dalpha + eps * schedule_rate(annealed->schedule, t);
    } else {
      // theta, then psi with the fresh theta, then alpha with the fresh psi
      theta -= eps * psi * f_slope(c, psi * theta);
      psi += eps * (theta * f_slope(c, psi * theta) - alpha * f_slope(c, -psi * alpha));
      if (annealed) {
        if (annealed->lambda == 1) {
          const double sigma = annealed->sign == CouplingSign::Descent ? 1.0 : -1.0;
          alpha += eps * sigma * psi * f_slope(c, -psi * alpha);
        }
        alpha += eps * schedule_rate(annealed->schedule, t);
      }
    }
    s = {static_cast<double>(k + 1) * eps, theta, psi, alpha};
    if (!within_guard(s)) throw_divergence(std::move(samples), std::move(meta), s.t);
    samples.push_back(s);
  }
  return {std::move(samples), std::move(meta)};
}

ConvergenceReport convergence_order(const VectorField& field, const State& init, StepMethod method,
                                    std::span<const double> steps, double t_end) {
  if (steps.size() < 3) throw DomainError("convergence_order needs at least 3 step sizes");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0)) throw DomainError("step sizes must be positive");
    if (i > 0 && std::abs(steps[i - 1] / steps[i] - 2.0) > 1e-9) {
      throw DomainError("each step size must halve the previous one");
    }
  }

  ConvergenceReport report;
  std::vector<std::optional<Trajectory>> runs(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      runs[i] = integrate(field, init, {method, steps[i], t_end, 1});
    } catch (const DivergenceError&) {
      runs[i] = std::nullopt;
      ++report.excluded_runs;
    }
  }

  const std::size_t survivors = steps.size() - report.excluded_runs;
  if (!runs.back().has_value() || survivors < 3) {
    throw InsufficientDataError("fewer than 3 runs survived for order estimation");
  }

  const Trajectory& reference = *runs.back();
  const double h_ref = steps.back();
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    if (!runs[i].has_value()) continue;
    const auto stride = static_cast<std::size_t>(std::llround(steps[i] / h_ref));
    double err = 0.0;
    const auto& coarse = runs[i]->samples;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      const std::size_t j = k * stride;
      if (j >= reference.samples.size()) break;
      const State& a = coarse[k];
      const State& b = reference.samples[j];
      err = std::max({err, std::abs(a.theta - b.theta), std::abs(a.psi - b.psi),
                      std::abs(a.alpha - b.alpha)});
    }
    report.errors.emplace_back(steps[i], err);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& [h, err] : report.errors) {
    if (err <= 1e-14) continue;  // at rounding level, useless for the fit
    const double x = std::log(h), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) {
    report.degenerate_exact = true;
    report.order = 0.0;
    return report;
  }
  const double dm = static_cast<double>(m);
  report.order = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
  return report;
}

}  // namespace tinygan
