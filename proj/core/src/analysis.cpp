#include "tinygan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace tinygan {

namespace {

constexpr double kFlatRange = 1e-12;

struct Extremum {
  double t = 0.0;
  double value = 0.0;
};

// Vertex of the parabola through three uniformly ordered samples. Falls back
// to the middle sample when the points are collinear.
Extremum refine_parabola(double tm, double vm, double t0, double v0, double tp, double vp) {
  const double dl = t0 - tm, dr = tp - t0;
  const double curv = (vp - v0) / dr - (v0 - vm) / dl;
  if (std::abs(curv) < 1e-300) return {t0, v0};
  const double slope = (vp - vm) / (tp - tm);
  const double half_span = 0.5 * (tp - tm);
  const double a2 = curv / (dl + dr) * 2.0;  // 2a of v = a x^2 + b x + c around t0
  const double offset = -slope / a2;
  const double clamped = std::clamp(offset, -half_span, half_span);
  const double value = v0 + slope * clamped + 0.5 * a2 * clamped * clamped;
  return {t0 + clamped, value};
}

struct WindowView {
  std::vector<double> t;
  std::vector<double> v;
};

WindowView window_samples(const Trajectory& traj, StateComponent comp, double cut) {
  WindowView w;
  for (const State& s : traj.samples) {
    if (s.t > cut) {
      w.t.push_back(s.t);
      w.v.push_back(component_value(s, comp));
    }
  }
  return w;
}

std::vector<Extremum> local_extrema(const WindowView& w, bool maxima) {
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < w.v.size(); ++i) {
    const bool is_extremum = maxima ? (w.v[i] > w.v[i - 1] && w.v[i] >= w.v[i + 1])
                                    : (w.v[i] < w.v[i - 1] && w.v[i] <= w.v[i + 1]);
    if (is_extremum) {
      out.push_back(
          refine_parabola(w.t[i - 1], w.v[i - 1], w.t[i], w.v[i], w.t[i + 1], w.v[i + 1]));
    }
  }
  return out;
}

}  // namespace

std::string_view component_name(StateComponent c) {
  switch (c) {
    case StateComponent::Theta: return "theta";
    case StateComponent::Psi: return "psi";
    case StateComponent::Alpha: return "alpha";
  }
  return "?";
}

double component_value(const State& s, StateComponent c) {
  switch (c) {
    case StateComponent::Theta: return s.theta;
    case StateComponent::Psi: return s.psi;
    case StateComponent::Alpha: return s.alpha;
  }
  return 0.0;
}

OscillationSummary steady_summary(const Trajectory& traj, StateComponent component,
                                  double transient_cut) {
  if (traj.samples.empty()) throw InsufficientWindowError("empty trajectory");
  const double t_last = traj.samples.back().t;
  if (t_last - transient_cut < 4.0 * std::numbers::pi) {
    throw InsufficientWindowError("trajectory must extend at least 4*pi past the transient cut");
  }
  const WindowView w = window_samples(traj, component, transient_cut);
  if (w.v.size() < 3) throw InsufficientWindowError("too few samples past the transient cut");

  OscillationSummary out;
  out.component = component;
  out.transient_cut = transient_cut;
  out.window = t_last - transient_cut;

  const auto [raw_min_it, raw_max_it] = std::minmax_element(w.v.begin(), w.v.end());
  const double raw_min = *raw_min_it, raw_max = *raw_max_it;
  if (raw_max - raw_min < kFlatRange) {
    out.center = 0.5 * (raw_max + raw_min);
    out.amplitude = 0.0;
    out.period_defined = false;
    return out;
  }

  const std::vector<Extremum> maxima = local_extrema(w, true);
  const std::vector<Extremum> minima = local_extrema(w, false);

  // Window endpoints can carry the extreme value when no interior peak exists.
  double vmax = std::max(w.v.front(), w.v.back());
  double vmin = std::min(w.v.front(), w.v.back());
  for (const Extremum& e : maxima) vmax = std::max(vmax, e.value);
  for (const Extremum& e : minima) vmin = std::min(vmin, e.value);

  out.center = 0.5 * (vmax + vmin);
  out.amplitude = 0.5 * (vmax - vmin);

  if (maxima.size() >= 2) {
    double sum = 0.0;
    for (std::size_t i = 1; i < maxima.size(); ++i) sum += maxima[i].t - maxima[i - 1].t;
    out.period = sum / static_cast<double>(maxima.size() - 1);
    out.period_defined = out.period > 0.0;
  }
  return out;
}

double equilibrium_distance(const Trajectory& traj, const std::array<double, 3>& target,
                            double transient_cut) {
  const double dt = steady_summary(traj, StateComponent::Theta, transient_cut).center - target[0];
  const double dp = steady_summary(traj, StateComponent::Psi, transient_cut).center - target[1];
  const double da = steady_summary(traj, StateComponent::Alpha, transient_cut).center - target[2];
  return std::sqrt(dt * dt + dp * dp + da * da);
}

double invariant_drift(const Trajectory& traj, const std::function<double(const State&)>& invariant) {
  if (traj.samples.empty()) throw DomainError("invariant_drift on an empty trajectory");
  const double base = invariant(traj.samples.front());
  double drift = 0.0;
  for (const State& s : traj.samples) drift = std::max(drift, std::abs(invariant(s) - base));
  return drift;
}

double oracle_error(const Trajectory& traj, const StateOracle& oracle) {
  double err = 0.0;
  for (const State& s : traj.samples) {
    const std::array<double, 3> ref = oracle(s.t);
    err = std::max({err, std::abs(s.theta - ref[0]), std::abs(s.psi - ref[1]),
                    std::abs(s.alpha - ref[2])});
  }
  return err;
}

double default_transient_cut(const SystemMode& mode) {
  if (const auto* annealed = as_annealed(mode)) {
    return std::max(10.0 * annealed->schedule.time_constant, 20.0);
  }
  return 0.0;
}

}  // namespace tinygan
