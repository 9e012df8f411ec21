#include "tinygan/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <json.hpp>

#include "tinygan/analytic.hpp"
#include "tinygan/csv.hpp"
#include "tinygan/errors.hpp"

namespace tinygan {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---- JSON conversions -------------------------------------------------------

ordered_json mode_to_json(const SystemMode& mode) {
  ordered_json j;
  if (const auto* automode = std::get_if<AutonomousMode>(&mode)) {
    j["variant"] = "autonomous";
    j["alpha_r"] = automode->alpha_r;
  } else {
    const auto& annealed = std::get<AnnealedMode>(mode);
    j["variant"] = "annealed";
    j["lambda"] = annealed.lambda;
    j["coupling"] = annealed.sign == CouplingSign::Descent ? "descent" : "as-printed";
    j["alpha0"] = annealed.schedule.alpha0;
    j["alpha_r"] = annealed.schedule.alpha_r;
    j["T"] = annealed.schedule.time_constant;
  }
  return j;
}

SystemMode mode_from_json(const ordered_json& j) {
  const std::string variant = j.at("variant");
  if (variant == "autonomous") {
    return AutonomousMode{j.at("alpha_r").get<double>()};
  }
  AnnealedMode m;
  m.lambda = j.at("lambda").get<int>();
  m.sign = j.at("coupling").get<std::string>() == "descent" ? CouplingSign::Descent
                                                            : CouplingSign::AsPrinted;
  m.schedule.alpha0 = j.at("alpha0").get<double>();
  m.schedule.alpha_r = j.at("alpha_r").get<double>();
  m.schedule.time_constant = j.at("T").get<double>();
  return m;
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["name"] = cfg.name;
  j["criterion"] = std::string(cfg.criterion.name());
  j["mode"] = mode_to_json(cfg.mode);

  ordered_json init;
  if (cfg.init.beta_preset) {
    init["preset"] = "beta";
  } else {
    if (cfg.init.theta) init["theta"] = *cfg.init.theta;
    if (cfg.init.psi) init["psi"] = *cfg.init.psi;
    if (cfg.init.alpha) init["alpha"] = *cfg.init.alpha;
  }
  j["init"] = init;

  if (cfg.integrator) {
    j["integrator"] = {{"method", cfg.integrator->method == StepMethod::RK4 ? "rk4" : "euler"},
                       {"step", cfg.integrator->step},
                       {"t_end", cfg.integrator->t_end},
                       {"sample_stride", cfg.integrator->sample_stride}};
  } else {
    j["integrator"] = nullptr;
  }
  if (cfg.sgd) {
    j["sgd"] = {{"learning_rate", cfg.sgd->learning_rate},
                {"iterations", cfg.sgd->iterations},
                {"order", cfg.sgd->order == UpdateOrder::Alternating ? "alternating" : "simultaneous"}};
  } else {
    j["sgd"] = nullptr;
  }

  ordered_json outs = ordered_json::array();
  if (cfg.outputs.trajectory_csv) outs.push_back("trajectory-csv");
  if (cfg.outputs.manifest_json) outs.push_back("manifest-json");
  if (cfg.outputs.plot_svg) outs.push_back("plot-svg");
  j["outputs"] = outs;
  j["output_dir"] = cfg.output_dir.string();
  j["transient_cut"] = cfg.transient_cut ? ordered_json(*cfg.transient_cut) : ordered_json(nullptr);
  if (cfg.equilibrium_target) {
    j["equilibrium_target"] = *cfg.equilibrium_target;
  } else {
    j["equilibrium_target"] = nullptr;
  }
  return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
  ExperimentConfig cfg;
  cfg.name = j.at("name").get<std::string>();
  const auto criterion = Criterion::from_name(j.at("criterion").get<std::string>());
  if (!criterion) throw ValidationError("manifest: unknown criterion name");
  cfg.criterion = *criterion;
  cfg.mode = mode_from_json(j.at("mode"));

  const auto& init = j.at("init");
  if (init.contains("preset")) {
    cfg.init.beta_preset = true;
  } else {
    if (init.contains("theta")) cfg.init.theta = init.at("theta").get<double>();
    if (init.contains("psi")) cfg.init.psi = init.at("psi").get<double>();
    if (init.contains("alpha")) cfg.init.alpha = init.at("alpha").get<double>();
  }

  if (!j.at("integrator").is_null()) {
    const auto& ji = j.at("integrator");
    IntegratorConfig ic;
    ic.method = ji.at("method").get<std::string>() == "rk4" ? StepMethod::RK4 : StepMethod::Euler;
    ic.step = ji.at("step").get<double>();
    ic.t_end = ji.at("t_end").get<double>();
    ic.sample_stride = ji.at("sample_stride").get<std::int64_t>();
    cfg.integrator = ic;
  }
  if (!j.at("sgd").is_null()) {
    const auto& js = j.at("sgd");
    SgdConfig sc;
    sc.learning_rate = js.at("learning_rate").get<double>();
    sc.iterations = js.at("iterations").get<std::int64_t>();
    sc.order = js.at("order").get<std::string>() == "alternating" ? UpdateOrder::Alternating
                                                                  : UpdateOrder::Simultaneous;
    cfg.sgd = sc;
  }

  cfg.outputs = {false, false, false};
  for (const auto& item : j.at("outputs")) {
    const std::string s = item.get<std::string>();
    if (s == "trajectory-csv") cfg.outputs.trajectory_csv = true;
    if (s == "manifest-json") cfg.outputs.manifest_json = true;
    if (s == "plot-svg") cfg.outputs.plot_svg = true;
  }
  cfg.output_dir = j.at("output_dir").get<std::string>();
  if (!j.at("transient_cut").is_null()) cfg.transient_cut = j.at("transient_cut").get<double>();
  if (!j.at("equilibrium_target").is_null()) {
    cfg.equilibrium_target = j.at("equilibrium_target").get<std::array<double, 3>>();
  }
  return cfg;
}

ordered_json summary_to_json(const OscillationSummary& s) {
  ordered_json j;
  j["center"] = s.center;
  j["amplitude"] = s.amplitude;
  j["period"] = s.period_defined ? ordered_json(s.period) : ordered_json(nullptr);
  j["transient_cut"] = s.transient_cut;
  j["window"] = s.window;
  return j;
}

OscillationSummary summary_from_json(const ordered_json& j, StateComponent component) {
  OscillationSummary s;
  s.component = component;
  s.center = j.at("center").get<double>();
  s.amplitude = j.at("amplitude").get<double>();
  if (!j.at("period").is_null()) {
    s.period = j.at("period").get<double>();
    s.period_defined = true;
  }
  s.transient_cut = j.at("transient_cut").get<double>();
  s.window = j.at("window").get<double>();
  return s;
}

// ---- run machinery ----------------------------------------------------------

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const RunOverrides& overrides) {
  if (overrides.output_dir) return *overrides.output_dir;
  if (const char* env = std::getenv(kOutputDirEnvVar); env && *env) return env;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return std::filesystem::path("out") / cfg.name;
}

bool oracle_applies(const ExperimentConfig& cfg, const State& init) {
  if (cfg.criterion.kind != CriterionKind::Linear) return false;
  if (is_autonomous(cfg.mode)) return true;
  const auto& annealed = std::get<AnnealedMode>(cfg.mode);
  // Closed forms assume the annealed start convention psi(0)=0, theta(0)=alpha(0)=alpha0.
  return annealed.lambda == 0 && init.psi == 0.0 && init.theta == init.alpha &&
         init.alpha == annealed.schedule.alpha0;
}

StateOracle make_oracle(const ExperimentConfig& cfg, const State& init) {
  if (is_autonomous(cfg.mode)) {
    const double alpha_r = std::get<AutonomousMode>(cfg.mode).alpha_r;
    const double theta0 = init.theta, psi0 = init.psi;
    return [=](double t) -> std::array<double, 3> {
      const auto [theta, psi] = autonomous_solution(theta0, psi0, alpha_r, t);
      return {theta, psi, alpha_r};
    };
  }
  const AnnealingSchedule sch = std::get<AnnealedMode>(cfg.mode).schedule;
  return [sch](double t) -> std::array<double, 3> {
    return {beta_theta_solution(sch, t), beta_psi_solution(sch, t), schedule_value(sch, t)};
  };
}

void collect_invariant_drifts(const ExperimentConfig& cfg, const Trajectory& traj, RunManifest& m) {
  if (traj.samples.empty()) return;
  const bool linear = cfg.criterion.kind == CriterionKind::Linear;
  if (const auto* automode = std::get_if<AutonomousMode>(&cfg.mode)) {
    if (linear) {
      const double alpha_r = automode->alpha_r;
      m.invariant_drifts.emplace_back("radius_squared", invariant_drift(traj, [alpha_r](const State& s) {
        const double r = s.theta - alpha_r;
        return r * r + s.psi * s.psi;
      }));
    }
    return;
  }
  const auto& annealed = std::get<AnnealedMode>(cfg.mode);
  const AnnealingSchedule sch = annealed.schedule;
  if (annealed.lambda == 0) {
    m.invariant_drifts.emplace_back("alpha_minus_schedule", invariant_drift(traj, [sch](const State& s) {
      return s.alpha - schedule_value(sch, s.t);
    }));
  } else if (linear && annealed.sign == CouplingSign::Descent) {
    // d/dt (theta + alpha) equals the schedule rate, so this combination is conserved.
    m.invariant_drifts.emplace_back("coupled_sum", invariant_drift(traj, [sch](const State& s) {
      const double ramp = (sch.alpha_r - sch.alpha0) * (1.0 - std::exp(-s.t / sch.time_constant));
      return s.theta + s.alpha - ramp;
    }));
  }
}

}  // namespace

std::string manifest_to_json_text(const RunManifest& m) {
  ordered_json j;
  j["schema_version"] = m.schema_version;
  j["name"] = m.name;
  j["config"] = config_to_json(m.config);
  j["diverged"] = m.diverged;
  j["failure_time"] = m.failure_time ? ordered_json(*m.failure_time) : ordered_json(nullptr);

  ordered_json analysis;
  analysis["transient_cut"] = m.transient_cut;
  if (m.summaries) {
    analysis["summaries"] = {{"theta", summary_to_json(m.summaries->theta)},
                             {"psi", summary_to_json(m.summaries->psi)},
                             {"alpha", summary_to_json(m.summaries->alpha)}};
  } else {
    analysis["summaries"] = nullptr;
  }
  analysis["equilibrium_target"] = m.equilibrium_target;
  analysis["equilibrium_distance"] =
      m.equilibrium_dist ? ordered_json(*m.equilibrium_dist) : ordered_json(nullptr);
  analysis["oracle_error"] = m.oracle_err ? ordered_json(*m.oracle_err) : ordered_json(nullptr);
  ordered_json drifts = ordered_json::object();
  for (const auto& [name, value] : m.invariant_drifts) drifts[name] = value;
  analysis["invariant_drifts"] = drifts;
  j["analysis"] = analysis;

  ordered_json artifacts = ordered_json::object();
  for (const auto& [name, path] : m.artifacts) artifacts[name] = path;
  j["artifacts"] = artifacts;
  j["warnings"] = m.warnings;
  j["duration_seconds"] = m.duration_seconds;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json_text(std::string_view text) {
  const ordered_json j = ordered_json::parse(text);
  RunManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  m.name = j.at("name").get<std::string>();
  m.config = config_from_json(j.at("config"));
  m.diverged = j.at("diverged").get<bool>();
  if (!j.at("failure_time").is_null()) m.failure_time = j.at("failure_time").get<double>();

  const auto& analysis = j.at("analysis");
  m.transient_cut = analysis.at("transient_cut").get<double>();
  if (!analysis.at("summaries").is_null()) {
    const auto& s = analysis.at("summaries");
    SummaryTriple triple;
    triple.theta = summary_from_json(s.at("theta"), StateComponent::Theta);
    triple.psi = summary_from_json(s.at("psi"), StateComponent::Psi);
    triple.alpha = summary_from_json(s.at("alpha"), StateComponent::Alpha);
    m.summaries = triple;
  }
  m.equilibrium_target = analysis.at("equilibrium_target").get<std::array<double, 3>>();
  if (!analysis.at("equilibrium_distance").is_null()) {
    m.equilibrium_dist = analysis.at("equilibrium_distance").get<double>();
  }
  if (!analysis.at("oracle_error").is_null()) {
    m.oracle_err = analysis.at("oracle_error").get<double>();
  }
  for (const auto& [key, value] : analysis.at("invariant_drifts").items()) {
    m.invariant_drifts.emplace_back(key, value.get<double>());
  }
  for (const auto& [key, value] : j.at("artifacts").items()) {
    m.artifacts.emplace_back(key, value.get<std::string>());
  }
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  m.duration_seconds = j.at("duration_seconds").get<double>();
  return m;
}

RunResult run_experiment(ExperimentConfig cfg, const RunOverrides& overrides) {
  if (overrides.step && cfg.integrator) cfg.integrator->step = *overrides.step;
  if (overrides.horizon && cfg.integrator) cfg.integrator->t_end = *overrides.horizon;
  cfg.output_dir = resolve_output_dir(cfg, overrides);

  RunManifest manifest;
  manifest.warnings = validate_config(cfg);
  manifest.name = cfg.name;
  manifest.config = cfg;

  const State init = initial_state(cfg);
  const auto t_start = std::chrono::steady_clock::now();

  Trajectory traj;
  try {
    traj = cfg.integrator ? simulate(cfg.criterion, cfg.mode, init, *cfg.integrator)
                          : sgd_simulate(cfg.criterion, cfg.mode, init, *cfg.sgd);
  } catch (const DivergenceError& e) {
    traj = e.partial();
    manifest.diverged = true;
    manifest.failure_time = e.failure_time();
  }

  manifest.transient_cut = cfg.transient_cut.value_or(default_transient_cut(cfg.mode));
  manifest.equilibrium_target = cfg.equilibrium_target.value_or(default_equilibrium_target(cfg.mode));

  try {
    SummaryTriple triple;
    triple.theta = steady_summary(traj, StateComponent::Theta, manifest.transient_cut);
    triple.psi = steady_summary(traj, StateComponent::Psi, manifest.transient_cut);
    triple.alpha = steady_summary(traj, StateComponent::Alpha, manifest.transient_cut);
    manifest.summaries = triple;
    const auto& target = manifest.equilibrium_target;
    const double dt = triple.theta.center - target[0];
    const double dp = triple.psi.center - target[1];
    const double da = triple.alpha.center - target[2];
    manifest.equilibrium_dist = std::sqrt(dt * dt + dp * dp + da * da);
  } catch (const InsufficientWindowError&) {
    // short or truncated run: centers are not meaningful, leave them out
  }

  if (!traj.samples.empty() && oracle_applies(cfg, init)) {
    manifest.oracle_err = oracle_error(traj, make_oracle(cfg, init));
  }
  collect_invariant_drifts(cfg, traj, manifest);

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + cfg.output_dir.string());

  if (cfg.outputs.trajectory_csv) {
    const auto path = cfg.output_dir / (cfg.name + ".csv");
    write_trajectory_csv(traj, path);
    manifest.artifacts.emplace_back("trajectory_csv", path.string());
  }
  if (cfg.outputs.plot_svg && !traj.samples.empty()) {
    const auto path = cfg.output_dir / (cfg.name + ".svg");
    write_text_file(render_trajectory_svg(traj, mode_alpha_r(cfg.mode)), path);
    manifest.artifacts.emplace_back("plot_svg", path.string());
  }

  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  if (cfg.outputs.manifest_json) {
    const auto path = cfg.output_dir / (cfg.name + ".manifest.json");
    manifest.artifacts.emplace_back("manifest_json", path.string());
    write_text_file(manifest_to_json_text(manifest), path);
  }
  return {std::move(manifest), std::move(traj)};
}

std::vector<std::string> scenario_names() { return {"fig1a", "fig1b", "fig1c", "fig1d"}; }

ExperimentConfig scenario_config(std::string_view name) {
  ExperimentConfig cfg;
  cfg.name = std::string(name);
  cfg.criterion = Criterion::linear();
  IntegratorConfig ic{StepMethod::RK4, 1e-3, 60.0, 10};

  if (name == "fig1a") {
    cfg.mode = AutonomousMode{3.0};
    cfg.init.theta = 1.0;
    cfg.init.psi = 2.0;
    ic.t_end = 50.0;
  } else if (name == "fig1b") {
    cfg.mode = AnnealedMode{1, {1.0, 3.0, 3.0}, CouplingSign::Descent};
    cfg.init.beta_preset = true;
    // the coupled system settles on the midpoint between start and target
    cfg.equilibrium_target = {{2.0, 0.0, 2.0}};
  } else if (name == "fig1c") {
    cfg.mode = AnnealedMode{0, {1.0, 3.0, 3.0}, CouplingSign::Descent};
    cfg.init.beta_preset = true;
  } else if (name == "fig1d") {
    cfg.mode = AnnealedMode{0, {1.0, 3.0, 30.0}, CouplingSign::Descent};
    cfg.init.beta_preset = true;
    ic.t_end = 400.0;
  } else {
    throw ValidationError("unknown scenario '" + std::string(name) +
                          "' (expected fig1a, fig1b, fig1c, or fig1d)");
  }
  cfg.integrator = ic;
  return cfg;
}

RunResult run_scenario(std::string_view name, const RunOverrides& overrides) {
  return run_experiment(scenario_config(name), overrides);
}

SweepTable sweep_time_constants(const ExperimentConfig& base, std::span<const double> time_constants) {
  const auto* annealed = as_annealed(base.mode);
  if (!annealed || annealed->lambda != 0 || base.criterion.kind != CriterionKind::Linear ||
      !base.integrator) {
    throw ValidationError("sweep base must be a linear, annealed, lambda = 0 integrator config");
  }

  SweepTable table;
  for (const double T : time_constants) {
    ExperimentConfig cfg = base;
    auto& mode = std::get<AnnealedMode>(cfg.mode);
    mode.schedule.time_constant = T;

    SweepRow row;
    row.time_constant = T;
    row.predicted_amplitude = oscillation_amplitude(mode.schedule);

    const double cut = std::max(10.0 * T, 20.0);
    cfg.integrator->t_end = cut + 32.0;  // a bit over two and a half periods past the cut
    cfg.transient_cut = cut;

    try {
      const Trajectory traj =
          simulate(cfg.criterion, cfg.mode, initial_state(cfg), *cfg.integrator);
      row.measured_amplitude = steady_summary(traj, StateComponent::Psi, cut).amplitude;
      const double denom = std::abs(row.predicted_amplitude);
      row.relative_error = denom > 0.0
                               ? std::abs(row.measured_amplitude - row.predicted_amplitude) / denom
                               : std::abs(row.measured_amplitude);
    } catch (const DivergenceError&) {
      row.diverged = true;
      row.measured_amplitude = std::numeric_limits<double>::quiet_NaN();
      row.relative_error = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string sweep_to_csv(const SweepTable& table) {
  std::string out = "T,measured_amplitude,predicted_amplitude,relative_error,diverged\n";
  for (const SweepRow& r : table.rows) {
    out += format_double(r.time_constant);
    out.push_back(',');
    out += r.diverged ? "nan" : format_double(r.measured_amplitude);
    out.push_back(',');
    out += format_double(r.predicted_amplitude);
    out.push_back(',');
    out += r.diverged ? "nan" : format_double(r.relative_error);
    out.push_back(',');
    out += r.diverged ? "true" : "false";
    out.push_back('\n');
  }
  return out;
}

}  // namespace tinygan
