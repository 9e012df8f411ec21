// tinygan - simulate minimal adversarial training flows, with and without an
// annealed data distribution, and check them against their closed forms.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tinygan/analytic.hpp"
#include "tinygan/csv.hpp"
#include "tinygan/experiment.hpp"

namespace {

using namespace tinygan;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDiverged = 2;

void print_summary_line(const char* label, const OscillationSummary& s) {
  std::printf("  %-5s center=%- .6g amplitude=%.6g", label, s.center, s.amplitude);
  if (s.period_defined) std::printf(" period=%.6g", s.period);
  std::printf("\n");
}

int report_run(const RunResult& result) {
  const RunManifest& m = result.manifest;
  std::printf("run '%s': %zu samples", m.name.c_str(), result.trajectory.samples.size());
  if (m.diverged) {
    std::printf("  [DIVERGED at t=%.6g]", m.failure_time.value_or(0.0));
  }
  std::printf("\n");
  for (const std::string& w : m.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (m.summaries) {
    print_summary_line("theta", m.summaries->theta);
    print_summary_line("psi", m.summaries->psi);
    print_summary_line("alpha", m.summaries->alpha);
  }
  if (m.equilibrium_dist) {
    std::printf("  distance to (%.6g, %.6g, %.6g): %.6g\n", m.equilibrium_target[0],
                m.equilibrium_target[1], m.equilibrium_target[2], *m.equilibrium_dist);
  }
  if (m.oracle_err) std::printf("  closed-form max error: %.3e\n", *m.oracle_err);
  for (const auto& [name, value] : m.invariant_drifts) {
    std::printf("  drift %s: %.3e\n", name.c_str(), value);
  }
  for (const auto& [kind, path] : m.artifacts) {
    std::printf("  wrote %s: %s\n", kind.c_str(), path.c_str());
  }
  std::printf("  duration: %.3f s\n", m.duration_seconds);
  return m.diverged ? kExitDiverged : kExitOk;
}

std::vector<double> parse_value_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    if (!item.empty()) values.push_back(parse_double(item));
    pos = comma + 1;
  }
  if (values.empty()) throw ValidationError(std::string("empty ") + what + " list");
  return values;
}

int cmd_oracle_check(double T, double step, double horizon) {
  const AnnealingSchedule sch{1.0, 3.0, T};
  const AnnealedMode mode{0, sch, CouplingSign::Descent};
  const Trajectory traj =
      simulate(Criterion::linear(), mode, beta_initial_state(sch), {StepMethod::RK4, step, horizon, 1});

  double err_theta = 0.0, err_psi = 0.0;
  for (const State& s : traj.samples) {
    err_theta = std::max(err_theta, std::abs(s.theta - beta_theta_solution(sch, s.t)));
    err_psi = std::max(err_psi, std::abs(s.psi - beta_psi_solution(sch, s.t)));
  }

  // closed forms must satisfy theta' = -psi, psi' = theta - alpha pointwise
  const double fd = 1e-5;
  double residual = 0.0;
  for (double t = fd; t <= horizon - fd; t += horizon / 64.0) {
    const double dtheta = (beta_theta_solution(sch, t + fd) - beta_theta_solution(sch, t - fd)) / (2 * fd);
    const double dpsi = (beta_psi_solution(sch, t + fd) - beta_psi_solution(sch, t - fd)) / (2 * fd);
    residual = std::max(residual, std::abs(dtheta + beta_psi_solution(sch, t)));
    residual = std::max(residual,
                        std::abs(dpsi - (beta_theta_solution(sch, t) - schedule_value(sch, t))));
  }

  const bool integrator_ok = err_theta <= 1e-5 && err_psi <= 1e-5;
  const bool residual_ok = residual <= 1e-8;
  std::printf("oracle check: T=%g step=%g horizon=%g\n", T, step, horizon);
  std::printf("  max |theta - closed form| = %.3e\n", err_theta);
  std::printf("  max |psi   - closed form| = %.3e\n", err_psi);
  std::printf("  closed-form flow residual = %.3e\n", residual);
  std::printf("  integrator vs closed form: %s (tolerance 1e-5)\n", integrator_ok ? "PASS" : "FAIL");
  std::printf("  closed form satisfies the flow: %s (tolerance 1e-8)\n", residual_ok ? "PASS" : "FAIL");
  return integrator_ok && residual_ok ? kExitOk : kExitValidation;
}

int cmd_sgd_compare(const std::vector<double>& eps_values, double horizon) {
  const AutonomousMode mode{3.0};
  const State init{0.0, 1.0, 2.0, 3.0};
  const Criterion linear = Criterion::linear();

  const Trajectory reference = simulate(linear, mode, init, {StepMethod::RK4, 1e-3, horizon, 1});
  std::printf("discrete updates vs continuous flow over [0, %g]:\n", horizon);
  double previous = 0.0;
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    const double eps = eps_values[i];
    const auto iterations = static_cast<std::int64_t>(std::llround(horizon / eps));
    const Trajectory discrete =
        sgd_simulate(linear, mode, init, {eps, iterations, UpdateOrder::Simultaneous});
    const auto stride = static_cast<std::size_t>(std::llround(eps / 1e-3));
    double deviation = 0.0;
    for (std::size_t k = 0; k < discrete.samples.size(); ++k) {
      const std::size_t j = k * stride;
      if (j >= reference.samples.size()) break;
      deviation = std::max({deviation,
                            std::abs(discrete.samples[k].theta - reference.samples[j].theta),
                            std::abs(discrete.samples[k].psi - reference.samples[j].psi)});
    }
    std::printf("  eps=%-8g max deviation=%.6f", eps, deviation);
    if (i > 0) std::printf("  (ratio vs previous: %.3f)", previous / deviation);
    std::printf("\n");
    previous = deviation;
  }

  const VectorField field = make_field(linear, mode);
  const std::vector<double> euler_steps = {0.004,   0.002,   0.001,    0.0005,
                                           0.00025, 0.000125, 0.0000625, 0.00003125};
  const std::vector<double> rk4_steps = {0.1, 0.05, 0.025, 0.0125, 0.00625};
  const ConvergenceReport euler = convergence_order(field, init, StepMethod::Euler, euler_steps, horizon);
  const ConvergenceReport rk4 = convergence_order(field, init, StepMethod::RK4, rk4_steps, horizon);
  std::printf("measured order: euler=%.3f rk4=%.3f\n", euler.order, rk4.order);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal adversarial-flow simulator with annealing and closed-form checks"};
  app.require_subcommand(1);

  std::string out_dir, config_path, scenario_name;
  double step_override = 0.0, horizon_override = 0.0;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory (beats TINYGAN_OUT and the config)");
    cmd->add_option("--step", step_override, "integrator step override");
    cmd->add_option("--horizon", horizon_override, "integration horizon override");
  };

  CLI::App* scenario = app.add_subcommand("scenario", "run a built-in scenario");
  scenario->add_option("name", scenario_name, "one of fig1a, fig1b, fig1c, fig1d")->required();
  add_run_flags(scenario);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run an experiment config file");
  simulate_cmd->add_option("--config", config_path, "path to the experiment config")->required();
  add_run_flags(simulate_cmd);

  std::string t_list = "2,3,5,10,30,100";
  CLI::App* sweep = app.add_subcommand("sweep", "amplitude vs annealing time constant");
  sweep->add_option("--T-values", t_list, "comma-separated annealing time constants");
  add_run_flags(sweep);

  double oc_T = 3.0, oc_step = 1e-3, oc_horizon = 60.0;
  CLI::App* oracle = app.add_subcommand("oracle-check", "integrator vs closed-form report");
  oracle->add_option("--T", oc_T, "annealing time constant");
  oracle->add_option("--step", oc_step, "integrator step");
  oracle->add_option("--horizon", oc_horizon, "integration horizon");

  std::string eps_list = "0.02,0.01,0.005";
  double sc_horizon = 10.0;
  CLI::App* sgd_cmp = app.add_subcommand("sgd-compare", "discrete-vs-continuous convergence report");
  sgd_cmp->add_option("--eps-values", eps_list, "comma-separated learning rates");
  sgd_cmp->add_option("--horizon", sc_horizon, "comparison horizon");

  CLI11_PARSE(app, argc, argv);

  RunOverrides overrides;
  if (!out_dir.empty()) overrides.output_dir = out_dir;
  if (step_override > 0.0) overrides.step = step_override;
  if (horizon_override > 0.0) overrides.horizon = horizon_override;

  try {
    if (scenario->parsed()) {
      return report_run(run_scenario(scenario_name, overrides));
    }
    if (simulate_cmd->parsed()) {
      return report_run(run_experiment(load_experiment_config(config_path), overrides));
    }
    if (sweep->parsed()) {
      ExperimentConfig base = scenario_config("fig1c");
      if (step_override > 0.0) base.integrator->step = step_override;
      const std::vector<double> ts = parse_value_list(t_list, "T");
      const SweepTable table = sweep_time_constants(base, ts);

      std::printf("%-8s %-14s %-14s %-12s\n", "T", "measured", "predicted", "rel. error");
      for (const SweepRow& r : table.rows) {
        if (r.diverged) {
          std::printf("%-8g %-14s %-14.8f %-12s\n", r.time_constant, "diverged",
                      r.predicted_amplitude, "-");
        } else {
          std::printf("%-8g %-14.8f %-14.8f %-12.3e\n", r.time_constant, r.measured_amplitude,
                      r.predicted_amplitude, r.relative_error);
        }
      }

      std::filesystem::path dir =
          out_dir.empty() ? std::filesystem::path("out/sweep") : std::filesystem::path(out_dir);
      if (const char* env = std::getenv(kOutputDirEnvVar); out_dir.empty() && env && *env) dir = env;
      std::filesystem::create_directories(dir);
      write_text_file(sweep_to_csv(table), dir / "sweep.csv");
      write_text_file(render_sweep_svg(table), dir / "sweep.svg");
      std::printf("wrote %s and %s\n", (dir / "sweep.csv").c_str(), (dir / "sweep.svg").c_str());

      bool any_diverged = false;
      for (const SweepRow& r : table.rows) any_diverged |= r.diverged;
      return any_diverged ? kExitDiverged : kExitOk;
    }
    if (oracle->parsed()) {
      return cmd_oracle_check(oc_T, oc_step, oc_horizon);
    }
    if (sgd_cmp->parsed()) {
      return cmd_sgd_compare(parse_value_list(eps_list, "eps"), sc_horizon);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
