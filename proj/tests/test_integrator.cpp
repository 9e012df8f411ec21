#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "tinygan/analytic.hpp"
#include "tinygan/integrator.hpp"

using namespace tinygan;

namespace {

const AnnealingSchedule kSch{1.0, 3.0, 3.0};
const SystemMode kAuto = AutonomousMode{3.0};
const SystemMode kBeta = AnnealedMode{0, kSch, CouplingSign::Descent};
const State kAutoInit{0.0, 1.0, 2.0, 3.0};

double beta_oracle_error(const Trajectory& traj) {
  double err = 0.0;
  for (const State& s : traj.samples) {
    err = std::max(err, std::abs(s.theta - beta_theta_solution(kSch, s.t)));
    err = std::max(err, std::abs(s.psi - beta_psi_solution(kSch, s.t)));
  }
  return err;
}

}  // namespace

TEST_CASE("rk4 conserves the autonomous radius") {
  const Trajectory traj =
      simulate(Criterion::linear(), kAuto, kAutoInit, {StepMethod::RK4, 1e-3, 50.0, 10});
  for (const State& s : traj.samples) {
    const double r2 = (s.theta - 3.0) * (s.theta - 3.0) + s.psi * s.psi;
    CHECK(std::abs(r2 - 8.0) <= 1e-6);
    CHECK(s.alpha == 3.0);  // frozen
  }
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.back().t == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("zero field gives a constant trajectory") {
  const AnnealingSchedule flat{2.0, 2.0, 3.0};
  const SystemMode mode = AnnealedMode{0, flat, CouplingSign::Descent};
  const Trajectory traj =
      simulate(Criterion::linear(), mode, beta_initial_state(flat), {StepMethod::RK4, 1e-2, 20.0, 5});
  for (const State& s : traj.samples) {
    CHECK(s.theta == 2.0);
    CHECK(s.psi == 0.0);
    CHECK(s.alpha == 2.0);
  }
}

TEST_CASE("autonomous run oscillates around the matched point") {
  const Trajectory traj =
      simulate(Criterion::linear(), kAuto, kAutoInit, {StepMethod::RK4, 1e-3, 50.0, 1});
  double theta_min = 1e300, theta_max = -1e300, psi_min = 1e300, psi_max = -1e300;
  for (const State& s : traj.samples) {
    theta_min = std::min(theta_min, s.theta);
    theta_max = std::max(theta_max, s.theta);
    psi_min = std::min(psi_min, s.psi);
    psi_max = std::max(psi_max, s.psi);
  }
  const double r = std::sqrt(8.0);
  CHECK(theta_min == doctest::Approx(3.0 - r).epsilon(1e-6));
  CHECK(theta_max == doctest::Approx(3.0 + r).epsilon(1e-6));
  CHECK(psi_min == doctest::Approx(-r).epsilon(1e-6));
  CHECK(psi_max == doctest::Approx(r).epsilon(1e-6));
}

TEST_CASE("rk4 matches the closed forms of the schedule-only system") {
  const Trajectory traj = simulate(Criterion::linear(), kBeta, beta_initial_state(kSch),
                                   {StepMethod::RK4, 1e-3, 60.0, 1});
  CHECK(beta_oracle_error(traj) <= 1e-5);
}

TEST_CASE("halving the step cuts the rk4 error about sixteenfold") {
  const Trajectory coarse = simulate(Criterion::linear(), kBeta, beta_initial_state(kSch),
                                     {StepMethod::RK4, 2e-3, 60.0, 1});
  const Trajectory fine = simulate(Criterion::linear(), kBeta, beta_initial_state(kSch),
                                   {StepMethod::RK4, 1e-3, 60.0, 1});
  const double ratio = beta_oracle_error(coarse) / beta_oracle_error(fine);
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("identical inputs give bit-identical trajectories") {
  const IntegratorConfig cfg{StepMethod::RK4, 1e-3, 30.0, 7};
  const Trajectory a = simulate(Criterion::logistic(), kBeta, beta_initial_state(kSch), cfg);
  const Trajectory b = simulate(Criterion::logistic(), kBeta, beta_initial_state(kSch), cfg);
  CHECK(a.samples == b.samples);

  // concurrent integrations see no shared state
  Trajectory c, d;
  std::thread t1([&] { c = simulate(Criterion::logistic(), kBeta, beta_initial_state(kSch), cfg); });
  std::thread t2([&] { d = simulate(Criterion::logistic(), kBeta, beta_initial_state(kSch), cfg); });
  t1.join();
  t2.join();
  CHECK(c.samples == a.samples);
  CHECK(d.samples == a.samples);
}

TEST_CASE("sampling keeps every k-th step plus the final one") {
  const Trajectory traj =
      simulate(Criterion::linear(), kAuto, kAutoInit, {StepMethod::Euler, 0.1, 1.0, 3});
  REQUIRE(traj.samples.size() == 5);  // k = 0, 3, 6, 9, 10
  CHECK(traj.samples[0].t == 0.0);
  CHECK(traj.samples[1].t == doctest::Approx(0.3));
  CHECK(traj.samples[4].t == doctest::Approx(1.0));
}

TEST_CASE("one hand-computed discrete step") {
  const Trajectory traj =
      sgd_simulate(Criterion::linear(), kAuto, kAutoInit, {0.01, 1, UpdateOrder::Simultaneous});
  REQUIRE(traj.samples.size() == 2);
  CHECK(traj.samples[1].theta == doctest::Approx(0.98).epsilon(1e-15));
  CHECK(traj.samples[1].psi == doctest::Approx(1.98).epsilon(1e-15));
  CHECK(traj.samples[1].t == 0.01);
}

TEST_CASE("discrete deviation from the flow halves with the learning rate") {
  const Trajectory reference =
      simulate(Criterion::linear(), kAuto, kAutoInit, {StepMethod::RK4, 1e-3, 10.0, 1});
  std::vector<double> deviations;
  for (const double eps : {0.02, 0.01, 0.005}) {
    const auto iterations = static_cast<std::int64_t>(std::llround(10.0 / eps));
    const Trajectory discrete =
        sgd_simulate(Criterion::linear(), kAuto, kAutoInit, {eps, iterations, UpdateOrder::Simultaneous});
    const auto stride = static_cast<std::size_t>(std::llround(eps / 1e-3));
    double dev = 0.0;
    for (std::size_t k = 0; k < discrete.samples.size(); ++k) {
      const State& a = discrete.samples[k];
      const State& b = reference.samples[k * stride];
      dev = std::max({dev, std::abs(a.theta - b.theta), std::abs(a.psi - b.psi)});
    }
    deviations.push_back(dev);
  }
  CHECK(deviations[0] / deviations[1] >= 1.6);
  CHECK(deviations[0] / deviations[1] <= 2.4);
  CHECK(deviations[1] / deviations[2] >= 1.6);
  CHECK(deviations[1] / deviations[2] <= 2.4);
}

TEST_CASE("alternating vs simultaneous updates") {
  const auto gap_after = [&](double eps, std::int64_t iterations) {
    const Trajectory alt =
        sgd_simulate(Criterion::linear(), kAuto, kAutoInit, {eps, iterations, UpdateOrder::Alternating});
    const Trajectory sim =
        sgd_simulate(Criterion::linear(), kAuto, kAutoInit, {eps, iterations, UpdateOrder::Simultaneous});
    double gap = 0.0;
    for (std::size_t k = 0; k < alt.samples.size(); ++k) {
      gap = std::max({gap, std::abs(alt.samples[k].theta - sim.samples[k].theta),
                      std::abs(alt.samples[k].psi - sim.samples[k].psi)});
    }
    return gap;
  };

  SUBCASE("the one-step gap is quadratic in the learning rate") {
    // single step from (1, 2): the orders differ by eps^2 * psi exactly
    for (const double eps : {0.02, 0.01, 0.005}) {
      CHECK(gap_after(eps, 1) == doctest::Approx(eps * eps * 2.0).epsilon(1e-10));
    }
    CHECK(gap_after(0.02, 1) / gap_after(0.01, 1) == doctest::Approx(4.0).epsilon(0.02));
  }

  SUBCASE("the accumulated gap over a fixed horizon shrinks linearly") {
    // the per-step O(eps^2) differences accumulate resonantly over t/eps steps
    const double g1 = gap_after(0.02, 500);
    const double g2 = gap_after(0.01, 1000);
    const double g3 = gap_after(0.005, 2000);
    CHECK(g1 / g2 >= 1.7);
    CHECK(g1 / g2 <= 2.4);
    CHECK(g2 / g3 >= 1.7);
    CHECK(g2 / g3 <= 2.4);
  }
}

TEST_CASE("one simultaneous step is an euler step of the coupled field") {
  const SystemMode mode = AnnealedMode{1, kSch, CouplingSign::Descent};
  const State init{0.0, 2.0, 0.5, 2.0};
  const double eps = 1e-4;
  const Trajectory traj = sgd_simulate(Criterion::logistic(), mode, init, {eps, 1, UpdateOrder::Simultaneous});
  const Slope3 d = nonautonomous_field(Criterion::logistic(), std::get<AnnealedMode>(mode), init);
  CHECK(traj.samples[1].theta == doctest::Approx(init.theta + eps * d.dtheta).epsilon(1e-12));
  CHECK(traj.samples[1].psi == doctest::Approx(init.psi + eps * d.dpsi).epsilon(1e-12));
  CHECK(traj.samples[1].alpha == doctest::Approx(init.alpha + eps * d.dalpha).epsilon(1e-12));
}

TEST_CASE("as-printed coupling grows without bound and trips the guard") {
  const SystemMode mode = AnnealedMode{1, kSch, CouplingSign::AsPrinted};
  bool thrown = false;
  try {
    simulate(Criterion::linear(), mode, beta_initial_state(kSch),
             {StepMethod::RK4, 0.5, 1.2e6, 100000});
  } catch (const DivergenceError& e) {
    thrown = true;
    // theta(t) ~ t^2, so 1e12 is crossed near t = 1e6
    CHECK(e.failure_time() >= 0.9e6);
    CHECK(e.failure_time() <= 1.1e6);
    CHECK(!e.partial().samples.empty());
    for (const State& s : e.partial().samples) CHECK(s.finite());
  }
  CHECK(thrown);
}

TEST_CASE("integration preconditions") {
  const VectorField field = make_field(Criterion::linear(), kAuto);
  CHECK_THROWS_AS(integrate(field, kAutoInit, {StepMethod::RK4, 0.0, 1.0, 1}), DomainError);
  CHECK_THROWS_AS(integrate(field, kAutoInit, {StepMethod::RK4, 2.0, 1.0, 1}), DomainError);
  CHECK_THROWS_AS(integrate(field, kAutoInit, {StepMethod::RK4, 0.1, 1.0, 0}), DomainError);
  CHECK_THROWS_AS(integrate(field, {1.0, 1.0, 2.0, 3.0}, {StepMethod::RK4, 0.1, 1.0, 1}), DomainError);
  CHECK_THROWS_AS(sgd_simulate(Criterion::linear(), kAuto, kAutoInit, {0.0, 1}), DomainError);
  CHECK_THROWS_AS(sgd_simulate(Criterion::linear(), kAuto, kAutoInit, {0.1, 0}), DomainError);
}

TEST_CASE("measured order of accuracy") {
  const VectorField field = make_field(Criterion::linear(), kAuto);

  SUBCASE("euler is first order") {
    const std::vector<double> steps = {0.004,   0.002,    0.001,     0.0005,
                                       0.00025, 0.000125, 0.0000625, 0.00003125};
    const ConvergenceReport r = convergence_order(field, kAutoInit, StepMethod::Euler, steps, 10.0);
    CHECK(!r.degenerate_exact);
    CHECK(r.order >= 0.8);
    CHECK(r.order <= 1.2);
  }

  SUBCASE("rk4 is fourth order") {
    const std::vector<double> steps = {0.1, 0.05, 0.025, 0.0125, 0.00625};
    const ConvergenceReport r = convergence_order(field, kAutoInit, StepMethod::RK4, steps, 10.0);
    CHECK(!r.degenerate_exact);
    CHECK(r.order >= 3.5);
    CHECK(r.order <= 4.5);
  }

  SUBCASE("a zero field is flagged degenerate-exact") {
    const VectorField zero = [](const State&) { return Slope3{0.0, 0.0, 0.0}; };
    const std::vector<double> steps = {0.1, 0.05, 0.025};
    const ConvergenceReport r = convergence_order(zero, kAutoInit, StepMethod::Euler, steps, 5.0);
    CHECK(r.degenerate_exact);
    for (const auto& [h, err] : r.errors) CHECK(err == 0.0);
  }

  SUBCASE("numerically unstable coarse runs are excluded") {
    // theta' = -50 theta: explicit euler diverges for h > 2/50
    const VectorField stiff = [](const State& s) { return Slope3{-50.0 * s.theta, 0.0, 0.0}; };
    const State init{0.0, 1.0, 0.0, 0.0};
    const std::vector<double> steps = {0.1, 0.05, 0.025, 0.0125, 0.00625};
    const ConvergenceReport r = convergence_order(stiff, init, StepMethod::Euler, steps, 10.0);
    CHECK(r.excluded_runs == 2);
    CHECK(std::isfinite(r.order));
  }

  SUBCASE("too few survivors is an error") {
    const VectorField stiff = [](const State& s) { return Slope3{-50.0 * s.theta, 0.0, 0.0}; };
    const State init{0.0, 1.0, 0.0, 0.0};
    const std::vector<double> steps = {0.4, 0.2, 0.1};
    CHECK_THROWS_AS(convergence_order(stiff, init, StepMethod::Euler, steps, 10.0),
                    InsufficientDataError);
  }

  SUBCASE("step lists must halve") {
    const std::vector<double> steps = {0.1, 0.05, 0.03};
    CHECK_THROWS_AS(convergence_order(field, kAutoInit, StepMethod::Euler, steps, 1.0), DomainError);
    const std::vector<double> two = {0.1, 0.05};
    CHECK_THROWS_AS(convergence_order(field, kAutoInit, StepMethod::Euler, two, 1.0), DomainError);
  }
}
