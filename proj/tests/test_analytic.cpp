#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tinygan/analytic.hpp"
#include "tinygan/errors.hpp"
#include "tinygan/integrator.hpp"

using namespace tinygan;

namespace {

constexpr double kPi = std::numbers::pi;
const AnnealingSchedule kSch{1.0, 3.0, 3.0};

AnnealingSchedule random_schedule(std::mt19937& rng) {
  std::uniform_real_distribution<double> ab(-4.0, 4.0);
  std::uniform_real_distribution<double> tc(0.3, 40.0);
  return {ab(rng), ab(rng), tc(rng)};
}

}  // namespace

TEST_CASE("autonomous closed form") {
  SUBCASE("initial condition") {
    const auto [theta, psi] = autonomous_solution(1.0, 2.0, 3.0, 0.0);
    CHECK(theta == 1.0);
    CHECK(psi == 2.0);
  }
  SUBCASE("quarter period") {
    const auto [theta, psi] = autonomous_solution(1.0, 2.0, 3.0, kPi / 2.0);
    CHECK(theta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi == doctest::Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("equilibrium stays put") {
    for (double t : {0.0, 0.7, 12.0}) {
      const auto [theta, psi] = autonomous_solution(3.0, 0.0, 3.0, t);
      CHECK(theta == 3.0);
      CHECK(psi == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  SUBCASE("radius is set by the start point") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int i = 0; i < 50; ++i) {
      const double theta0 = dist(rng), psi0 = dist(rng), alpha_r = dist(rng);
      const double r2 = (theta0 - alpha_r) * (theta0 - alpha_r) + psi0 * psi0;
      for (double t : {0.3, 2.0, 9.5}) {
        const auto [theta, psi] = autonomous_solution(theta0, psi0, alpha_r, t);
        CHECK((theta - alpha_r) * (theta - alpha_r) + psi * psi == doctest::Approx(r2).epsilon(1e-12));
      }
    }
  }
  SUBCASE("agrees with rk4") {
    const Trajectory traj = simulate(Criterion::linear(), AutonomousMode{3.0}, {0.0, 1.0, 2.0, 3.0},
                                     {StepMethod::RK4, 1e-3, 10.0, 1});
    double err = 0.0;
    for (const State& s : traj.samples) {
      const auto [theta, psi] = autonomous_solution(1.0, 2.0, 3.0, s.t);
      err = std::max({err, std::abs(s.theta - theta), std::abs(s.psi - psi)});
    }
    CHECK(err <= 1e-9);
  }
}

TEST_CASE("partial-fraction coefficients") {
  const LaplaceCoefficients lc = laplace_coefficients(kSch);
  CHECK(lc.a == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(lc.K == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(lc.A == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(lc.B == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(lc.C == doctest::Approx(-0.6).epsilon(1e-14));

  SUBCASE("start conditions hold for any schedule") {
    std::mt19937 rng(23);
    for (int i = 0; i < 100; ++i) {
      const LaplaceCoefficients r = laplace_coefficients(random_schedule(rng));
      CHECK(r.A + r.C == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(r.B - r.a * r.C == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
  SUBCASE("no forcing, no oscillation") {
    const LaplaceCoefficients r = laplace_coefficients({2.0, 2.0, 7.0});
    CHECK(r.A == 0.0);
    CHECK(r.B == 0.0);
    CHECK(r.C == 0.0);
    CHECK(r.K == 0.0);
  }
  SUBCASE("T must be positive") {
    CHECK_THROWS_AS(laplace_coefficients({1.0, 3.0, 0.0}), DomainError);
    CHECK_THROWS_AS(laplace_coefficients({1.0, 3.0, -1.0}), DomainError);
  }
}

TEST_CASE("the coefficients satisfy psi''(0) = -K on a simulated run") {
  const Trajectory traj = simulate(Criterion::linear(), AnnealedMode{0, kSch, CouplingSign::Descent},
                                   beta_initial_state(kSch), {StepMethod::RK4, 1e-3, 1.0, 1});
  const auto& s = traj.samples;
  const double h = 1e-3;
  const auto second = [&](std::size_t i) {
    return (s[i - 1].psi - 2.0 * s[i].psi + s[i + 1].psi) / (h * h);
  };
  const double at_zero = 2.0 * second(1) - second(2);  // extrapolate the O(h) bias away
  CHECK(std::abs(at_zero - (-laplace_coefficients(kSch).K)) <= 1e-4);
}

TEST_CASE("discriminator closed form") {
  SUBCASE("starts at zero") {
    std::mt19937 rng(29);
    for (int i = 0; i < 100; ++i) {
      CHECK(std::abs(beta_psi_solution(random_schedule(rng), 0.0)) <= 1e-15);
    }
  }
  SUBCASE("value at pi") {
    CHECK(beta_psi_solution(kSch, kPi) == doctest::Approx(-0.8105518843070466).epsilon(1e-12));
  }
  SUBCASE("steady state is the pure sinusoid") {
    const OscillationPrediction p = oscillation_prediction(kSch);
    for (double t = 200.0; t < 200.0 + 4.0 * kPi; t += 0.1) {
      CHECK(std::abs(beta_psi_solution(kSch, t) - p.amplitude * std::sin(t + p.phase)) <= 1e-12);
    }
  }
  SUBCASE("negative time is rejected") {
    CHECK_THROWS_AS(beta_psi_solution(kSch, -0.5), DomainError);
    CHECK_THROWS_AS(beta_theta_solution(kSch, -0.5), DomainError);
  }
}

TEST_CASE("generator closed form") {
  SUBCASE("starts at alpha0") {
    std::mt19937 rng(31);
    for (int i = 0; i < 100; ++i) {
      const AnnealingSchedule sch = random_schedule(rng);
      CHECK(beta_theta_solution(sch, 0.0) == doctest::Approx(sch.alpha0).epsilon(1e-12));
    }
  }
  SUBCASE("steady period-mean is alpha_r") {
    for (const double T : {3.0, 10.0, 30.0}) {
      const AnnealingSchedule sch{1.0, 3.0, T};
      const double t0 = 10.0 * T;
      const int n = 20000;
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += beta_theta_solution(sch, t0 + (i + 0.5) * (2.0 * kPi / n));
      }
      CHECK(std::abs(sum / n - 3.0) <= 1e-3);
    }
  }
  SUBCASE("simulated period-mean agrees") {
    const Trajectory traj = simulate(Criterion::linear(), AnnealedMode{0, kSch, CouplingSign::Descent},
                                     beta_initial_state(kSch), {StepMethod::RK4, 1e-3, 40.0, 1});
    double sum = 0.0;
    int count = 0;
    for (const State& s : traj.samples) {
      if (s.t > 30.0 && s.t <= 30.0 + 2.0 * kPi) {
        sum += s.theta;
        ++count;
      }
    }
    CHECK(std::abs(sum / count - 3.0) <= 1e-3);
  }
  SUBCASE("slow annealing pins the center at alpha_r with vanishing swing") {
    const AnnealingSchedule slow{1.0, 3.0, 1e6};
    CHECK(oscillation_amplitude(slow) <= 2.1e-6);
    const LaplaceCoefficients lc = laplace_coefficients(slow);
    // steady part of theta(t): alpha_r - A sin t + B cos t once e^(-at) is gone
    const double steady_center = 3.0;
    for (double t : {0.0, 1.0, 2.5}) {
      const double steady = steady_center - lc.A * std::sin(t) + lc.B * std::cos(t);
      CHECK(std::abs(steady - 3.0) <= 3e-6);
    }
  }
}

TEST_CASE("oscillation amplitude") {
  CHECK(oscillation_amplitude(kSch) == doctest::Approx(0.6324555320336759).epsilon(1e-14));
  CHECK(oscillation_amplitude({1.0, 3.0, 30.0}) == doctest::Approx(0.06662966046527696).epsilon(1e-14));
  CHECK(oscillation_amplitude({2.0, 2.0, 5.0}) == 0.0);

  SUBCASE("equals sqrt(A^2 + B^2)") {
    std::mt19937 rng(37);
    for (int i = 0; i < 100; ++i) {
      const AnnealingSchedule sch = random_schedule(rng);
      const LaplaceCoefficients lc = laplace_coefficients(sch);
      CHECK(oscillation_amplitude(sch) ==
            doctest::Approx(std::sqrt(lc.A * lc.A + lc.B * lc.B)).epsilon(1e-12));
    }
  }
  SUBCASE("strictly decreasing in T") {
    double prev = 1e300;
    for (const double T : {1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
      const double amp = oscillation_amplitude({1.0, 3.0, T});
      CHECK(amp < prev);
      prev = amp;
    }
  }
}

TEST_CASE("oscillation phase") {
  SUBCASE("defining identity") {
    std::mt19937 rng(41);
    for (int i = 0; i < 100; ++i) {
      AnnealingSchedule sch = random_schedule(rng);
      if (sch.alpha0 == sch.alpha_r) sch.alpha_r += 1.0;
      const LaplaceCoefficients lc = laplace_coefficients(sch);
      const double amp = oscillation_amplitude(sch);
      const double phi = oscillation_phase(sch);
      CHECK(phi > -kPi);
      CHECK(phi <= kPi);
      for (double t = 0.0; t < 2.0 * kPi; t += 0.2) {
        CHECK(std::abs(amp * std::sin(t + phi) - (lc.A * std::cos(t) + lc.B * std::sin(t))) <= 1e-12);
      }
    }
  }
  SUBCASE("slow-annealing limit is a pure cosine") {
    CHECK(oscillation_phase({1.0, 3.0, 1e6}) == doctest::Approx(kPi / 2.0).epsilon(1e-5));
  }
  SUBCASE("phase of the reference schedule") {
    // sin phi = A/amp, cos phi = B/amp
    const double phi = oscillation_phase(kSch);
    CHECK(std::sin(phi) == doctest::Approx(0.6 / 0.6324555320336759).epsilon(1e-12));
    CHECK(std::cos(phi) == doctest::Approx(-0.2 / 0.6324555320336759).epsilon(1e-12));
  }
  SUBCASE("undefined without forcing") {
    CHECK_THROWS_AS(oscillation_phase({2.0, 2.0, 3.0}), UndefinedPhaseError);
  }
}

TEST_CASE("closed forms satisfy the flow and match rk4") {
  SUBCASE("rk4 agreement within 1e-5") {
    const Trajectory traj = simulate(Criterion::linear(), AnnealedMode{0, kSch, CouplingSign::Descent},
                                     beta_initial_state(kSch), {StepMethod::RK4, 1e-3, 60.0, 1});
    double err = 0.0;
    for (const State& s : traj.samples) {
      err = std::max(err, std::abs(s.psi - beta_psi_solution(kSch, s.t)));
      err = std::max(err, std::abs(s.theta - beta_theta_solution(kSch, s.t)));
    }
    CHECK(err <= 1e-5);
  }
  SUBCASE("pointwise flow residual within 1e-8") {
    const double h = 1e-5;
    double residual = 0.0;
    for (double t = 1.0; t <= 59.0; t += 0.9) {
      const double dtheta =
          (beta_theta_solution(kSch, t + h) - beta_theta_solution(kSch, t - h)) / (2.0 * h);
      const double dpsi =
          (beta_psi_solution(kSch, t + h) - beta_psi_solution(kSch, t - h)) / (2.0 * h);
      residual = std::max(residual, std::abs(dtheta + beta_psi_solution(kSch, t)));
      residual = std::max(residual,
                          std::abs(dpsi - (beta_theta_solution(kSch, t) - schedule_value(kSch, t))));
    }
    CHECK(residual <= 1e-8);
  }
}
