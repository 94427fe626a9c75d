#include <doctest.h>

#include <cmath>
#include <numbers>

#include "csrk/errors.hpp"
#include "csrk/integrate.hpp"
#include "csrk/verify.hpp"

using csrk::OdeProblem;
using csrk::Vector;

namespace {

csrk::ButcherTableau midpoint() { return csrk::discretize(csrk::construct_symplectic({}), csrk::gauss_legendre(1)); }
csrk::ButcherTableau gauss2() { return csrk::discretize(csrk::construct_symplectic({}), csrk::gauss_legendre(2)); }

OdeProblem decay() {
  OdeProblem p;
  p.name = "decay";
  p.dimension = 1;
  p.rhs = [](double, const Vector& z) { return Vector(-z); };
  p.z0 = Vector::Constant(1, 1.0);
  p.lipschitz = 1.0;
  p.exact = [](double t) { return Vector::Constant(1, std::exp(-t)); };
  return p;
}

OdeProblem stiff(double lambda) {
  OdeProblem p = decay();
  p.rhs = [lambda](double, const Vector& z) { return Vector(-lambda * z); };
  p.lipschitz = lambda;
  return p;
}

csrk::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const csrk::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return csrk::ErrorKind::IoError;
}

}  // namespace

TEST_CASE("rk_step examples") {
  const OdeProblem p = decay();
  const csrk::StepResult r = csrk::rk_step(midpoint(), p, 0.0, p.z0, 0.1);
  CHECK(std::abs(r.z[0] - 0.95 / 1.05) <= 1e-12);
  CHECK(r.iterations > 0);

  OdeProblem zero = p;
  zero.rhs = [](double, const Vector& z) { return Vector(Vector::Zero(z.size())); };
  const csrk::StepResult z = csrk::rk_step(gauss2(), zero, 0.0, p.z0, 0.3);
  CHECK(z.z[0] == 1.0);

  CHECK(csrk::rk_step(gauss2(), p, 0.0, p.z0, 0.0).z[0] == 1.0);

  // Gauss-2 stability function at z = -h
  const double h = 0.4, x = -h;
  const double r22 = (1 + x / 2 + x * x / 12) / (1 - x / 2 + x * x / 12);
  CHECK(std::abs(csrk::rk_step(gauss2(), p, 0.0, p.z0, h).z[0] - r22) <= 1e-14);
}

TEST_CASE("fixed point fails where Newton succeeds") {
  const OdeProblem p = stiff(10.0);
  CHECK(kind_of([&] { csrk::rk_step(gauss2(), p, 0.0, p.z0, 1.0); }) == csrk::ErrorKind::NonConvergence);
  csrk::StepperConfig cfg;
  cfg.solver = csrk::SolverKind::Newton;
  const csrk::StepResult r = csrk::rk_step(gauss2(), p, 0.0, p.z0, 1.0, cfg);
  const double x = -10.0;
  CHECK(std::abs(r.z[0] - (1 + x / 2 + x * x / 12) / (1 - x / 2 + x * x / 12)) <= 1e-13);
  CHECK(csrk::tableau_step_bound(gauss2(), 10.0) == doctest::Approx(1.0 / (10.0 * (0.5 + std::sqrt(3.0) / 6.0))));
  try {
    csrk::rk_step(gauss2(), p, 0.0, p.z0, 1.0);
  } catch (const csrk::Error& e) {
    CHECK(std::string(e.what()).find("contracts") != std::string::npos);
  }
}

TEST_CASE("midpoint conserves the harmonic quadratic invariant") {
  const OdeProblem p = csrk::builtin_problem("harmonic");
  const csrk::Trajectory t = csrk::integrate(midpoint(), p, 0.1, 1000);
  CHECK(t.steps() == 1000);
  CHECK(t.step() == doctest::Approx(0.1));
  for (const Vector& z : t.states) CHECK(std::abs(z.norm() - 1.0) < 1e-13);
  CHECK(csrk::energy_drift(t, p) < 1e-13);
}

TEST_CASE("builtin problems") {
  const OdeProblem h = csrk::builtin_problem("harmonic");
  CHECK(h.dimension == 2);
  CHECK(h.hamiltonian(h.z0) == doctest::Approx(0.5));
  CHECK((h.exact(std::numbers::pi / 2) - Vector{{0.0, -1.0}}).norm() < 1e-15);

  const OdeProblem pend = csrk::builtin_problem("pendulum");
  CHECK(pend.hamiltonian(pend.z0) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK_FALSE(pend.exact);

  csrk::ProblemParams circ;
  circ.eccentricity = 0.0;
  const OdeProblem k0 = csrk::builtin_problem("kepler", circ);
  CHECK(k0.dimension == 4);
  CHECK((k0.exact(2 * std::numbers::pi) - k0.z0).norm() < 1e-12);
  CHECK(k0.hamiltonian(k0.z0) == doctest::Approx(-0.5));

  const OdeProblem k = csrk::builtin_problem("kepler");
  CHECK(k.hamiltonian(k.z0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(*k.lipschitz == doctest::Approx(2.0 / std::pow(0.4, 3)));
  REQUIRE(k.invariants.size() == 2);
  CHECK(k.invariants[1].name == "angular_momentum");

  csrk::ProblemParams bad;
  bad.eccentricity = 1.0;
  CHECK(kind_of([&] { csrk::builtin_problem("kepler", bad); }) == csrk::ErrorKind::InvalidArgument);
  CHECK_THROWS_AS(csrk::builtin_problem("brusselator"), csrk::Error);

  for (const char* name : {"harmonic", "pendulum", "kepler"})
    CHECK(csrk::hamiltonian_consistency(csrk::builtin_problem(name)) < 1e-7);
}

TEST_CASE("kepler exact solution satisfies the ODE") {
  const OdeProblem k = csrk::builtin_problem("kepler");
  const double d = 1e-5;
  for (double t : {0.3, 1.7, 4.0}) {
    const Vector deriv = (k.exact(t + d) - k.exact(t - d)) / (2 * d);
    CHECK((deriv - k.rhs(t, k.exact(t))).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(k.hamiltonian(k.exact(t)) == doctest::Approx(-0.5).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-2 on Kepler keeps energy bounded") {
  const OdeProblem k = csrk::builtin_problem("kepler");
  const csrk::Trajectory t = csrk::integrate(gauss2(), k, 0.01, 1000);
  CHECK(csrk::energy_drift(t, k) < 1e-7);
  CHECK(csrk::invariant_drift(t, k, "angular_momentum") < 1e-12);
  CHECK(csrk::invariant_drift(t, k, "energy") == csrk::energy_drift(t, k));
  CHECK_THROWS_AS(csrk::invariant_drift(t, k, "nope"), csrk::Error);
}

TEST_CASE("empirical orders") {
  const OdeProblem h = csrk::builtin_problem("harmonic");
  const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  const csrk::OrderEstimate g = csrk::empirical_order(gauss2(), h, hs, 10.0);
  REQUIRE(g.slope);
  CHECK(std::abs(*g.slope - 4.0) < 0.1);
  CHECK(g.pairwise.size() == 3);
  const csrk::OrderEstimate m = csrk::empirical_order(midpoint(), h, hs, 10.0);
  CHECK(std::abs(*m.slope - 2.0) < 0.1);
  const csrk::OrderEstimate e = csrk::empirical_order(csrk::explicit_euler(), h, {0.02, 0.01, 0.005, 0.0025}, 10.0);
  CHECK(std::abs(*e.slope - 1.0) < 0.15);
  CHECK_THROWS_AS(csrk::empirical_order(gauss2(), h, {0.2, 0.1}, 10.0), csrk::Error);
  CHECK_THROWS_AS(csrk::empirical_order(gauss2(), h, {0.1, 0.2, 0.05}, 10.0), csrk::Error);
  CHECK_THROWS_AS(csrk::empirical_order(gauss2(), h, {0.3, 0.15, 0.075}, 10.0), csrk::Error);

  // no exact solution: reference run at h_min / 8
  const csrk::OrderEstimate p = csrk::empirical_order(gauss2(), csrk::builtin_problem("pendulum"), hs, 10.0);
  CHECK(std::abs(*p.slope - 4.0) < 0.2);
}

TEST_CASE("Euler drifts and is neither symmetric nor symplectic") {
  const OdeProblem h = csrk::builtin_problem("harmonic");
  const csrk::Trajectory t = csrk::integrate(csrk::explicit_euler(), h, 0.1, 100);
  CHECK(csrk::energy_drift(t, h) > 1e-3);
  CHECK(csrk::symmetry_residual(csrk::explicit_euler(), h, h.z0, 0.1) > 1e-4);
  CHECK(csrk::symplecticity_residual(csrk::explicit_euler(), h, h.z0, 0.1) > 1e-3);
}

TEST_CASE("symmetry and symplecticity residuals of Gauss methods") {
  for (const char* name : {"harmonic", "pendulum", "kepler"}) {
    const OdeProblem p = csrk::builtin_problem(name);
    CHECK(csrk::symmetry_residual(gauss2(), p, p.z0, 0.1) < 1e-12);
    CHECK(csrk::symplecticity_residual(gauss2(), p, p.z0, 0.1) < 1e-8);
  }
  const OdeProblem h = csrk::builtin_problem("harmonic");
  CHECK(csrk::symplecticity_residual(gauss2(), h, h.z0, 0.0) == 0.0);
}

TEST_CASE("integrate validates input") {
  const OdeProblem h = csrk::builtin_problem("harmonic");
  CHECK_THROWS_AS(csrk::integrate(gauss2(), h, 0.1, 0), csrk::Error);
  const csrk::Trajectory t = csrk::integrate(gauss2(), h, 0.1, 1);
  CHECK(t.states.size() == 2);
  CHECK(t.iterations.size() == 1);
}
