#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csrk/discretize.hpp"

namespace csrk {

using Vector = Eigen::VectorXd;

/// z' = f(t, z). Hamiltonian problems order the state as z = (q, p) with
/// q' = dH/dp, p' = -dH/dq.
struct OdeProblem {
  std::string name;
  int dimension = 0;
  std::function<Vector(double, const Vector&)> rhs;
  std::function<double(const Vector&)> hamiltonian;  // empty when absent
  struct Invariant {
    std::string name;
    std::function<double(const Vector&)> value;
  };
  std::vector<Invariant> invariants;
  Vector z0;
  double t0 = 0.0;
  std::optional<double> lipschitz;
  std::function<Vector(double)> exact;  // empty when unknown
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<int> iterations;

  double step() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  int steps() const { return static_cast<int>(times.size()) - 1; }
};

enum class SolverKind { FixedPoint, Newton };

struct StepperConfig {
  double tolerance = 1e-14;
  int max_iterations = 100;
  SolverKind solver = SolverKind::FixedPoint;
};

struct StepResult {
  Vector z;
  int iterations = 0;
};

/// One step of the implicit RK method. The stage iteration stops when the
/// max-norm of successive stage differences drops below tolerance * max(1, |U|).
/// Negative h steps backward; h == 0 returns zn. With a known Lipschitz constant the
/// Newton solver approaches h through up to 64 intermediate steps h k / K.
StepResult rk_step(const ButcherTableau& t, const OdeProblem& p, double tn, const Vector& zn, double h,
                   const StepperConfig& cfg = {});

/// 1 / (L max_i sum_j |a_ij|): step size below which fixed-point iteration contracts.
double tableau_step_bound(const ButcherTableau& t, double lipschitz);

Trajectory integrate(const ButcherTableau& t, const OdeProblem& p, double h, int n_steps, const StepperConfig& cfg = {});

struct OrderEstimate {
  std::vector<double> h;
  std::vector<double> errors;
  /// log(e_k / e_{k+1}) / log(h_k / h_{k+1}); log2 error ratios for halved steps.
  std::vector<double> pairwise;
  std::optional<double> slope;
  bool saturated = false;
};

/// Least-squares slope of log(error at t_final) against log(h). The reference
/// is `reference`, else the problem's exact solution, else a run at h_min / 8.
OrderEstimate empirical_order(const ButcherTableau& t, const OdeProblem& p, const std::vector<double>& h_list,
                              double t_final, const StepperConfig& cfg = {},
                              const std::function<Vector(double)>& reference = {});

/// max_n |H(z_n) - H(z_0)|
double energy_drift(const Trajectory& traj, const OdeProblem& p);
/// max_n |Q(z_n) - Q(z_0)| for the named invariant.
double invariant_drift(const Trajectory& traj, const OdeProblem& p, const std::string& name);

/// |Phi_{-h}(Phi_h(z)) - z|_inf
double symmetry_residual(const ButcherTableau& t, const OdeProblem& p, const Vector& z, double h,
                         const StepperConfig& cfg = {});

/// max |Psi^T J Psi - J| with Psi the one-step Jacobian by central differences.
double symplecticity_residual(const ButcherTableau& t, const OdeProblem& p, const Vector& z, double h,
                              const StepperConfig& cfg = {});

inline constexpr double kFiniteDifferenceStep = 1e-6;

struct ProblemParams {
  double eccentricity = 0.6;
  std::optional<Vector> z0;
};

/// harmonic, pendulum or kepler.
OdeProblem builtin_problem(const std::string& name, const ProblemParams& params = {});

/// max |f(z) - J grad H(z)| over random states near z0, gradient by central differences.
double hamiltonian_consistency(const OdeProblem& p, int samples = 10, unsigned seed = 7);

}  // namespace csrk
