#include "csrk/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "csrk/errors.hpp"

namespace csrk {

namespace {

constexpr int kMaxContinuation = 64;

bool finite(const Vector& v) { return v.allFinite(); }

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

[[noreturn]] void fail_convergence(const ButcherTableau& t, const OdeProblem& p, double tn, double h, int iterations) {
  std::string msg = "stage iteration did not converge in " + std::to_string(iterations) +
                    " iterations at t = " + format_double(tn) + " with h = " + format_double(h);
  if (p.lipschitz) {
    msg += "; fixed-point iteration contracts for |h| < " + format_double(tableau_step_bound(t, *p.lipschitz)) +
           " (L = " + format_double(*p.lipschitz) + "), or use the newton solver";
  }
  throw Error(ErrorKind::NonConvergence, msg);
}

double stage_scale(const std::vector<Vector>& u) {
  double m = 1.0;
  for (const auto& v : u) m = std::max(m, v.lpNorm<Eigen::Infinity>());
  return m;
}

Eigen::MatrixXd rhs_jacobian(const OdeProblem& p, double t, const Vector& z) {
  const int d = static_cast<int>(z.size());
  Eigen::MatrixXd jac(d, d);
  for (int k = 0; k < d; ++k) {
    const double delta = kFiniteDifferenceStep * std::max(1.0, std::abs(z[k]));
    Vector plus = z, minus = z;
    plus[k] += delta;
    minus[k] -= delta;
    jac.col(k) = (p.rhs(t, plus) - p.rhs(t, minus)) / (2.0 * delta);
  }
  return jac;
}

}  // namespace

double tableau_step_bound(const ButcherTableau& t, double lipschitz) {
  double norm = 0.0;
  for (const auto& row : t.a) {
    double sum = 0.0;
    for (double v : row) sum += std::abs(v);
    norm = std::max(norm, sum);
  }
  if (norm == 0.0 || lipschitz <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (lipschitz * norm);
}

StepResult rk_step(const ButcherTableau& t, const OdeProblem& p, double tn, const Vector& zn, double h,
                   const StepperConfig& cfg) {
  if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1) {
    throw Error(ErrorKind::InvalidArgument, "stepper tolerance and iteration limit must be positive");
  }
  if (h == 0.0) return {zn, 0};
  const int s = t.stages();
  const int d = static_cast<int>(zn.size());
  std::vector<Vector> u(static_cast<std::size_t>(s), zn);
  std::vector<Vector> f(static_cast<std::size_t>(s));
  auto eval_stages_at = [&](double step) {
    for (int j = 0; j < s; ++j) {
      f[j] = p.rhs(tn + t.c[j] * step, u[j]);
      if (!finite(f[j])) throw Error(ErrorKind::NonFinite, "right-hand side is not finite at t = " + format_double(tn));
    }
  };
  auto eval_stages = [&] { eval_stages_at(h); };

  int iterations = 0;
  bool converged = false;
  if (cfg.solver == SolverKind::FixedPoint) {
    eval_stages();
    while (iterations < cfg.max_iterations) {
      ++iterations;
      double diff = 0.0;
      for (int i = 0; i < s; ++i) {
        Vector next = zn;
        for (int j = 0; j < s; ++j) {
          if (t.a[i][j] != 0.0) next += (h * t.a[i][j]) * f[j];
        }
        diff = std::max(diff, (next - u[i]).lpNorm<Eigen::Infinity>());
        u[i] = std::move(next);
      }
      if (!std::isfinite(diff)) throw Error(ErrorKind::NonFinite, "stage values are not finite");
      eval_stages();
      if (diff <= cfg.tolerance * stage_scale(u)) {
        converged = true;
        break;
      }
    }
  } else {
    const int n = s * d;
    Vector residual(n);
    Eigen::MatrixXd jac(n, n);
    // Continuation in h from the trivial solution at h = 0 keeps Newton on the principal branch.
    int pieces = 1;
    if (p.lipschitz) {
      const double reach = std::abs(h) * *p.lipschitz / tableau_step_bound(t, 1.0);
      pieces = std::clamp(static_cast<int>(std::ceil(2.0 * reach)), 1, kMaxContinuation);
    }
    for (int piece = 1; piece <= pieces; ++piece) {
      const double hk = h * piece / pieces;
      converged = false;
      eval_stages_at(hk);
      while (iterations < cfg.max_iterations * piece) {
        ++iterations;
        jac.setIdentity();
        for (int j = 0; j < s; ++j) {
          const Eigen::MatrixXd fj = rhs_jacobian(p, tn + t.c[j] * hk, u[j]);
          for (int i = 0; i < s; ++i) {
            if (t.a[i][j] != 0.0) jac.block(i * d, j * d, d, d) -= (hk * t.a[i][j]) * fj;
          }
        }
        for (int i = 0; i < s; ++i) {
          Vector g = u[i] - zn;
          for (int j = 0; j < s; ++j) {
            if (t.a[i][j] != 0.0) g -= (hk * t.a[i][j]) * f[j];
          }
          residual.segment(i * d, d) = g;
        }
        const Vector delta = jac.partialPivLu().solve(-residual);
        if (!finite(delta)) throw Error(ErrorKind::NonFinite, "Newton update is not finite");
        for (int i = 0; i < s; ++i) u[i] += delta.segment(i * d, d);
        eval_stages_at(hk);
        if (delta.lpNorm<Eigen::Infinity>() <= cfg.tolerance * stage_scale(u)) {
          converged = true;
          break;
        }
      }
      if (!converged) break;
    }
  }
  if (!converged) fail_convergence(t, p, tn, h, iterations);

  Vector z = zn;
  for (int i = 0; i < s; ++i) {
    if (t.b[i] != 0.0) z += (h * t.b[i]) * f[i];
  }
  if (!finite(z)) throw Error(ErrorKind::NonFinite, "state is not finite at t = " + format_double(tn + h));
  return {std::move(z), iterations};
}

Trajectory integrate(const ButcherTableau& t, const OdeProblem& p, double h, int n_steps, const StepperConfig& cfg) {
  if (n_steps < 1) throw Error(ErrorKind::InvalidArgument, "n_steps must be >= 1");
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.times.push_back(p.t0);
  traj.states.push_back(p.z0);
  for (int n = 0; n < n_steps; ++n) {
    const double tn = p.t0 + n * h;
    try {
      StepResult r = rk_step(t, p, tn, traj.states.back(), h, cfg);
      traj.states.push_back(std::move(r.z));
      traj.iterations.push_back(r.iterations);
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(n + 1) + ": " + e.what());
    }
    traj.times.push_back(p.t0 + (n + 1) * h);
  }
  return traj;
}

OrderEstimate empirical_order(const ButcherTableau& t, const OdeProblem& p, const std::vector<double>& h_list,
                              double t_final, const StepperConfig& cfg, const std::function<Vector(double)>& reference) {
  if (h_list.size() < 3) throw Error(ErrorKind::InvalidArgument, "empirical order needs at least three step sizes");
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    if (!(h_list[k] > 0.0)) throw Error(ErrorKind::InvalidArgument, "step sizes must be positive");
    if (k > 0 && !(h_list[k] < h_list[k - 1])) throw Error(ErrorKind::InvalidArgument, "step sizes must decrease");
    if (k > 1) {
      const double r0 = h_list[k - 1] / h_list[k - 2], r1 = h_list[k] / h_list[k - 1];
      if (std::abs(r0 - r1) > 1e-9 * r0) throw Error(ErrorKind::InvalidArgument, "step sizes must decrease geometrically");
    }
  }
  auto steps_for = [&](double h) {
    const double n = (t_final - p.t0) / h;
    const double rounded = std::round(n);
    if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
      throw Error(ErrorKind::InvalidArgument, "step " + format_double(h) + " does not divide the time interval");
    }
    return static_cast<int>(rounded);
  };

  Vector target;
  if (reference) {
    target = reference(t_final);
  } else if (p.exact) {
    target = p.exact(t_final);
  } else {
    const double h_ref = h_list.back() / 8.0;
    target = integrate(t, p, h_ref, steps_for(h_ref), cfg).states.back();
  }

  OrderEstimate out;
  out.h = h_list;
  for (double h : h_list) {
    const Trajectory traj = integrate(t, p, h, steps_for(h), cfg);
    out.errors.push_back((traj.states.back() - target).lpNorm<Eigen::Infinity>());
  }
  for (double e : out.errors) {
    if (e < 1e-12) out.saturated = true;
  }
  for (std::size_t k = 0; k + 1 < out.errors.size(); ++k) {
    out.pairwise.push_back(std::log(out.errors[k] / out.errors[k + 1]) / std::log(h_list[k] / h_list[k + 1]));
  }
  if (!out.saturated) {
    const std::size_t n = h_list.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = std::log(h_list[k]), y = std::log(out.errors[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

double energy_drift(const Trajectory& traj, const OdeProblem& p) {
  if (!p.hamiltonian) throw Error(ErrorKind::PreconditionViolation, "problem has no Hamiltonian");
  const double h0 = p.hamiltonian(traj.states.front());
  double worst = 0.0;
  for (const auto& z : traj.states) worst = std::max(worst, std::abs(p.hamiltonian(z) - h0));
  return worst;
}

double invariant_drift(const Trajectory& traj, const OdeProblem& p, const std::string& name) {
  for (const auto& inv : p.invariants) {
    if (inv.name != name) continue;
    const double q0 = inv.value(traj.states.front());
    double worst = 0.0;
    for (const auto& z : traj.states) worst = std::max(worst, std::abs(inv.value(z) - q0));
    return worst;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown invariant '" + name + "'");
}

double symmetry_residual(const ButcherTableau& t, const OdeProblem& p, const Vector& z, double h,
                         const StepperConfig& cfg) {
  if (h == 0.0) return 0.0;
  const Vector forward = rk_step(t, p, p.t0, z, h, cfg).z;
  const Vector back = rk_step(t, p, p.t0 + h, forward, -h, cfg).z;
  return (back - z).lpNorm<Eigen::Infinity>();
}

double symplecticity_residual(const ButcherTableau& t, const OdeProblem& p, const Vector& z, double h,
                              const StepperConfig& cfg) {
  const int d = static_cast<int>(z.size());
  if (!p.hamiltonian || d % 2 != 0) {
    throw Error(ErrorKind::PreconditionViolation, "symplecticity needs a Hamiltonian problem of even dimension");
  }
  // Phi_0 is the identity, so Psi = I exactly.
  if (h == 0.0) return 0.0;
  const int half = d / 2;
  Eigen::MatrixXd psi(d, d);
  for (int k = 0; k < d; ++k) {
    Vector plus = z, minus = z;
    plus[k] += kFiniteDifferenceStep;
    minus[k] -= kFiniteDifferenceStep;
    psi.col(k) = (rk_step(t, p, p.t0, plus, h, cfg).z - rk_step(t, p, p.t0, minus, h, cfg).z) /
                 (2.0 * kFiniteDifferenceStep);
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(d, d);
  j.topRightCorner(half, half).setIdentity();
  j.bottomLeftCorner(half, half) = -Eigen::MatrixXd::Identity(half, half);
  return (psi.transpose() * j * psi - j).lpNorm<Eigen::Infinity>();
}

OdeProblem builtin_problem(const std::string& name, const ProblemParams& params) {
  OdeProblem p;
  p.name = name;
  if (name == "harmonic") {
    p.dimension = 2;
    p.z0 = params.z0.value_or(Vector{{1.0, 0.0}});
    p.rhs = [](double, const Vector& z) { return Vector{{z[1], -z[0]}}; };
    p.hamiltonian = [](const Vector& z) { return 0.5 * (z[0] * z[0] + z[1] * z[1]); };
    p.invariants.push_back({"energy", p.hamiltonian});
    p.lipschitz = 1.0;
    const double q0 = p.z0[0], p0 = p.z0[1];
    p.exact = [q0, p0](double t) {
      return Vector{{q0 * std::cos(t) + p0 * std::sin(t), p0 * std::cos(t) - q0 * std::sin(t)}};
    };
  } else if (name == "pendulum") {
    p.dimension = 2;
    p.z0 = params.z0.value_or(Vector{{0.0, 1.5}});
    p.rhs = [](double, const Vector& z) { return Vector{{z[1], -std::sin(z[0])}}; };
    p.hamiltonian = [](const Vector& z) { return 0.5 * z[1] * z[1] - std::cos(z[0]); };
    p.invariants.push_back({"energy", p.hamiltonian});
    p.lipschitz = 1.0;
  } else if (name == "kepler") {
    const double e = params.eccentricity;
    if (!(e >= 0.0 && e < 1.0)) throw Error(ErrorKind::InvalidArgument, "kepler needs eccentricity in [0, 1)");
    if (params.z0) throw Error(ErrorKind::InvalidArgument, "kepler start is set by the eccentricity");
    p.dimension = 4;
    p.z0 = Vector{{1.0 - e, 0.0, 0.0, std::sqrt((1.0 + e) / (1.0 - e))}};
    p.rhs = [](double, const Vector& z) {
      const double r2 = z[0] * z[0] + z[1] * z[1];
      const double r3 = r2 * std::sqrt(r2);
      return Vector{{z[2], z[3], -z[0] / r3, -z[1] / r3}};
    };
    p.hamiltonian = [](const Vector& z) {
      return 0.5 * (z[2] * z[2] + z[3] * z[3]) - 1.0 / std::sqrt(z[0] * z[0] + z[1] * z[1]);
    };
    p.invariants.push_back({"energy", p.hamiltonian});
    p.invariants.push_back({"angular_momentum", [](const Vector& z) { return z[0] * z[3] - z[1] * z[2]; }});
    p.lipschitz = 2.0 / std::pow(1.0 - e, 3);
    p.exact = [e](double t) {
      // Mean anomaly equals t (unit semi-major axis and gravitational parameter).
      double big_e = e < 0.8 ? t : M_PI;
      for (int it = 0; it < 100; ++it) {
        const double step = (big_e - e * std::sin(big_e) - t) / (1.0 - e * std::cos(big_e));
        big_e -= step;
        if (std::abs(step) < 1e-16) break;
      }
      const double ce = std::cos(big_e), se = std::sin(big_e);
      const double root = std::sqrt(1.0 - e * e);
      const double denom = 1.0 - e * ce;
      return Vector{{ce - e, root * se, -se / denom, root * ce / denom}};
    };
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown problem '" + name + "'");
  }
  return p;
}

double hamiltonian_consistency(const OdeProblem& p, int samples, unsigned seed) {
  if (!p.hamiltonian) throw Error(ErrorKind::PreconditionViolation, "problem has no Hamiltonian");
  const int d = p.dimension;
  const int half = d / 2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vector z = p.z0;
    for (int i = 0; i < d; ++i) z[i] += jitter(rng);
    Vector grad(d);
    for (int i = 0; i < d; ++i) {
      Vector plus = z, minus = z;
      plus[i] += kFiniteDifferenceStep;
      minus[i] -= kFiniteDifferenceStep;
      grad[i] = (p.hamiltonian(plus) - p.hamiltonian(minus)) / (2.0 * kFiniteDifferenceStep);
    }
    Vector expected(d);
    expected.head(half) = grad.tail(half);
    expected.tail(half) = -grad.head(half);
    worst = std::max(worst, (p.rhs(p.t0, z) - expected).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace csrk
