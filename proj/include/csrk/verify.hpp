#pragma once

#include <array>
#include <optional>
#include <utility>

#include "csrk/method.hpp"

namespace csrk {

/// Residuals (lhs - rhs) of the eight order conditions up to order 4:
///   (1) int B = 1             (5) int B C^3 = 1/4
///   (2) int B C = 1/2         (6) int int B_t C_t C_s A = 1/8
///   (3) int B C^2 = 1/3       (7) int int B_t C_s^2 A = 1/12
///   (4) int int B_t C_s A = 1/6   (8) int int int B_t C_r A_ts A_sr = 1/24
/// and the certified order: (1)->1, (1)-(2)->2, (1)-(4)->3, (1)-(8)->4.
struct OrderConditions {
  int order = 0;
  std::array<Scalar, 8> residuals;
};

/// Dispatches to the reduced coefficient relations when B == 1, C == tau.
OrderConditions check_order_conditions(const CsrkMethod& m);
/// Exact polynomial-algebra evaluation of all eight integrals; any B, C.
OrderConditions order_conditions_general(const CsrkMethod& m);
/// Reduced relations in alpha; HypothesisViolation unless B == 1, C == tau.
OrderConditions order_conditions_normalized(const CsrkMethod& m);

inline constexpr int kDefaultLevelCap = 10;

/// Largest levels of the simplifying assumptions B(rho), C(eta), D(zeta).
struct SimplifyingLevels {
  int rho = 0;
  /// B == 1, C == tau: B(rho) holds for every rho.
  bool rho_unbounded = false;
  int eta = 0;
  int zeta = 0;
};

SimplifyingLevels check_simplifying(const CsrkMethod& m, int cap = kDefaultLevelCap);

/// int_0^1 B C^{k-1} - 1/k.
Scalar simplifying_b_residual(const CsrkMethod& m, int k);
/// Legendre coefficients (in tau) of int_0^1 A(tau, s) C(s)^{k-1} ds - C(tau)^k / k.
Coeffs simplifying_c_residual(const CsrkMethod& m, int k);
/// Legendre coefficients (in sigma) of int_0^1 B(t) C(t)^{k-1} A(t, sigma) dt - B(sigma)(1 - C(sigma)^k) / k.
Coeffs simplifying_d_residual(const CsrkMethod& m, int k);

/// min(rho, 2 eta + 2, eta + zeta + 1); an unbounded rho counts as 2 * cap.
int guaranteed_order(const SimplifyingLevels& levels, int cap = kDefaultLevelCap);
int guaranteed_order(const CsrkMethod& m, int cap = kDefaultLevelCap);

/// Legendre coefficient matrix of M(t, s) = B_t A(t, s) + B_s A(s, t) - B_t B_s.
AlphaMatrix symplectic_defect(const CsrkMethod& m);
Scalar symplectic_residual(const CsrkMethod& m);

/// Coefficients of A(t, s) + A(1-t, 1-s) - B_s. PreconditionViolation unless int B = 1.
AlphaMatrix symmetric_defect(const CsrkMethod& m);
Scalar symmetric_residual(const CsrkMethod& m);

struct EnergyDefects {
  /// Coefficients of d/dt A(t, s) - d/ds A(s, t).
  AlphaMatrix derivative_asymmetry;
  /// Coefficients of A(0, s).
  Coeffs at_zero;
  /// Coefficients of A(1, s) - B_s.
  Coeffs at_one;
};

EnergyDefects energy_preserving_defects(const CsrkMethod& m);
std::array<Scalar, 3> energy_preserving_residual(const CsrkMethod& m);

struct Epm2Check {
  bool holds = false;
  std::optional<std::pair<int, int>> witness;
};

/// sum_k omega_k a_ki a_kj = delta_ij for i, j < eta and 0 for i < eta <= j.
Epm2Check check_epm2_condition(const EpSpec& spec, int eta);

/// max_tau int_0^1 |A(tau, s)| ds (numerical, advisory).
double stage_operator_norm(const CsrkMethod& m);
/// 1 / (L * stage_operator_norm(m)); +inf when A == 0.
double stage_contraction_bound(const CsrkMethod& m, double lipschitz);

struct PropertyReport {
  OrderConditions order_conditions;
  SimplifyingLevels breve;
  int level_cap = kDefaultLevelCap;
  int guaranteed_order = 0;
  Scalar symplectic_residual;
  /// Absent when int B != 1 (symmetry condition not applicable).
  std::optional<Scalar> symmetric_residual;
  std::array<Scalar, 3> energy_residuals;
  bool symplectic = false;
  bool symmetric = false;
  bool energy_preserving = false;
  double h_bound_per_unit_l = 0.0;
};

PropertyReport verify_method(const CsrkMethod& m, int cap = kDefaultLevelCap);

}  // namespace csrk
