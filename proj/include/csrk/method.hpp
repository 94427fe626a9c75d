#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csrk/legendre.hpp"

namespace csrk {

/// Dense coefficient matrix: entry [i][j] multiplies P_i(tau) P_j(sigma).
using AlphaMatrix = std::vector<Coeffs>;

/// Sparse input convenience: (i, j) -> coefficient.
using SparseAlpha = std::map<std::pair<int, int>, Scalar>;

/// Continuous-stage Runge-Kutta method
///
///   Z_tau = z0 + h int_0^1 A(tau, sigma) f(t0 + C(sigma) h, Z_sigma) dsigma,
///   z1    = z0 + h int_0^1 B(tau) f(t0 + C(tau) h, Z_tau) dtau,
///
/// with A(tau, sigma) = sum_ij alpha_ij P_i(tau) P_j(sigma). Construction
/// enforces consistency, C(tau) = int_0^1 A(tau, sigma) dsigma, which in this
/// basis means column 0 of alpha equals the Legendre coefficients of C.
class CsrkMethod {
 public:
  CsrkMethod(AlphaMatrix alpha, UnivariatePoly b, UnivariatePoly c, std::string label = {});

  /// Trimmed dense matrix of shape (degree_tau()+1) x (degree_sigma()+1).
  const AlphaMatrix& alpha() const noexcept { return alpha_; }
  Scalar alpha(int i, int j) const;
  int degree_tau() const noexcept { return static_cast<int>(alpha_.size()) - 1; }
  int degree_sigma() const noexcept { return alpha_.empty() ? -1 : static_cast<int>(alpha_[0].size()) - 1; }

  const UnivariatePoly& b() const noexcept { return b_; }
  const UnivariatePoly& c() const noexcept { return c_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// B == 1 and C == tau.
  bool is_normalized() const;

  double eval_a(double tau, double sigma) const;
  Scalar eval_a(const Scalar& tau, const Scalar& sigma) const;

  /// Legendre coefficients (in tau) of column j, i.e. of the factor of P_j(sigma).
  Coeffs column(int j) const;
  /// Legendre coefficients (in sigma) of row i.
  Coeffs row(int i) const;

  friend bool operator==(const CsrkMethod& a, const CsrkMethod& b) {
    return a.alpha_ == b.alpha_ && a.b_ == b.b_ && a.c_ == b.c_;
  }

 private:
  AlphaMatrix alpha_;
  UnivariatePoly b_;
  UnivariatePoly c_;
  std::string label_;
  std::vector<double> alpha_f_;  // row-major doubles for fast evaluation
};

/// Validating factory; throws ConsistencyViolation / CapExceeded.
CsrkMethod new_method(AlphaMatrix alpha, UnivariatePoly b, UnivariatePoly c, std::string label = {});

/// Dense matrix from sparse entries (negative indices rejected).
AlphaMatrix to_dense(const SparseAlpha& entries);

/// Methods with B == 1, C == tau from a dense alpha.
CsrkMethod normalized_method(AlphaMatrix alpha, std::string label = {});

/// A = 1/2 + sqrt(3)/6 P_1(tau) + free terms with j >= 1. Order >= 3 forces
/// alpha_01 = -sqrt(3)/6; order 4 also forces alpha_11 = alpha_02 = 0 and requires
/// sum_{i>=3} alpha_0i alpha_i1 = 0 (Order4ConstraintViolation otherwise).
CsrkMethod construct_order_by_order(int target_order, const SparseAlpha& free);

/// Methods satisfying the simplifying assumptions C(alpha), D(beta):
///   A = 1/2 + sum_{k=0}^{N1} xi_{k+1} P_{k+1}(tau) P_k(sigma)
///           - sum_{k=0}^{N2} xi_{k+1} P_k(tau) P_{k+1}(sigma)
///           + sum_{i>=beta, j>=alpha} free_ij P_i(tau) P_j(sigma),
/// N1 = max(alpha-1, beta-2), N2 = max(alpha-2, beta-1).
CsrkMethod construct_simplifying(int alpha_level, int beta_level, const SparseAlpha& free);

/// Symplectic family: alpha_00 = 1/2 and skew-symmetric alpha off (0,0).
/// Entries are given for i < j; alpha_10 = sqrt(3)/6 is implied by consistency.
CsrkMethod construct_symplectic(const SparseAlpha& skew);

/// Symmetric family: A = 1/2 + sum_{i+j odd} omega_ij P_i(tau) P_j(sigma).
/// omega_10 = sqrt(3)/6 is inserted when absent.
CsrkMethod construct_symmetric(const SparseAlpha& odd);

/// omega_k weights and optional generators g_k (Legendre coefficient vectors).
struct EpSpec {
  std::vector<Scalar> omegas;
  std::optional<std::vector<UnivariatePoly>> generators;
};

struct EpLegendreMethod {
  CsrkMethod method;
  /// min{k : omega_k != 1}, with omega_k = 0 beyond the supplied list.
  int kappa = 0;
  int claimed_order = 0;
  /// omega_kappa/(2 kappa - 1) - omega_{kappa+1}/(2 kappa + 1) == 2/(4 kappa^2 - 1)
  bool tuned = false;
  /// Conjugate-symplectic order claim: 2 kappa + 4 when tuned, else 2 kappa + 2.
  int conjugate_symplectic_order = 0;
};

/// A(tau, sigma) = sum_k omega_k (int_0^tau P_k) P_k(sigma), omega_0 = 1.
EpLegendreMethod construct_ep_legendre(const EpSpec& spec);

struct EpGeneralMethod {
  CsrkMethod method;
  /// C derived from consistency equals tau.
  bool c_is_tau = false;
};

/// A(tau, sigma) = sum_k omega_k (int_0^tau g_k) g_k(sigma), B == 1, C from consistency.
EpGeneralMethod construct_ep_general(const EpSpec& spec);

}  // namespace csrk
