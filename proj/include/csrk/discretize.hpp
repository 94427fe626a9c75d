#pragma once

#include <string>
#include <vector>

#include "csrk/method.hpp"

namespace csrk {

/// Quadrature rule on [0,1]: sum_i weights_i f(nodes_i) ~ int_0^1 f.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
  std::string id;

  int stages() const noexcept { return static_cast<int>(nodes.size()); }
};

inline constexpr int kMaxQuadratureStages = 20;
inline constexpr int kQuadratureOrderCap = 40;

/// Order 2s, 1 <= s <= 20.
Quadrature gauss_legendre(int stages);
/// Order 2s - 2, 2 <= s <= 20; endpoints included.
Quadrature lobatto(int stages);
/// Validates nodes (strictly increasing, inside [0,1]) and weights (sum 1),
/// then certifies the order by moment sums.
Quadrature custom_quadrature(std::vector<double> nodes, std::vector<double> weights, std::string id = "custom");

/// Largest p <= cap with sum_i b_i c_i^{k-1} = 1/k for every k <= p (to 1e-12).
int quadrature_order(const Quadrature& q, int cap = kQuadratureOrderCap);

/// c_i + c_{s+1-i} = 1 and b_i = b_{s+1-i}.
bool is_symmetric(const Quadrature& q, double tol = 1e-14);

struct ButcherTableau {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
  std::string provenance;

  int stages() const noexcept { return static_cast<int>(c.size()); }
};

/// Checks shapes and finiteness.
ButcherTableau make_tableau(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> c,
                            std::string provenance = {});

ButcherTableau explicit_euler();

/// a_ij = b_j A(c_i, c_j), bhat_i = b_i B(c_i), nodes kept.
ButcherTableau discretize(const CsrkMethod& m, const Quadrature& q);

/// min(p, 2a + 2, a + b + 1) with a = min(eta, p - deg_sigma A), b = min(zeta, p - deg_tau A).
/// HypothesisViolation unless B == 1 and C == tau.
int predicted_rk_order(const CsrkMethod& m, const Quadrature& q, int level_cap = 10);

/// max_ij |bhat_i a_ij + bhat_j a_ji - bhat_i bhat_j|
double rk_symplectic_residual(const ButcherTableau& t);

/// max_ij |a_{s+1-i, s+1-j} + a_ij - bhat_j|
double rk_symmetric_residual(const ButcherTableau& t);

/// max_i |sum_j a_ij - C(c_i)|
double row_sum_defect(const ButcherTableau& t, const CsrkMethod& m);

}  // namespace csrk
