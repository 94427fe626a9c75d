#pragma once

// Reference implementations kept independent of the library: Legendre
// polynomials by literal Rodrigues expansion, Gauss rules by Golub-Welsch.

#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "csrk/method.hpp"

namespace oracle {

using Poly = std::vector<mpq_class>;  // monomial coefficients, ascending

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly diff(const Poly& a) {
  if (a.size() <= 1) return {mpq_class(0)};
  Poly out(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) out[k - 1] = a[k] * static_cast<long>(k);
  return out;
}

// L_n(x) = 1/n! d^n/dx^n [x^n (x-1)^n]
inline const Poly& rodrigues(int n) {
  static std::map<int, Poly> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Poly p{mpq_class(1)};
  for (int k = 0; k < n; ++k) p = mul(p, Poly{mpq_class(0), mpq_class(1)});
  for (int k = 0; k < n; ++k) p = mul(p, Poly{mpq_class(-1), mpq_class(1)});
  mpz_class fact = 1;
  for (int k = 0; k < n; ++k) {
    p = diff(p);
    fact *= k + 1;
  }
  for (auto& c : p) c /= fact;
  return cache.emplace(n, p).first->second;
}

inline mpq_class horner(const Poly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// long double keeps the alternating monomial sums accurate to ~1e-15 up to degree 10
inline double horner(const Poly& p, double x) {
  long double acc = 0.0L;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + static_cast<long double>(it->get_d());
  return static_cast<double>(acc);
}

inline const std::vector<long double>& rodrigues_ld(int n) {
  static std::map<int, std::vector<long double>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<long double> c;
    for (const auto& q : rodrigues(n)) c.push_back(static_cast<long double>(q.get_d()));
    it = cache.emplace(n, std::move(c)).first;
  }
  return it->second;
}

// Rodrigues expansion in long double; accurate to ~1e-13 up to degree 10.
inline double legendre_rodrigues(int n, double x) {
  const auto& c = rodrigues_ld(n);
  long double acc = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return std::sqrt(2.0 * n + 1.0) * static_cast<double>(acc);
}

// Bonnet recurrence for L_n(y), y = 2x - 1, and L'_{n+1} = L'_{n-1} + (2n+1) L_n.
inline std::pair<long double, long double> bonnet(int n, double x) {
  const long double y = 2.0L * x - 1.0L;
  long double l0 = 1.0L, l1 = y, d0 = 0.0L, d1 = 1.0L;
  if (n == 0) return {l0, d0};
  for (int k = 1; k < n; ++k) {
    const long double l2 = ((2 * k + 1) * y * l1 - k * l0) / (k + 1);
    const long double d2 = d0 + (2 * k + 1) * l1;
    l0 = l1;
    l1 = l2;
    d0 = d1;
    d1 = d2;
  }
  return {l1, d1};
}

inline double legendre(int n, double x) { return std::sqrt(2.0 * n + 1.0) * static_cast<double>(bonnet(n, x).first); }

inline double legendre_derivative(int n, double x) {
  return 2.0 * std::sqrt(2.0 * n + 1.0) * static_cast<double>(bonnet(n, x).second);
}

inline csrk::Scalar legendre_exact(int n, const mpq_class& x) {
  return csrk::Scalar::sqrt(static_cast<std::uint64_t>(2 * n + 1)) * csrk::Scalar(horner(rodrigues(n), x));
}

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [0,1] from the eigen-decomposition of the Jacobi matrix.
inline Rule gauss(int n) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k - 1, k) = beta;
    jac(k, k - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Rule r;
  for (int k = 0; k < n; ++k) {
    const double v = es.eigenvectors()(0, k);
    r.nodes.push_back(0.5 * (1.0 + es.eigenvalues()(k)));
    r.weights.push_back(v * v);  // 2 v^2 on [-1,1], halved
  }
  return r;
}

// Extended-precision rule: Golub-Welsch start, Newton polish on L_n(2x - 1) in long double.
struct RuleLD {
  std::vector<long double> nodes;
  std::vector<long double> weights;
};

inline std::pair<long double, long double> bonnet_ld(int n, long double x) {
  const long double y = 2.0L * x - 1.0L;
  long double l0 = 1.0L, l1 = y, d0 = 0.0L, d1 = 1.0L;
  if (n == 0) return {l0, d0};
  for (int k = 1; k < n; ++k) {
    const long double l2 = ((2 * k + 1) * y * l1 - k * l0) / (k + 1);
    const long double d2 = d0 + (2 * k + 1) * l1;
    l0 = l1;
    l1 = l2;
    d0 = d1;
    d1 = d2;
  }
  return {l1, d1};
}

inline long double legendre_ld(int n, long double x) { return std::sqrt(2.0L * n + 1.0L) * bonnet_ld(n, x).first; }

inline long double legendre_derivative_ld(int n, long double x) {
  return 2.0L * std::sqrt(2.0L * n + 1.0L) * bonnet_ld(n, x).second;
}

inline RuleLD gauss_ld(int n) {
  const Rule start = gauss(n);
  RuleLD r;
  for (double x0 : start.nodes) {
    long double x = x0;
    for (int it = 0; it < 6; ++it) {
      const auto [l, d] = bonnet_ld(n, x);
      x -= l / (2.0L * d);
    }
    const long double y = 2.0L * x - 1.0L;
    const long double d = bonnet_ld(n, x).second;
    r.nodes.push_back(x);
    r.weights.push_back(1.0L / ((1.0L - y * y) * d * d));
  }
  return r;
}

inline long double integrate(const RuleLD& r, const std::function<long double(long double)>& f) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(r.nodes[i]);
  return sum;
}

inline double integrate(const Rule& r, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(r.nodes[i]);
  return sum;
}

inline double integrate2(const Rule& r, const std::function<double(double, double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    for (std::size_t j = 0; j < r.nodes.size(); ++j) sum += r.weights[i] * r.weights[j] * f(r.nodes[i], r.nodes[j]);
  return sum;
}

inline double eval(const csrk::Coeffs& c, double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += c[i].to_double() * legendre(static_cast<int>(i), x);
  return sum;
}

inline double eval(const csrk::UnivariatePoly& p, double x) { return eval(p.coeffs(), x); }

inline double eval_derivative(const csrk::Coeffs& c, double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += c[i].to_double() * legendre_derivative(static_cast<int>(i), x);
  return sum;
}

inline double eval_matrix(const csrk::AlphaMatrix& a, double t, double s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!a[i][j].is_zero()) sum += a[i][j].to_double() * legendre(static_cast<int>(i), t) * legendre(static_cast<int>(j), s);
  return sum;
}

inline double eval_a(const csrk::CsrkMethod& m, double t, double s) { return eval_matrix(m.alpha(), t, s); }

// d/dt A(t, s)
inline double eval_a_dt(const csrk::CsrkMethod& m, double t, double s) {
  double sum = 0.0;
  const auto& a = m.alpha();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!a[i][j].is_zero())
        sum += a[i][j].to_double() * legendre_derivative(static_cast<int>(i), t) * legendre(static_cast<int>(j), s);
  return sum;
}

// Legendre coefficient (i) of f by projection.
inline double project(const Rule& r, const std::function<double(double)>& f, int i) {
  return integrate(r, [&](double x) { return f(x) * legendre(i, x); });
}

inline double project2(const Rule& r, const std::function<double(double, double)>& f, int i, int j) {
  return integrate2(r, [&](double t, double s) { return f(t, s) * legendre(i, t) * legendre(j, s); });
}

}  // namespace oracle
