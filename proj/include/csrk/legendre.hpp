#pragma once

#include <span>
#include <vector>

#include "csrk/scalar.hpp"

namespace csrk {

/// Largest Legendre index a user-facing polynomial or coefficient matrix may use.
inline constexpr int kBasisCap = 32;

/// Largest degree for intermediate products (powers of C, B*C^k, ...).
inline constexpr int kWorkDegreeCap = 128;

/// Coefficient vector in some basis; entry i multiplies the i-th basis function.
using Coeffs = std::vector<Scalar>;

// Normalized shifted Legendre polynomials on [0,1]:
//   P_0 = 1, P_n(x) = sqrt(2n+1)/n! d^n/dx^n (x^n (x-1)^n),
// orthonormal in L2[0,1]. Evaluation uses the three-term recurrence of the
// unnormalized family, (n+1) L_{n+1} = (2n+1)(2x-1) L_n - n L_{n-1}.

Scalar eval_legendre(int index, const Scalar& x);
double eval_legendre(int index, double x);
/// Fills out[i] = P_i(x) for i < out.size().
void eval_legendre_all(double x, std::span<double> out);

/// xi_n = 1 / (2 sqrt(4 n^2 - 1)), n >= 1.
Scalar xi(int index);

/// Polynomial on [0,1] stored by its normalized shifted Legendre coefficients.
/// Degree is bounded by kBasisCap; trailing zero coefficients are trimmed.
class UnivariatePoly {
 public:
  UnivariatePoly() = default;
  explicit UnivariatePoly(Coeffs coeffs);

  static UnivariatePoly basis(int index);
  static UnivariatePoly constant(const Scalar& value);
  /// The identity polynomial x = 1/2 P_0 + sqrt(3)/6 P_1.
  static UnivariatePoly identity();

  const Coeffs& coeffs() const noexcept { return coeffs_; }
  /// Coefficient of P_i; zero past the degree.
  Scalar coeff(int index) const;
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  Scalar eval(const Scalar& x) const;
  double eval(double x) const;
  std::vector<double> to_doubles() const;

  UnivariatePoly& operator+=(const UnivariatePoly& rhs);
  UnivariatePoly& operator-=(const UnivariatePoly& rhs);
  UnivariatePoly& operator*=(const Scalar& factor);
  friend UnivariatePoly operator+(UnivariatePoly a, const UnivariatePoly& b) { return a += b; }
  friend UnivariatePoly operator-(UnivariatePoly a, const UnivariatePoly& b) { return a -= b; }
  friend UnivariatePoly operator*(UnivariatePoly a, const Scalar& s) { return a *= s; }
  friend UnivariatePoly operator*(const Scalar& s, UnivariatePoly a) { return a *= s; }
  friend bool operator==(const UnivariatePoly& a, const UnivariatePoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  Coeffs coeffs_;
};

/// q(x) = int_0^x p(t) dt, termwise:
///   int_0^x P_0 = xi_1 P_1 + 1/2 P_0,
///   int_0^x P_n = xi_{n+1} P_{n+1} - xi_n P_{n-1}   (n >= 1).
UnivariatePoly antiderivative(const UnivariatePoly& p);
Coeffs antiderivative(const Coeffs& legendre);

/// p'(x), using P_n' = sum_{k<n, n-k odd} 2 sqrt(2n+1) sqrt(2k+1) P_k.
UnivariatePoly derivative(const UnivariatePoly& p);
Coeffs derivative(const Coeffs& legendre);

/// Legendre coefficients of x^m (m-fold antiderivative of P_0 scaled by m!).
UnivariatePoly monomial_to_legendre(int exponent);

/// int_0^1 u v = sum_i u_i v_i by orthonormality.
Scalar inner_product(const UnivariatePoly& u, const UnivariatePoly& v);
Scalar inner_product(const Coeffs& u, const Coeffs& v);

/// Basis conversions and products on unbounded coefficient vectors
/// (degree limited by kWorkDegreeCap).
namespace basis {

Coeffs legendre_to_monomial(const Coeffs& legendre);
Coeffs monomial_to_legendre(const Coeffs& monomial);
Coeffs multiply_monomial(const Coeffs& a, const Coeffs& b);
/// Legendre coefficients of the product of two Legendre series.
Coeffs multiply(const Coeffs& a, const Coeffs& b);
Coeffs power(const Coeffs& legendre, int exponent);
/// int_0^1 of a monomial-basis polynomial.
Scalar integrate_monomial(const Coeffs& monomial);
/// Drops trailing zeros.
void trim(Coeffs& c);

}  // namespace basis

/// Double-precision Legendre series helpers.
double eval_series(std::span<const double> legendre, double x);
std::vector<double> antiderivative_series(std::span<const double> legendre);

}  // namespace csrk
