#include "csrk/legendre.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "csrk/errors.hpp"

namespace csrk {

namespace {

void check_index(int index) {
  if (index < 0) throw Error(ErrorKind::InvalidArgument, "negative Legendre index");
}

void check_work_degree(std::size_t size) {
  if (size > static_cast<std::size_t>(kWorkDegreeCap) + 1) {
    throw Error(ErrorKind::CapExceeded,
                "intermediate degree " + std::to_string(size - 1) + " exceeds " + std::to_string(kWorkDegreeCap));
  }
}

const mpz_class& factorial(int n) {
  static const std::vector<mpz_class> table = [] {
    std::vector<mpz_class> t(2 * kWorkDegreeCap + 3);
    t[0] = 1;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<unsigned long>(i);
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

// Monomial coefficient of x^l in the unnormalized shifted Legendre L_k.
mpz_class shifted_coefficient(int k, int l) {
  mpz_class a, b;
  mpz_bin_uiui(a.get_mpz_t(), k, l);
  mpz_bin_uiui(b.get_mpz_t(), k + l, l);
  mpz_class c = a * b;
  return ((k + l) % 2 == 0) ? c : mpz_class(-c);
}

// int_0^1 L_k(x) x^m dx = (m!)^2 / ((m-k)! (m+k+1)!) for m >= k, else 0.
mpq_class shifted_moment(int k, int m) {
  if (m < k) return 0;
  mpq_class q(factorial(m) * factorial(m), factorial(m - k) * factorial(m + k + 1));
  q.canonicalize();
  return q;
}

// Unnormalized values L_0..L_n at x, by recurrence.
template <class T>
void shifted_values(const T& x, std::vector<T>& out, std::size_t count) {
  out.assign(count, T(0));
  if (count == 0) return;
  out[0] = T(1);
  if (count == 1) return;
  const T y = T(2) * x - T(1);
  out[1] = y;
  for (std::size_t n = 1; n + 1 < count; ++n) {
    if constexpr (std::is_same_v<T, double>) {
      out[n + 1] = ((2.0 * n + 1.0) * y * out[n] - static_cast<double>(n) * out[n - 1]) / (n + 1.0);
    } else {
      const mpq_class inv(1, static_cast<long>(n + 1));
      out[n + 1] = (Scalar(static_cast<long>(2 * n + 1)) * y * out[n] - Scalar(static_cast<long>(n)) * out[n - 1]) *
                   Scalar(inv);
    }
  }
}

Scalar norm_factor(int n) { return Scalar::sqrt(static_cast<std::uint64_t>(2 * n + 1)); }

}  // namespace

Scalar eval_legendre(int index, const Scalar& x) {
  check_index(index);
  std::vector<Scalar> values;
  shifted_values(x, values, static_cast<std::size_t>(index) + 1);
  return norm_factor(index) * values.back();
}

double eval_legendre(int index, double x) {
  check_index(index);
  std::vector<double> values;
  shifted_values(x, values, static_cast<std::size_t>(index) + 1);
  return std::sqrt(2.0 * index + 1.0) * values.back();
}

void eval_legendre_all(double x, std::span<double> out) {
  std::vector<double> values;
  shifted_values(x, values, out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(2.0 * static_cast<double>(i) + 1.0) * values[i];
}

Scalar xi(int index) {
  if (index < 1) throw Error(ErrorKind::InvalidArgument, "xi is defined for index >= 1");
  const long n = index;
  return Scalar::sqrt(mpq_class(1, 4 * (4 * n * n - 1)));
}

// ---------------------------------------------------------------------------

UnivariatePoly::UnivariatePoly(Coeffs coeffs) : coeffs_(std::move(coeffs)) {
  basis::trim(coeffs_);
  if (degree() > kBasisCap) {
    throw Error(ErrorKind::CapExceeded,
                "polynomial degree " + std::to_string(degree()) + " exceeds basis cap " + std::to_string(kBasisCap));
  }
}

UnivariatePoly UnivariatePoly::basis(int index) {
  check_index(index);
  Coeffs c(static_cast<std::size_t>(index) + 1);
  c.back() = Scalar(1);
  return UnivariatePoly(std::move(c));
}

UnivariatePoly UnivariatePoly::constant(const Scalar& value) { return UnivariatePoly(Coeffs{value}); }

UnivariatePoly UnivariatePoly::identity() {
  return UnivariatePoly(Coeffs{Scalar::rational(1, 2), Scalar::sqrt(3) * Scalar::rational(1, 6)});
}

Scalar UnivariatePoly::coeff(int index) const {
  if (index < 0 || index > degree()) return Scalar();
  return coeffs_[static_cast<std::size_t>(index)];
}

Scalar UnivariatePoly::eval(const Scalar& x) const {
  std::vector<Scalar> values;
  shifted_values(x, values, coeffs_.size());
  Scalar sum;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!coeffs_[i].is_zero()) sum += coeffs_[i] * norm_factor(static_cast<int>(i)) * values[i];
  }
  return sum;
}

double UnivariatePoly::eval(double x) const {
  const auto c = to_doubles();
  return eval_series(c, x);
}

std::vector<double> UnivariatePoly::to_doubles() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.to_double());
  return out;
}

UnivariatePoly& UnivariatePoly::operator+=(const UnivariatePoly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  basis::trim(coeffs_);
  return *this;
}

UnivariatePoly& UnivariatePoly::operator-=(const UnivariatePoly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  basis::trim(coeffs_);
  return *this;
}

UnivariatePoly& UnivariatePoly::operator*=(const Scalar& factor) {
  for (auto& c : coeffs_) c *= factor;
  basis::trim(coeffs_);
  return *this;
}

// ---------------------------------------------------------------------------

Coeffs antiderivative(const Coeffs& p) {
  Coeffs q(p.size() + 1);
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n].is_zero()) continue;
    const int i = static_cast<int>(n);
    q[n + 1] += p[n] * xi(i + 1);
    if (i == 0) {
      q[0] += p[n] * Scalar::rational(1, 2);
    } else {
      q[n - 1] -= p[n] * xi(i);
    }
  }
  basis::trim(q);
  return q;
}

UnivariatePoly antiderivative(const UnivariatePoly& p) { return UnivariatePoly(antiderivative(p.coeffs())); }

Coeffs derivative(const Coeffs& p) {
  Coeffs d(p.size());
  for (std::size_t n = 1; n < p.size(); ++n) {
    if (p[n].is_zero()) continue;
    const Scalar outer = Scalar(2) * norm_factor(static_cast<int>(n)) * p[n];
    for (std::size_t k = (n % 2 == 0) ? 1 : 0; k < n; k += 2) {
      d[k] += outer * norm_factor(static_cast<int>(k));
    }
  }
  basis::trim(d);
  return d;
}

UnivariatePoly derivative(const UnivariatePoly& p) { return UnivariatePoly(derivative(p.coeffs())); }

UnivariatePoly monomial_to_legendre(int exponent) {
  check_index(exponent);
  if (exponent > kBasisCap) throw Error(ErrorKind::CapExceeded, "monomial exponent exceeds basis cap");
  UnivariatePoly p = UnivariatePoly::basis(0);
  for (int k = 0; k < exponent; ++k) p = antiderivative(p);
  return p * Scalar(mpq_class(factorial(exponent)));
}

Scalar inner_product(const Coeffs& u, const Coeffs& v) {
  Scalar sum;
  const std::size_t n = std::min(u.size(), v.size());
  for (std::size_t i = 0; i < n; ++i) sum += u[i] * v[i];
  return sum;
}

Scalar inner_product(const UnivariatePoly& u, const UnivariatePoly& v) {
  return inner_product(u.coeffs(), v.coeffs());
}

namespace basis {

void trim(Coeffs& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Coeffs legendre_to_monomial(const Coeffs& legendre) {
  check_work_degree(legendre.size());
  Coeffs out(legendre.size());
  for (std::size_t k = 0; k < legendre.size(); ++k) {
    if (legendre[k].is_zero()) continue;
    const Scalar scaled = legendre[k] * norm_factor(static_cast<int>(k));
    for (std::size_t l = 0; l <= k; ++l) {
      out[l] += scaled * Scalar(mpq_class(shifted_coefficient(static_cast<int>(k), static_cast<int>(l))));
    }
  }
  trim(out);
  return out;
}

Coeffs monomial_to_legendre(const Coeffs& monomial) {
  check_work_degree(monomial.size());
  Coeffs out(monomial.size());
  for (std::size_t k = 0; k < monomial.size(); ++k) {
    Scalar moment;
    for (std::size_t m = k; m < monomial.size(); ++m) {
      if (monomial[m].is_zero()) continue;
      moment += monomial[m] * Scalar(shifted_moment(static_cast<int>(k), static_cast<int>(m)));
    }
    out[k] = moment * norm_factor(static_cast<int>(k));
  }
  trim(out);
  return out;
}

Coeffs multiply_monomial(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  check_work_degree(a.size() + b.size() - 1);
  Coeffs out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
    }
  }
  trim(out);
  return out;
}

Coeffs multiply(const Coeffs& a, const Coeffs& b) {
  return monomial_to_legendre(multiply_monomial(legendre_to_monomial(a), legendre_to_monomial(b)));
}

Coeffs power(const Coeffs& legendre, int exponent) {
  check_index(exponent);
  Coeffs mono = legendre_to_monomial(legendre);
  Coeffs acc{Scalar(1)};
  for (int k = 0; k < exponent; ++k) acc = multiply_monomial(acc, mono);
  return monomial_to_legendre(acc);
}

Scalar integrate_monomial(const Coeffs& monomial) {
  Scalar sum;
  for (std::size_t m = 0; m < monomial.size(); ++m) {
    if (!monomial[m].is_zero()) sum += monomial[m] * Scalar::rational(1, static_cast<long>(m + 1));
  }
  return sum;
}

}  // namespace basis

double eval_series(std::span<const double> legendre, double x) {
  std::vector<double> values(legendre.size());
  eval_legendre_all(x, values);
  double sum = 0.0;
  for (std::size_t i = 0; i < legendre.size(); ++i) sum += legendre[i] * values[i];
  return sum;
}

std::vector<double> antiderivative_series(std::span<const double> p) {
  std::vector<double> q(p.size() + 1, 0.0);
  auto xi_d = [](double n) { return 0.5 / std::sqrt(4.0 * n * n - 1.0); };
  for (std::size_t n = 0; n < p.size(); ++n) {
    q[n + 1] += p[n] * xi_d(static_cast<double>(n) + 1.0);
    if (n == 0) {
      q[0] += 0.5 * p[n];
    } else {
      q[n - 1] -= p[n] * xi_d(static_cast<double>(n));
    }
  }
  return q;
}

}  // namespace csrk
