#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace csrk {

/// Exact element of Q(sqrt(r1), sqrt(r2), ...): a rational linear combination
/// of square roots of distinct square-free positive integers.
///
/// The term list is kept canonical (sorted by radicand, no zero coefficients),
/// so two scalars are equal iff their term lists are equal; this relies on the
/// linear independence of square roots of distinct square-free integers.
class Scalar {
 public:
  using Radicand = std::uint64_t;
  using Term = std::pair<Radicand, mpq_class>;

  Scalar() = default;
  Scalar(int value);  // NOLINT(google-explicit-constructor)
  Scalar(long value);  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& value);  // NOLINT(google-explicit-constructor)

  static Scalar rational(long num, long den);
  /// Exact sqrt(n) for n >= 0, reduced to (k)*sqrt(square-free part).
  static Scalar sqrt(std::uint64_t n);
  /// Exact sqrt(num/den) for num >= 0, den > 0.
  static Scalar sqrt(const mpq_class& value);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_rational() const noexcept;
  /// Rational part (coefficient of sqrt(1)).
  mpq_class rational_part() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  /// Division is only supported by a nonzero single-term scalar q*sqrt(r).
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(const Scalar& lhs, const Scalar& rhs);
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Exact sign: -1, 0, +1.
  int sign() const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  /// Correctly rounded double.
  double to_double() const;

  /// Serialized form: terms "p/q" or "p/q*sqrt(r)" joined by "+", "0" for zero.
  std::string to_string() const;
  /// Inverse of to_string(); also accepts "-" separators and bare "sqrt(r)".
  static Scalar parse(std::string_view text);

 private:
  void add_term(Radicand radicand, const mpq_class& coeff);

  std::vector<Term> terms_;
};

/// Exact total order on scalars (a < b iff sign(b - a) > 0).
bool less(const Scalar& a, const Scalar& b);
/// max over |x|, exact; zero for an empty range.
Scalar max_abs(const std::vector<Scalar>& values);

std::ostream& operator<<(std::ostream& os, const Scalar& value);

}  // namespace csrk
