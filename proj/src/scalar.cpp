#include "csrk/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <sstream>

#include <mpfr.h>

#include "csrk/errors.hpp"

namespace csrk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConsistencyViolation: return "ConsistencyViolation";
    case ErrorKind::Order4ConstraintViolation: return "Order4ConstraintViolation";
    case ErrorKind::SkewConflict: return "SkewConflict";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
      return 2;
    case ErrorKind::NonConvergence:
    case ErrorKind::NonFinite:
      return 3;
    default:
      return 1;
  }
}

namespace {

constexpr std::uint64_t kMaxFactorable = 1'000'000'000'000ULL;

// n = k^2 * r with r square-free; returns {k, r}.
std::pair<std::uint64_t, std::uint64_t> split_square(std::uint64_t n) {
  if (n > kMaxFactorable) {
    throw Error(ErrorKind::InvalidArgument, "radicand too large to factor: " + std::to_string(n));
  }
  std::uint64_t k = 1;
  std::uint64_t r = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) k *= p;
    if (e % 2 == 1) r *= p;
  }
  r *= n;
  return {k, r};
}

mpq_class to_mpq(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return mpq_class(z);
}

// RAII wrapper for an mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(value_, prec); }
  ~Mpfr() { mpfr_clear(value_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return value_; }

 private:
  mpfr_t value_;
};

// Evaluates the sum of terms at increasing precision until the relative
// cancellation is resolved; calls sink(mpfr_ptr) with the final value.
template <class Sink>
void evaluate(const std::vector<Scalar::Term>& terms, Sink&& sink) {
  for (mpfr_prec_t prec = 128;; prec *= 2) {
    Mpfr sum(prec), mag(prec), term(prec), root(prec);
    mpfr_set_zero(sum.get(), 1);
    mpfr_set_zero(mag.get(), 1);
    for (const auto& [radicand, coeff] : terms) {
      mpfr_set_q(term.get(), coeff.get_mpq_t(), MPFR_RNDN);
      if (radicand != 1) {
        mpfr_set_q(root.get(), to_mpq(radicand).get_mpq_t(), MPFR_RNDN);
        mpfr_sqrt(root.get(), root.get(), MPFR_RNDN);
        mpfr_mul(term.get(), term.get(), root.get(), MPFR_RNDN);
      }
      mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
      mpfr_abs(term.get(), term.get(), MPFR_RNDN);
      mpfr_add(mag.get(), mag.get(), term.get(), MPFR_RNDN);
    }
    // Accept once |sum| clearly exceeds the accumulated rounding error.
    mpfr_mul_2si(mag.get(), mag.get(), -(static_cast<long>(prec) - 16), MPFR_RNDN);
    if (terms.size() <= 1 || mpfr_cmpabs(sum.get(), mag.get()) > 0 || prec >= (1 << 16)) {
      sink(sum.get());
      return;
    }
  }
}

}  // namespace

Scalar::Scalar(int value) : Scalar(static_cast<long>(value)) {}

Scalar::Scalar(long value) {
  if (value != 0) terms_.emplace_back(1, mpq_class(value));
}

Scalar::Scalar(const mpq_class& value) {
  if (value != 0) {
    mpq_class q(value);
    q.canonicalize();
    terms_.emplace_back(1, std::move(q));
  }
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::sqrt(std::uint64_t n) {
  Scalar out;
  if (n == 0) return out;
  const auto [k, r] = split_square(n);
  out.terms_.emplace_back(r, to_mpq(k));
  return out;
}

Scalar Scalar::sqrt(const mpq_class& value) {
  if (value < 0) throw Error(ErrorKind::InvalidArgument, "sqrt of negative rational");
  if (value == 0) return Scalar();
  // sqrt(p/q) = sqrt(p*q)/q
  mpz_class pq = value.get_num() * value.get_den();
  if (!pq.fits_ulong_p()) throw Error(ErrorKind::InvalidArgument, "radicand too large");
  Scalar out = Scalar::sqrt(static_cast<std::uint64_t>(pq.get_ui()));
  out *= Scalar(mpq_class(mpz_class(1), value.get_den()));
  return out;
}

bool Scalar::is_rational() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1);
}

mpq_class Scalar::rational_part() const {
  if (!terms_.empty() && terms_[0].first == 1) return terms_[0].second;
  return mpq_class(0);
}

void Scalar::add_term(Radicand radicand, const mpq_class& coeff) {
  if (coeff == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), radicand,
                             [](const Term& t, Radicand r) { return t.first < r; });
  if (it != terms_.end() && it->first == radicand) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term(radicand, coeff));
  }
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  for (const auto& [r, c] : rhs.terms_) add_term(r, c);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  for (const auto& [r, c] : rhs.terms_) add_term(r, -c);
  return *this;
}

Scalar operator*(const Scalar& lhs, const Scalar& rhs) {
  Scalar out;
  if (lhs.is_zero() || rhs.is_zero()) return out;
  for (const auto& [ra, ca] : lhs.terms_) {
    for (const auto& [rb, cb] : rhs.terms_) {
      // sqrt(ra)*sqrt(rb) = g*sqrt((ra/g)*(rb/g)), g = gcd(ra, rb); square-free stays square-free.
      const std::uint64_t g = std::gcd(ra, rb);
      std::uint64_t r = 0;
      if (__builtin_mul_overflow(ra / g, rb / g, &r)) {
        throw Error(ErrorKind::CapExceeded, "radicand product overflows 64 bits");
      }
      out.add_term(r, ca * cb * to_mpq(g));
    }
  }
  return out;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  *this = *this * rhs;
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  if (rhs.terms_.size() != 1) {
    throw Error(ErrorKind::InvalidArgument, "division only by a single-radical scalar");
  }
  // 1/(q*sqrt(r)) = sqrt(r)/(q*r)
  const auto& [r, q] = rhs.terms_[0];
  Scalar inverse;
  inverse.terms_.emplace_back(r, mpq_class(1) / (q * to_mpq(r)));
  *this *= inverse;
  return *this;
}

int Scalar::sign() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1) return sgn(terms_[0].second);
  int s = 0;
  evaluate(terms_, [&](mpfr_ptr v) { s = mpfr_sgn(v); });
  return s;
}

double Scalar::to_double() const {
  if (terms_.empty()) return 0.0;
  double d = 0.0;
  evaluate(terms_, [&](mpfr_ptr v) { d = mpfr_get_d(v, MPFR_RNDN); });
  return d;
}

std::string Scalar::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& [r, c] = terms_[i];
    if (i > 0) out += '+';
    out += c.get_str();
    if (r != 1) out += "*sqrt(" + std::to_string(r) + ")";
  }
  return out;
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char ch) {
    skip_ws();
    if (pos < text.size() && text[pos] == ch) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat(std::string_view word) {
    skip_ws();
    if (text.substr(pos, word.size()) == word) {
      pos += word.size();
      return true;
    }
    return false;
  }
  std::string digits() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected digits");
    return std::string(text.substr(start, pos - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError,
                "cannot parse scalar '" + std::string(text) + "' at " + std::to_string(pos) + ": " + what);
  }
};

Scalar parse_sqrt(Cursor& cur) {
  if (!cur.eat('(')) cur.fail("expected '('");
  const std::string n = cur.digits();
  if (!cur.eat(')')) cur.fail("expected ')'");
  mpz_class z(n);
  if (!z.fits_ulong_p()) cur.fail("radicand too large");
  return Scalar::sqrt(static_cast<std::uint64_t>(z.get_ui()));
}

// factor := integer | "sqrt(" integer ")"
// term   := factor (("*" | "/") factor)*
Scalar parse_term(Cursor& cur) {
  auto factor = [&]() -> Scalar {
    if (cur.eat("sqrt")) return parse_sqrt(cur);
    return Scalar(mpq_class(mpz_class(cur.digits())));
  };
  Scalar value = factor();
  for (;;) {
    if (cur.eat('*')) {
      value *= factor();
    } else if (cur.eat('/')) {
      Scalar d = factor();
      if (d.is_zero()) cur.fail("division by zero");
      value /= d;
    } else {
      return value;
    }
  }
}

}  // namespace

Scalar Scalar::parse(std::string_view text) {
  Cursor cur{text};
  Scalar total;
  bool first = true;
  for (;;) {
    cur.skip_ws();
    if (cur.pos >= text.size()) {
      if (first) cur.fail("empty input");
      break;
    }
    bool negative = false;
    if (!first) {
      if (cur.eat('+')) {
      } else if (cur.eat('-')) {
        negative = true;
      } else {
        cur.fail("expected '+' or '-'");
      }
    }
    while (true) {
      if (cur.eat('-')) {
        negative = !negative;
      } else if (!cur.eat('+')) {
        break;
      }
    }
    Scalar term = parse_term(cur);
    total += negative ? -term : term;
    first = false;
  }
  return total;
}

bool less(const Scalar& a, const Scalar& b) { return (b - a).sign() > 0; }

Scalar max_abs(const std::vector<Scalar>& values) {
  Scalar best;
  for (const auto& v : values) {
    Scalar a = v.abs();
    if (less(best, a)) best = std::move(a);
  }
  return best;
}

std::ostream& operator<<(std::ostream& os, const Scalar& value) { return os << value.to_string(); }

}  // namespace csrk
