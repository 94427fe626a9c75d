#include "csrk/method.hpp"

#include <algorithm>
#include <string>

#include "csrk/errors.hpp"

namespace csrk {

namespace {

std::string index_string(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

Scalar sqrt3_over_6() { return Scalar::sqrt(3) * Scalar::rational(1, 6); }

void set_entry(AlphaMatrix& a, int i, int j, const Scalar& value) {
  if (static_cast<int>(a.size()) <= i) a.resize(static_cast<std::size_t>(i) + 1);
  auto& row = a[static_cast<std::size_t>(i)];
  if (static_cast<int>(row.size()) <= j) row.resize(static_cast<std::size_t>(j) + 1);
  row[static_cast<std::size_t>(j)] = value;
}

void add_entry(AlphaMatrix& a, int i, int j, const Scalar& value) {
  if (static_cast<int>(a.size()) <= i) a.resize(static_cast<std::size_t>(i) + 1);
  auto& row = a[static_cast<std::size_t>(i)];
  if (static_cast<int>(row.size()) <= j) row.resize(static_cast<std::size_t>(j) + 1);
  row[static_cast<std::size_t>(j)] += value;
}

Scalar get_entry(const AlphaMatrix& a, int i, int j) {
  if (i < 0 || j < 0 || i >= static_cast<int>(a.size())) return Scalar();
  const auto& row = a[static_cast<std::size_t>(i)];
  if (j >= static_cast<int>(row.size())) return Scalar();
  return row[static_cast<std::size_t>(j)];
}

// Rectangular, trailing zero rows/columns removed.
AlphaMatrix canonicalize(AlphaMatrix a) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (!a[i][j].is_zero()) {
        rows = std::max(rows, i + 1);
        cols = std::max(cols, j + 1);
      }
    }
  }
  a.resize(rows);
  for (auto& row : a) row.resize(cols);
  return a;
}

}  // namespace

CsrkMethod::CsrkMethod(AlphaMatrix alpha, UnivariatePoly b, UnivariatePoly c, std::string label)
    : alpha_(canonicalize(std::move(alpha))), b_(std::move(b)), c_(std::move(c)), label_(std::move(label)) {
  if (degree_tau() > kBasisCap || degree_sigma() > kBasisCap) {
    throw Error(ErrorKind::CapExceeded, "alpha exceeds the basis cap of " + std::to_string(kBasisCap));
  }
  const int n = std::max(degree_tau(), c_.degree()) + 1;
  for (int i = 0; i < n; ++i) {
    if (this->alpha(i, 0) != c_.coeff(i)) {
      throw Error(ErrorKind::ConsistencyViolation, "column 0 of alpha differs from C at index " + std::to_string(i) +
                                                       ": " + this->alpha(i, 0).to_string() +
                                                       " != " + c_.coeff(i).to_string());
    }
  }
  const std::size_t cols = static_cast<std::size_t>(degree_sigma() + 1);
  alpha_f_.reserve(alpha_.size() * cols);
  for (const auto& row : alpha_) {
    for (const auto& v : row) alpha_f_.push_back(v.to_double());
  }
}

Scalar CsrkMethod::alpha(int i, int j) const { return get_entry(alpha_, i, j); }

bool CsrkMethod::is_normalized() const {
  return b_ == UnivariatePoly::constant(Scalar(1)) && c_ == UnivariatePoly::identity();
}

double CsrkMethod::eval_a(double tau, double sigma) const {
  const std::size_t rows = alpha_.size();
  if (rows == 0) return 0.0;
  const std::size_t cols = static_cast<std::size_t>(degree_sigma() + 1);
  std::vector<double> pt(rows), ps(cols);
  eval_legendre_all(tau, pt);
  eval_legendre_all(sigma, ps);
  double sum = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < cols; ++j) inner += alpha_f_[i * cols + j] * ps[j];
    sum += pt[i] * inner;
  }
  return sum;
}

Scalar CsrkMethod::eval_a(const Scalar& tau, const Scalar& sigma) const {
  Scalar sum;
  for (int i = 0; i <= degree_tau(); ++i) {
    const Scalar pt = eval_legendre(i, tau);
    Scalar inner;
    for (int j = 0; j <= degree_sigma(); ++j) {
      const Scalar& a = alpha_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!a.is_zero()) inner += a * eval_legendre(j, sigma);
    }
    sum += pt * inner;
  }
  return sum;
}

Coeffs CsrkMethod::column(int j) const {
  Coeffs out;
  if (j < 0 || j > degree_sigma()) return out;
  out.reserve(alpha_.size());
  for (const auto& row : alpha_) out.push_back(row[static_cast<std::size_t>(j)]);
  basis::trim(out);
  return out;
}

Coeffs CsrkMethod::row(int i) const {
  if (i < 0 || i > degree_tau()) return {};
  Coeffs out = alpha_[static_cast<std::size_t>(i)];
  basis::trim(out);
  return out;
}

CsrkMethod new_method(AlphaMatrix alpha, UnivariatePoly b, UnivariatePoly c, std::string label) {
  return CsrkMethod(std::move(alpha), std::move(b), std::move(c), std::move(label));
}

AlphaMatrix to_dense(const SparseAlpha& entries) {
  AlphaMatrix a;
  for (const auto& [ij, v] : entries) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0) throw Error(ErrorKind::InvalidArgument, "negative index " + index_string(i, j));
    if (i > kBasisCap || j > kBasisCap) {
      throw Error(ErrorKind::CapExceeded, "entry " + index_string(i, j) + " exceeds the basis cap");
    }
    set_entry(a, i, j, v);
  }
  return a;
}

CsrkMethod normalized_method(AlphaMatrix alpha, std::string label) {
  return CsrkMethod(std::move(alpha), UnivariatePoly::constant(Scalar(1)), UnivariatePoly::identity(),
                    std::move(label));
}

CsrkMethod construct_order_by_order(int target_order, const SparseAlpha& free) {
  if (target_order < 2 || target_order > 4) {
    throw Error(ErrorKind::InvalidArgument, "target order must be 2, 3 or 4");
  }
  for (const auto& [ij, v] : free) {
    if (ij.second < 1) {
      throw Error(ErrorKind::InvalidArgument, "free entry " + index_string(ij.first, ij.second) + " must have j >= 1");
    }
  }
  AlphaMatrix a = to_dense(free);
  set_entry(a, 0, 0, Scalar::rational(1, 2));
  set_entry(a, 1, 0, sqrt3_over_6());
  if (target_order >= 3) set_entry(a, 0, 1, -sqrt3_over_6());
  if (target_order == 4) {
    set_entry(a, 1, 1, Scalar());
    set_entry(a, 0, 2, Scalar());
    Scalar bilinear;
    const int extent = static_cast<int>(std::max(a.size(), a[0].size()));
    for (int i = 3; i < extent; ++i) bilinear += get_entry(a, 0, i) * get_entry(a, i, 1);
    if (!bilinear.is_zero()) {
      throw Error(ErrorKind::Order4ConstraintViolation,
                  "sum_{i>=3} alpha_0i alpha_i1 = " + bilinear.to_string() + " must vanish for order 4");
    }
  }
  return normalized_method(std::move(a), "order-by-order p=" + std::to_string(target_order));
}

CsrkMethod construct_simplifying(int alpha_level, int beta_level, const SparseAlpha& free) {
  if (alpha_level < 1 || beta_level < 1) {
    throw Error(ErrorKind::InvalidArgument, "simplifying levels must be >= 1");
  }
  for (const auto& [ij, v] : free) {
    if (ij.first < beta_level || ij.second < alpha_level) {
      throw Error(ErrorKind::InvalidArgument, "free entry " + index_string(ij.first, ij.second) +
                                                  " outside i >= " + std::to_string(beta_level) +
                                                  ", j >= " + std::to_string(alpha_level));
    }
  }
  const int n1 = std::max(alpha_level - 1, beta_level - 2);
  const int n2 = std::max(alpha_level - 2, beta_level - 1);
  if (n1 + 1 > kBasisCap || n2 + 1 > kBasisCap) {
    throw Error(ErrorKind::CapExceeded, "simplifying levels exceed the basis cap");
  }
  AlphaMatrix a = to_dense(free);
  add_entry(a, 0, 0, Scalar::rational(1, 2));
  for (int k = 0; k <= n1; ++k) add_entry(a, k + 1, k, xi(k + 1));
  for (int k = 0; k <= n2; ++k) add_entry(a, k, k + 1, -xi(k + 1));
  return normalized_method(std::move(a), "simplifying alpha=" + std::to_string(alpha_level) +
                                             " beta=" + std::to_string(beta_level));
}

CsrkMethod construct_symplectic(const SparseAlpha& skew) {
  AlphaMatrix a;
  set_entry(a, 0, 0, Scalar::rational(1, 2));
  set_entry(a, 1, 0, sqrt3_over_6());
  set_entry(a, 0, 1, -sqrt3_over_6());
  for (const auto& [ij, v] : skew) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0 || i > kBasisCap || j > kBasisCap) {
      throw Error(ErrorKind::InvalidArgument, "index " + index_string(i, j) + " out of range");
    }
    if (i == j) {
      if (v.is_zero()) continue;
      throw Error(ErrorKind::SkewConflict, "diagonal entry " + index_string(i, j) + " must be zero");
    }
    if (i > j) {
      throw Error(ErrorKind::SkewConflict,
                  "entry " + index_string(i, j) + " is derived; supply " + index_string(j, i) + " instead");
    }
    if (i == 0 && j == 1) {
      if (v != -sqrt3_over_6()) {
        throw Error(ErrorKind::SkewConflict, "alpha_(0,1) is fixed to -sqrt(3)/6 by consistency, got " + v.to_string());
      }
      continue;
    }
    set_entry(a, i, j, v);
    set_entry(a, j, i, -v);
  }
  return normalized_method(std::move(a), "symplectic");
}

CsrkMethod construct_symmetric(const SparseAlpha& odd) {
  AlphaMatrix a;
  set_entry(a, 0, 0, Scalar::rational(1, 2));
  set_entry(a, 1, 0, sqrt3_over_6());
  for (const auto& [ij, v] : odd) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0 || i > kBasisCap || j > kBasisCap) {
      throw Error(ErrorKind::InvalidArgument, "index " + index_string(i, j) + " out of range");
    }
    if ((i + j) % 2 == 0) {
      throw Error(ErrorKind::ParityViolation, "entry " + index_string(i, j) + " has even index sum");
    }
    set_entry(a, i, j, v);
  }
  return normalized_method(std::move(a), "symmetric");
}

EpLegendreMethod construct_ep_legendre(const EpSpec& spec) {
  if (spec.generators) {
    throw Error(ErrorKind::InvalidArgument, "Legendre energy-preserving family takes no generators");
  }
  if (spec.omegas.empty() || spec.omegas[0] != Scalar(1)) {
    throw Error(ErrorKind::InvalidArgument, "omega_0 must equal 1");
  }
  if (static_cast<int>(spec.omegas.size()) > kBasisCap) {
    throw Error(ErrorKind::CapExceeded, "too many omega weights for the basis cap");
  }
  AlphaMatrix a;
  for (std::size_t k = 0; k < spec.omegas.size(); ++k) {
    if (spec.omegas[k].is_zero()) continue;
    const Coeffs integral = antiderivative(UnivariatePoly::basis(static_cast<int>(k)).coeffs());
    for (std::size_t i = 0; i < integral.size(); ++i) {
      add_entry(a, static_cast<int>(i), static_cast<int>(k), spec.omegas[k] * integral[i]);
    }
  }
  auto omega = [&](int k) {
    return k < static_cast<int>(spec.omegas.size()) ? spec.omegas[static_cast<std::size_t>(k)] : Scalar();
  };
  int kappa = 0;
  while (omega(kappa) == Scalar(1)) ++kappa;

  EpLegendreMethod out{normalized_method(std::move(a), "ep-legendre"), kappa, 2 * kappa, false, 2 * kappa + 2};
  const long k = kappa;
  const Scalar lhs = omega(kappa) * Scalar::rational(1, 2 * k - 1) - omega(kappa + 1) * Scalar::rational(1, 2 * k + 1);
  out.tuned = lhs == Scalar::rational(2, 4 * k * k - 1);
  if (out.tuned) out.conjugate_symplectic_order = 2 * kappa + 4;
  return out;
}

EpGeneralMethod construct_ep_general(const EpSpec& spec) {
  if (!spec.generators) throw Error(ErrorKind::InvalidArgument, "general energy-preserving family needs generators");
  const auto& gens = *spec.generators;
  if (gens.size() != spec.omegas.size()) {
    throw Error(ErrorKind::InvalidArgument, "one generator per omega weight is required");
  }
  AlphaMatrix a;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (spec.omegas[k].is_zero() || gens[k].is_zero()) continue;
    const UnivariatePoly integral = antiderivative(gens[k]);
    for (int j = 0; j <= gens[k].degree(); ++j) {
      const Scalar w = spec.omegas[k] * gens[k].coeff(j);
      if (w.is_zero()) continue;
      for (int i = 0; i <= integral.degree(); ++i) add_entry(a, i, j, w * integral.coeff(i));
    }
  }
  Coeffs c;
  for (const auto& row : a) c.push_back(row.empty() ? Scalar() : row[0]);
  UnivariatePoly c_poly(std::move(c));
  const bool is_tau = c_poly == UnivariatePoly::identity();
  return EpGeneralMethod{
      CsrkMethod(std::move(a), UnivariatePoly::constant(Scalar(1)), std::move(c_poly), "ep-general"), is_tau};
}

}  // namespace csrk
