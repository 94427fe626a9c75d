#include "csrk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "csrk/errors.hpp"

namespace csrk {

namespace {

const Scalar& coeff_at(const Coeffs& v, int i) {
  static const Scalar zero;
  return (i >= 0 && i < static_cast<int>(v.size())) ? v[static_cast<std::size_t>(i)] : zero;
}

// sum_ij alpha_ij u_i v_j
Scalar bilinear(const CsrkMethod& m, const Coeffs& u, const Coeffs& v) {
  Scalar sum;
  for (int i = 0; i <= m.degree_tau(); ++i) {
    const Scalar& ui = coeff_at(u, i);
    if (ui.is_zero()) continue;
    Scalar inner;
    for (int j = 0; j <= m.degree_sigma(); ++j) {
      const Scalar& vj = coeff_at(v, j);
      if (!vj.is_zero()) inner += m.alpha()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * vj;
    }
    sum += ui * inner;
  }
  return sum;
}

int staged_order(const std::array<Scalar, 8>& r) {
  auto zero = [&](std::initializer_list<int> ids) {
    return std::all_of(ids.begin(), ids.end(), [&](int k) { return r[static_cast<std::size_t>(k - 1)].is_zero(); });
  };
  if (!zero({1})) return 0;
  if (!zero({2})) return 1;
  if (!zero({3, 4})) return 2;
  if (!zero({5, 6, 7, 8})) return 3;
  return 4;
}

int nonneg_degree(const UnivariatePoly& p) { return std::max(p.degree(), 0); }

bool all_zero(const Coeffs& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Coeffs subtract(Coeffs a, const Coeffs& b) {
  if (b.size() > a.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  basis::trim(a);
  return a;
}

Coeffs scale(Coeffs a, const Scalar& s) {
  for (auto& v : a) v *= s;
  basis::trim(a);
  return a;
}

Scalar max_abs_matrix(const AlphaMatrix& a) {
  std::vector<Scalar> flat;
  for (const auto& row : a) flat.insert(flat.end(), row.begin(), row.end());
  return max_abs(flat);
}

AlphaMatrix zero_matrix(std::size_t rows, std::size_t cols) { return AlphaMatrix(rows, Coeffs(cols)); }

}  // namespace

OrderConditions order_conditions_general(const CsrkMethod& m) {
  const Coeffs& b = m.b().coeffs();
  const Coeffs& c = m.c().coeffs();
  const Coeffs c2 = basis::power(c, 2);
  const Coeffs c3 = basis::power(c, 3);
  const Coeffs bc = basis::multiply(b, c);

  OrderConditions out;
  auto& r = out.residuals;
  r[0] = coeff_at(b, 0) - Scalar(1);
  r[1] = inner_product(b, c) - Scalar::rational(1, 2);
  r[2] = inner_product(b, c2) - Scalar::rational(1, 3);
  r[3] = bilinear(m, b, c) - Scalar::rational(1, 6);
  r[4] = inner_product(b, c3) - Scalar::rational(1, 4);
  r[5] = bilinear(m, bc, c) - Scalar::rational(1, 8);
  r[6] = bilinear(m, b, c2) - Scalar::rational(1, 12);

  // (8): sum_j (sum_i b_i alpha_ij) (sum_l alpha_jl c_l)
  Scalar triple;
  for (int j = 0; j <= std::min(m.degree_sigma(), m.degree_tau()); ++j) {
    Scalar left;
    for (int i = 0; i <= m.degree_tau(); ++i) {
      if (!coeff_at(b, i).is_zero()) left += coeff_at(b, i) * m.alpha(i, j);
    }
    if (left.is_zero()) continue;
    Scalar right;
    for (int l = 0; l <= m.degree_sigma(); ++l) {
      if (!coeff_at(c, l).is_zero()) right += m.alpha(j, l) * coeff_at(c, l);
    }
    triple += left * right;
  }
  r[7] = triple - Scalar::rational(1, 24);
  out.order = staged_order(r);
  return out;
}

OrderConditions order_conditions_normalized(const CsrkMethod& m) {
  if (!m.is_normalized()) {
    throw Error(ErrorKind::HypothesisViolation, "reduced order relations need B == 1 and C == tau");
  }
  const Scalar s3 = Scalar::sqrt(3);
  const Scalar s5 = Scalar::sqrt(5);
  auto a = [&](int i, int j) { return m.alpha(i, j); };

  OrderConditions out;
  auto& r = out.residuals;
  r[3] = Scalar::rational(1, 2) * a(0, 0) + s3 * Scalar::rational(1, 6) * a(0, 1) - Scalar::rational(1, 6);
  r[5] = Scalar::rational(1, 4) * a(0, 0) + s3 * Scalar::rational(1, 12) * a(1, 0) +
         s3 * Scalar::rational(1, 12) * a(0, 1) + Scalar::rational(1, 12) * a(1, 1) - Scalar::rational(1, 8);
  r[6] = Scalar::rational(1, 3) * a(0, 0) + s3 * Scalar::rational(1, 6) * a(0, 1) +
         s5 * Scalar::rational(1, 30) * a(0, 2) - Scalar::rational(1, 12);
  Scalar s0, s1;
  for (int i = 0; i <= m.degree_sigma(); ++i) {
    const Scalar a0i = a(0, i);
    if (a0i.is_zero()) continue;
    s0 += a0i * a(i, 0);
    s1 += a0i * a(i, 1);
  }
  r[7] = Scalar::rational(1, 2) * s0 + s3 * Scalar::rational(1, 6) * s1 - Scalar::rational(1, 24);
  out.order = staged_order(r);
  return out;
}

OrderConditions check_order_conditions(const CsrkMethod& m) {
  return m.is_normalized() ? order_conditions_normalized(m) : order_conditions_general(m);
}

// ---------------------------------------------------------------------------

Scalar simplifying_b_residual(const CsrkMethod& m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "simplifying index must be >= 1");
  return inner_product(m.b().coeffs(), basis::power(m.c().coeffs(), k - 1)) - Scalar::rational(1, k);
}

Coeffs simplifying_c_residual(const CsrkMethod& m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "simplifying index must be >= 1");
  const Coeffs moments = basis::power(m.c().coeffs(), k - 1);
  Coeffs lhs(static_cast<std::size_t>(m.degree_tau() + 1));
  for (int i = 0; i <= m.degree_tau(); ++i) {
    for (int j = 0; j <= m.degree_sigma(); ++j) {
      const Scalar& mj = coeff_at(moments, j);
      if (!mj.is_zero()) lhs[static_cast<std::size_t>(i)] += m.alpha(i, j) * mj;
    }
  }
  basis::trim(lhs);
  return subtract(lhs, scale(basis::power(m.c().coeffs(), k), Scalar::rational(1, k)));
}

Coeffs simplifying_d_residual(const CsrkMethod& m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "simplifying index must be >= 1");
  const Coeffs& b = m.b().coeffs();
  const Coeffs weight = basis::multiply(b, basis::power(m.c().coeffs(), k - 1));
  Coeffs lhs(static_cast<std::size_t>(m.degree_sigma() + 1));
  for (int j = 0; j <= m.degree_sigma(); ++j) {
    for (int i = 0; i <= m.degree_tau(); ++i) {
      const Scalar& wi = coeff_at(weight, i);
      if (!wi.is_zero()) lhs[static_cast<std::size_t>(j)] += m.alpha(i, j) * wi;
    }
  }
  basis::trim(lhs);
  const Coeffs b_ck = basis::multiply(b, basis::power(m.c().coeffs(), k));
  return subtract(lhs, scale(subtract(b, b_ck), Scalar::rational(1, k)));
}

SimplifyingLevels check_simplifying(const CsrkMethod& m, int cap) {
  if (cap < 0 || cap > kBasisCap) throw Error(ErrorKind::InvalidArgument, "level cap must lie in [0, basis cap]");
  const int deg_b = nonneg_degree(m.b());
  const int deg_c = nonneg_degree(m.c());
  auto fits = [](int degree) { return degree <= kWorkDegreeCap; };

  SimplifyingLevels out;
  if (m.is_normalized()) {
    out.rho_unbounded = true;
    out.rho = 2 * cap;
  } else {
    for (int k = 1; k <= 2 * cap && fits(deg_b + (k - 1) * deg_c); ++k) {
      if (!simplifying_b_residual(m, k).is_zero()) break;
      out.rho = k;
    }
  }
  for (int k = 1; k <= cap && fits(k * deg_c); ++k) {
    if (!all_zero(simplifying_c_residual(m, k))) break;
    out.eta = k;
  }
  for (int k = 1; k <= cap && fits(deg_b + k * deg_c); ++k) {
    if (!all_zero(simplifying_d_residual(m, k))) break;
    out.zeta = k;
  }
  return out;
}

int guaranteed_order(const SimplifyingLevels& levels, int cap) {
  const int rho = levels.rho_unbounded ? 2 * cap : levels.rho;
  return std::min({rho, 2 * levels.eta + 2, levels.eta + levels.zeta + 1});
}

int guaranteed_order(const CsrkMethod& m, int cap) { return guaranteed_order(check_simplifying(m, cap), cap); }

// ---------------------------------------------------------------------------

AlphaMatrix symplectic_defect(const CsrkMethod& m) {
  const Coeffs& b = m.b().coeffs();
  // X[i][j]: coefficient of P_i(t) P_j(s) in B_t A(t, s).
  std::vector<Coeffs> columns;
  std::size_t n = b.size();
  for (int j = 0; j <= m.degree_sigma(); ++j) {
    columns.push_back(basis::multiply(b, m.column(j)));
    n = std::max({n, columns.back().size(), static_cast<std::size_t>(j) + 1});
  }
  AlphaMatrix out = zero_matrix(n, n);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t i = 0; i < columns[j].size(); ++i) {
      out[i][j] += columns[j][i];
      out[j][i] += columns[j][i];
    }
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i][j] -= b[i] * b[j];
  }
  return out;
}

Scalar symplectic_residual(const CsrkMethod& m) { return max_abs_matrix(symplectic_defect(m)); }

AlphaMatrix symmetric_defect(const CsrkMethod& m) {
  const Coeffs& b = m.b().coeffs();
  if (coeff_at(b, 0) != Scalar(1)) {
    throw Error(ErrorKind::PreconditionViolation, "symmetry condition needs int_0^1 B = 1");
  }
  const std::size_t rows = static_cast<std::size_t>(std::max(m.degree_tau() + 1, 1));
  const std::size_t cols = std::max(static_cast<std::size_t>(m.degree_sigma() + 1), b.size());
  AlphaMatrix out = zero_matrix(rows, cols);
  for (int i = 0; i <= m.degree_tau(); ++i) {
    for (int j = 0; j <= m.degree_sigma(); ++j) {
      // P_k(1 - x) = (-1)^k P_k(x)
      if ((i + j) % 2 == 0) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Scalar(2) * m.alpha(i, j);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) out[0][j] -= b[j];
  return out;
}

Scalar symmetric_residual(const CsrkMethod& m) { return max_abs_matrix(symmetric_defect(m)); }

EnergyDefects energy_preserving_defects(const CsrkMethod& m) {
  EnergyDefects out;
  const std::size_t n = static_cast<std::size_t>(std::max({m.degree_tau(), m.degree_sigma(), 0}) + 1);
  AlphaMatrix g = zero_matrix(n, n);
  for (int j = 0; j <= m.degree_sigma(); ++j) {
    const Coeffs d = derivative(m.column(j));
    for (std::size_t k = 0; k < d.size(); ++k) g[k][static_cast<std::size_t>(j)] = d[k];
  }
  out.derivative_asymmetry = zero_matrix(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) out.derivative_asymmetry[a][b] = g[a][b] - g[b][a];
  }

  const Coeffs& bcoef = m.b().coeffs();
  const std::size_t cols = std::max(static_cast<std::size_t>(m.degree_sigma() + 1), bcoef.size());
  out.at_zero.assign(cols, Scalar());
  out.at_one.assign(cols, Scalar());
  for (int i = 0; i <= m.degree_tau(); ++i) {
    const Scalar root = Scalar::sqrt(static_cast<std::uint64_t>(2 * i + 1));
    const Scalar at0 = (i % 2 == 0) ? root : -root;
    for (int j = 0; j <= m.degree_sigma(); ++j) {
      const Scalar a = m.alpha(i, j);
      if (a.is_zero()) continue;
      out.at_zero[static_cast<std::size_t>(j)] += a * at0;
      out.at_one[static_cast<std::size_t>(j)] += a * root;
    }
  }
  for (std::size_t j = 0; j < bcoef.size(); ++j) out.at_one[j] -= bcoef[j];
  return out;
}

std::array<Scalar, 3> energy_preserving_residual(const CsrkMethod& m) {
  const EnergyDefects d = energy_preserving_defects(m);
  return {max_abs_matrix(d.derivative_asymmetry), max_abs(d.at_zero), max_abs(d.at_one)};
}

Epm2Check check_epm2_condition(const EpSpec& spec, int eta) {
  if (!spec.generators) throw Error(ErrorKind::PreconditionViolation, "generator coefficients are required");
  if (eta < 0) throw Error(ErrorKind::InvalidArgument, "eta must be >= 0");
  const auto& gens = *spec.generators;
  if (gens.size() != spec.omegas.size()) {
    throw Error(ErrorKind::InvalidArgument, "one generator per omega weight is required");
  }
  int max_degree = -1;
  for (const auto& g : gens) max_degree = std::max(max_degree, g.degree());
  const int j_end = std::max(eta - 1, max_degree);
  for (int i = 0; i < eta; ++i) {
    for (int j = 0; j <= j_end; ++j) {
      Scalar sum;
      for (std::size_t k = 0; k < gens.size(); ++k) sum += spec.omegas[k] * gens[k].coeff(i) * gens[k].coeff(j);
      const Scalar target = (i == j) ? Scalar(1) : Scalar();
      if (sum != target) return {false, std::make_pair(i, j)};
    }
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------

namespace {

// int_0^1 |sum_j r_j P_j(s)| ds, splitting [0,1] at sign changes.
double abs_integral(const std::vector<double>& row) {
  const std::vector<double> anti = antiderivative_series(row);
  auto p = [&](double s) { return eval_series(row, s); };
  auto big_p = [&](double s) { return eval_series(anti, s); };

  constexpr int kSamples = 512;
  std::vector<double> breaks{0.0};
  double prev_s = 0.0;
  double prev_v = p(0.0);
  for (int k = 1; k <= kSamples; ++k) {
    const double s = static_cast<double>(k) / kSamples;
    const double v = p(s);
    if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
      double lo = prev_s, hi = s, flo = prev_v;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    if (v != 0.0) {
      prev_s = s;
      prev_v = v;
    }
  }
  breaks.push_back(1.0);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) total += std::abs(big_p(breaks[k + 1]) - big_p(breaks[k]));
  return total;
}

}  // namespace

double stage_operator_norm(const CsrkMethod& m) {
  if (m.alpha().empty()) return 0.0;
  const int rows = m.degree_tau() + 1;
  const int cols = m.degree_sigma() + 1;
  std::vector<std::vector<double>> a(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a[i][j] = m.alpha(i, j).to_double();
  }
  auto g = [&](double tau) {
    std::vector<double> pt(static_cast<std::size_t>(rows));
    eval_legendre_all(tau, pt);
    std::vector<double> row(static_cast<std::size_t>(cols), 0.0);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) row[j] += pt[i] * a[i][j];
    }
    return abs_integral(row);
  };

  constexpr int kTauSamples = 64;
  std::vector<double> taus(kTauSamples), values(kTauSamples);
  for (int k = 0; k < kTauSamples; ++k) {
    taus[k] = static_cast<double>(k) / (kTauSamples - 1);
    values[k] = g(taus[k]);
  }
  double best = *std::max_element(values.begin(), values.end());
  // Golden-section refinement around every sampled local maximum.
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int k = 0; k < kTauSamples; ++k) {
    const bool left_ok = k == 0 || values[k] >= values[k - 1];
    const bool right_ok = k == kTauSamples - 1 || values[k] >= values[k + 1];
    if (!left_ok || !right_ok) continue;
    double lo = taus[std::max(k - 1, 0)];
    double hi = taus[std::min(k + 1, kTauSamples - 1)];
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > 1e-7) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = g(x1);
      }
    }
    best = std::max({best, f1, f2, g(0.5 * (lo + hi))});
  }
  return best;
}

double stage_contraction_bound(const CsrkMethod& m, double lipschitz) {
  if (!(lipschitz > 0.0)) throw Error(ErrorKind::InvalidArgument, "Lipschitz constant must be positive");
  const double norm = stage_operator_norm(m);
  if (norm == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (lipschitz * norm);
}

PropertyReport verify_method(const CsrkMethod& m, int cap) {
  PropertyReport r;
  r.order_conditions = check_order_conditions(m);
  r.breve = check_simplifying(m, cap);
  r.level_cap = cap;
  r.guaranteed_order = guaranteed_order(r.breve, cap);
  r.symplectic_residual = symplectic_residual(m);
  if (m.b().coeff(0) == Scalar(1)) r.symmetric_residual = symmetric_residual(m);
  r.energy_residuals = energy_preserving_residual(m);
  r.symplectic = r.symplectic_residual.is_zero();
  r.symmetric = r.symmetric_residual && r.symmetric_residual->is_zero();
  r.energy_preserving =
      std::all_of(r.energy_residuals.begin(), r.energy_residuals.end(), [](const Scalar& s) { return s.is_zero(); });
  r.h_bound_per_unit_l = stage_contraction_bound(m, 1.0);
  return r;
}

}  // namespace csrk
