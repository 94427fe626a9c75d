#include "csrk/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csrk/errors.hpp"
#include "csrk/verify.hpp"

namespace csrk {

namespace {

using ld = long double;

// Legendre P_n and P_{n-1} on [-1,1].
std::pair<ld, ld> legendre_pair(int n, ld x) {
  ld p0 = 1.0L, p1 = x;
  if (n == 0) return {p0, 0.0L};
  for (int k = 1; k < n; ++k) {
    const ld p2 = ((2.0L * k + 1.0L) * x * p1 - k * p0) / (k + 1.0L);
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

void check_stages(int s, int lo) {
  if (s < lo || s > kMaxQuadratureStages) {
    throw Error(ErrorKind::InvalidArgument, "stage count " + std::to_string(s) + " outside [" + std::to_string(lo) +
                                                ", " + std::to_string(kMaxQuadratureStages) + "]");
  }
}

Quadrature finish(std::vector<ld> x, std::vector<ld> w, int order, std::string id) {
  // x ascending on [-1,1] -> [0,1]
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  Quadrature q;
  for (auto i : idx) {
    q.nodes.push_back(static_cast<double>((1.0L + x[i]) / 2.0L));
    q.weights.push_back(static_cast<double>(w[i] / 2.0L));
  }
  q.order = order;
  q.id = std::move(id);
  return q;
}

}  // namespace

Quadrature gauss_legendre(int s) {
  check_stages(s, 1);
  std::vector<ld> x(static_cast<std::size_t>(s)), w(static_cast<std::size_t>(s));
  const ld pi = std::numbers::pi_v<long double>;
  for (int i = 0; i < s; ++i) {
    ld r = std::cos(pi * (i + 0.75L) / (s + 0.5L));
    ld dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = legendre_pair(s, r);
      dp = s * (r * p - pm1) / (r * r - 1.0L);
      const ld step = p / dp;
      r -= step;
      if (std::abs(step) < 1e-19L) break;
    }
    const auto [p, pm1] = legendre_pair(s, r);
    dp = s * (r * p - pm1) / (r * r - 1.0L);
    x[static_cast<std::size_t>(i)] = r;
    w[static_cast<std::size_t>(i)] = 2.0L / ((1.0L - r * r) * dp * dp);
  }
  return finish(std::move(x), std::move(w), 2 * s, "gauss-" + std::to_string(s));
}

Quadrature lobatto(int s) {
  check_stages(s, 2);
  const int n = s - 1;
  std::vector<ld> x{-1.0L, 1.0L};
  const ld pi = std::numbers::pi_v<long double>;
  // interior nodes: roots of P_n'
  for (int k = 1; k < n; ++k) {
    ld r = -std::cos(pi * k / n);
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = legendre_pair(n, r);
      const ld d1 = n * (r * p - pm1) / (r * r - 1.0L);
      const ld d2 = (2.0L * r * d1 - n * (n + 1.0L) * p) / (1.0L - r * r);
      const ld step = d1 / d2;
      r -= step;
      if (std::abs(step) < 1e-19L) break;
    }
    x.push_back(r);
  }
  std::vector<ld> w;
  for (ld r : x) {
    const ld p = legendre_pair(n, r).first;
    w.push_back(2.0L / (static_cast<ld>(s) * n * p * p));
  }
  return finish(std::move(x), std::move(w), 2 * s - 2, "lobatto-" + std::to_string(s));
}

Quadrature custom_quadrature(std::vector<double> nodes, std::vector<double> weights, std::string id) {
  if (nodes.empty() || nodes.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "quadrature needs matching, nonempty nodes and weights");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(weights[i]) || nodes[i] < 0.0 || nodes[i] > 1.0) {
      throw Error(ErrorKind::InvalidArgument, "quadrature nodes must lie in [0,1]");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "quadrature nodes must be strictly increasing");
    }
  }
  long double total = 0.0L;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0L) > 1e-14L) throw Error(ErrorKind::InvalidArgument, "quadrature weights must sum to 1");
  Quadrature q{std::move(nodes), std::move(weights), 0, std::move(id)};
  q.order = quadrature_order(q);
  return q;
}

int quadrature_order(const Quadrature& q, int cap) {
  int p = 0;
  for (int k = 1; k <= cap; ++k) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      sum += static_cast<ld>(q.weights[i]) * std::pow(static_cast<ld>(q.nodes[i]), k - 1);
    }
    if (std::abs(sum - 1.0L / k) > 1e-12L) break;
    p = k;
  }
  return p;
}

bool is_symmetric(const Quadrature& q, double tol) {
  const std::size_t s = q.nodes.size();
  for (std::size_t i = 0; i < s; ++i) {
    if (std::abs(q.nodes[i] + q.nodes[s - 1 - i] - 1.0) > tol) return false;
    if (std::abs(q.weights[i] - q.weights[s - 1 - i]) > tol) return false;
  }
  return true;
}

ButcherTableau make_tableau(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> c,
                            std::string provenance) {
  const std::size_t s = c.size();
  if (s == 0 || b.size() != s || a.size() != s) throw Error(ErrorKind::InvalidArgument, "tableau shape mismatch");
  for (const auto& row : a) {
    if (row.size() != s) throw Error(ErrorKind::InvalidArgument, "tableau matrix must be square");
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "tableau entry is not finite");
    }
  }
  for (std::size_t i = 0; i < s; ++i) {
    if (!std::isfinite(b[i]) || !std::isfinite(c[i])) throw Error(ErrorKind::NonFinite, "tableau entry is not finite");
  }
  return {std::move(a), std::move(b), std::move(c), std::move(provenance)};
}

ButcherTableau explicit_euler() { return make_tableau({{0.0}}, {1.0}, {0.0}, "explicit-euler"); }

ButcherTableau discretize(const CsrkMethod& m, const Quadrature& q) {
  const std::size_t s = q.nodes.size();
  ButcherTableau t;
  t.c = q.nodes;
  t.a.assign(s, std::vector<double>(s));
  t.b.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) t.a[i][j] = q.weights[j] * m.eval_a(q.nodes[i], q.nodes[j]);
    t.b[i] = q.weights[i] * m.b().eval(q.nodes[i]);
  }
  t.provenance = (m.label().empty() ? std::string("csrk") : m.label()) + "/" + q.id;
  return t;
}

int predicted_rk_order(const CsrkMethod& m, const Quadrature& q, int level_cap) {
  if (!m.is_normalized()) throw Error(ErrorKind::HypothesisViolation, "order prediction needs B == 1 and C == tau");
  const SimplifyingLevels levels = check_simplifying(m, level_cap);
  const int p = q.order;
  const int a = std::max(0, std::min(levels.eta, p - m.degree_sigma()));
  const int b = std::max(0, std::min(levels.zeta, p - m.degree_tau()));
  return std::min({p, 2 * a + 2, a + b + 1});
}

double rk_symplectic_residual(const ButcherTableau& t) {
  const std::size_t s = t.c.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      worst = std::max(worst, std::abs(t.b[i] * t.a[i][j] + t.b[j] * t.a[j][i] - t.b[i] * t.b[j]));
    }
  }
  return worst;
}

double rk_symmetric_residual(const ButcherTableau& t) {
  const std::size_t s = t.c.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      worst = std::max(worst, std::abs(t.a[s - 1 - i][s - 1 - j] + t.a[i][j] - t.b[j]));
    }
  }
  return worst;
}

double row_sum_defect(const ButcherTableau& t, const CsrkMethod& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < t.c.size(); ++i) {
    double sum = 0.0;
    for (double v : t.a[i]) sum += v;
    worst = std::max(worst, std::abs(sum - m.c().eval(t.c[i])));
  }
  return worst;
}

}  // namespace csrk
