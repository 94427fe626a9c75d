#include <doctest.h>

#include "csrk/errors.hpp"
#include "csrk/method.hpp"
#include "csrk/verify.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using csrk::AlphaMatrix;
using csrk::Coeffs;
using csrk::CsrkMethod;
using csrk::Scalar;
using csrk::UnivariatePoly;

namespace {

const Scalar kHalf = Scalar::rational(1, 2);
const Scalar kS3_6 = Scalar::sqrt(3) * Scalar::rational(1, 6);
const Scalar kS15_30 = Scalar::sqrt(15) * Scalar::rational(1, 30);

CsrkMethod minimal_symplectic() { return csrk::normalized_method({{kHalf, -kS3_6}, {kS3_6, Scalar()}}); }

csrk::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const csrk::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return csrk::ErrorKind::IoError;
}

csrk::EpSpec omegas(std::vector<Scalar> w) { return {std::move(w), std::nullopt}; }

}  // namespace

TEST_CASE("new_method examples") {
  const UnivariatePoly one = UnivariatePoly::constant(Scalar(1));
  const UnivariatePoly tau = UnivariatePoly::identity();
  const CsrkMethod m = csrk::new_method({{kHalf, -kS3_6}, {kS3_6, Scalar()}}, one, tau);
  CHECK(m.degree_tau() == 1);
  CHECK(m.degree_sigma() == 1);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) {
      const double t = i / 4.0, s = j / 4.0;
      CHECK(m.eval_a(t, s) == doctest::Approx(0.5 + t - s).scale(1.0));
    }
  const CsrkMethod avf = csrk::new_method({{kHalf}, {kS3_6}}, one, tau);
  CHECK(avf.degree_sigma() == 0);
  CHECK(kind_of([&] { csrk::new_method({{Scalar::rational(1, 3)}, {kS3_6}}, one, tau); }) ==
        csrk::ErrorKind::ConsistencyViolation);
  CHECK(kind_of([&] { csrk::new_method({{kHalf}}, one, tau); }) == csrk::ErrorKind::ConsistencyViolation);
}

TEST_CASE("alpha is trimmed to its true degrees") {
  const CsrkMethod m = csrk::normalized_method({{kHalf, Scalar(), Scalar()}, {kS3_6, Scalar(), Scalar()}, {}});
  CHECK(m.degree_tau() == 1);
  CHECK(m.degree_sigma() == 0);
  CHECK(m.alpha(5, 7).is_zero());
  CHECK(m.is_normalized());
}

TEST_CASE("eval_A examples") {
  const CsrkMethod m = minimal_symplectic();
  CHECK(m.eval_a(kHalf, kHalf) == kHalf);
  CHECK(m.eval_a(0.5, 0.5) == doctest::Approx(0.5));
  const CsrkMethod avf = csrk::construct_ep_legendre(omegas({Scalar(1)})).method;
  for (int k = 0; k <= 4; ++k) CHECK(avf.eval_a(Scalar(0), Scalar::rational(k, 4)).is_zero());
  CHECK(m.eval_a(Scalar::rational(1, 3), Scalar::rational(1, 5)) == kHalf + Scalar::rational(1, 3) - Scalar::rational(1, 5));
}

TEST_CASE("row integral of A reproduces C at 0.3") {
  const oracle::Rule rule = oracle::gauss(20);
  gen::Gen g(31);
  for (int k = 0; k < 30; ++k) {
    const CsrkMethod m = gen::random_method(g, 5);
    const double integral = oracle::integrate(rule, [&](double s) { return m.eval_a(0.3, s); });
    CHECK(integral == doctest::Approx(m.c().eval(0.3)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("construct_order_by_order examples") {
  CHECK(csrk::construct_order_by_order(4, {}) == minimal_symplectic());
  const CsrkMethod m = csrk::construct_order_by_order(4, {{{2, 1}, kS15_30}});
  CHECK(m.alpha() == csrk::construct_simplifying(2, 1, {}).alpha());
  CHECK(kind_of([] { csrk::construct_order_by_order(4, {{{0, 3}, Scalar(1)}, {{3, 1}, Scalar(1)}}); }) ==
        csrk::ErrorKind::Order4ConstraintViolation);
  CHECK(kind_of([] { csrk::construct_order_by_order(5, {}); }) == csrk::ErrorKind::InvalidArgument);
  CHECK(kind_of([] { csrk::construct_order_by_order(2, {{{1, 0}, Scalar(1)}}); }) == csrk::ErrorKind::InvalidArgument);
  // order 2 keeps a free alpha_01
  const CsrkMethod two = csrk::construct_order_by_order(2, {{{0, 1}, Scalar(1)}});
  CHECK(two.alpha(0, 1) == Scalar(1));
  CHECK(csrk::check_order_conditions(two).order == 2);
  // order 4 overrides alpha_11 and alpha_02
  const CsrkMethod four = csrk::construct_order_by_order(4, {{{1, 1}, Scalar(1)}, {{0, 2}, Scalar(1)}});
  CHECK(four.alpha(1, 1).is_zero());
  CHECK(four.alpha(0, 2).is_zero());
}

TEST_CASE("construct_simplifying examples") {
  CHECK(csrk::construct_simplifying(1, 1, {}) == minimal_symplectic());
  const CsrkMethod a21 = csrk::construct_simplifying(2, 1, {});
  CHECK(a21.alpha() == AlphaMatrix{{kHalf, -kS3_6}, {kS3_6, Scalar()}, {Scalar(), kS15_30}});
  const CsrkMethod a12 = csrk::construct_simplifying(1, 2, {});
  CHECK(a12.alpha() == AlphaMatrix{{kHalf, -kS3_6, Scalar()}, {kS3_6, Scalar(), -kS15_30}});
  const csrk::SimplifyingLevels lv = csrk::check_simplifying(a12);
  CHECK(lv.eta >= 1);
  CHECK(lv.zeta >= 2);
  CHECK(kind_of([] { csrk::construct_simplifying(2, 1, {{{0, 2}, Scalar(1)}}); }) == csrk::ErrorKind::InvalidArgument);
  CHECK(kind_of([] { csrk::construct_simplifying(0, 1, {}); }) == csrk::ErrorKind::InvalidArgument);
  CHECK_NOTHROW(csrk::construct_simplifying(2, 1, {{{1, 2}, Scalar(1)}}));
}

TEST_CASE("construct_symplectic examples") {
  CHECK(csrk::construct_symplectic({}) == minimal_symplectic());
  const CsrkMethod m = csrk::construct_symplectic({{{1, 2}, Scalar::rational(3, 7)}});
  CHECK(m.alpha(2, 1) == Scalar::rational(-3, 7));
  CHECK(csrk::symplectic_residual(m).is_zero());
  CHECK(kind_of([] { csrk::construct_symplectic({{{1, 1}, Scalar(1)}}); }) == csrk::ErrorKind::SkewConflict);
  CHECK(kind_of([] { csrk::construct_symplectic({{{0, 1}, Scalar(1)}}); }) == csrk::ErrorKind::SkewConflict);
  CHECK(kind_of([] { csrk::construct_symplectic({{{2, 1}, Scalar(1)}}); }) == csrk::ErrorKind::SkewConflict);
  CHECK_NOTHROW(csrk::construct_symplectic({{{0, 1}, -kS3_6}}));
}

TEST_CASE("construct_symmetric examples") {
  const CsrkMethod m = csrk::construct_symmetric({{{0, 1}, -kS3_6}});
  CHECK(m == minimal_symplectic());
  CHECK(csrk::symmetric_residual(m).is_zero());
  CHECK(csrk::symplectic_residual(m).is_zero());
  const CsrkMethod plus = csrk::construct_symmetric({{{0, 1}, kS3_6}});
  CHECK(csrk::symmetric_residual(plus).is_zero());
  CHECK(csrk::symplectic_residual(plus) == Scalar::sqrt(3) * Scalar::rational(1, 3));
  CHECK(kind_of([] { csrk::construct_symmetric({{{2, 2}, Scalar(1)}}); }) == csrk::ErrorKind::ParityViolation);
  CHECK(csrk::construct_symmetric({}).alpha(1, 0) == kS3_6);
}

TEST_CASE("construct_ep_legendre examples") {
  const auto avf = csrk::construct_ep_legendre(omegas({Scalar(1)}));
  CHECK(avf.method.alpha() == AlphaMatrix{{kHalf}, {kS3_6}});
  CHECK(avf.kappa == 1);
  CHECK(avf.claimed_order == 2);
  CHECK_FALSE(avf.tuned);

  const auto ep2 = csrk::construct_ep_legendre(omegas({Scalar(1), Scalar(1)}));
  // tau + (xi_2 P_2(tau) - xi_1 P_0(tau)) P_1(sigma)
  CHECK(ep2.method.alpha() == AlphaMatrix{{kHalf, -kS3_6}, {kS3_6, Scalar()}, {Scalar(), kS15_30}});
  CHECK(ep2.kappa == 2);
  CHECK(ep2.claimed_order == 4);

  const auto tuned = csrk::construct_ep_legendre(omegas({Scalar(1), Scalar::rational(2, 3)}));
  CHECK(tuned.kappa == 1);
  CHECK(tuned.tuned);
  CHECK(tuned.conjugate_symplectic_order == 6);

  CHECK(kind_of([] { csrk::construct_ep_legendre(omegas({Scalar(2)})); }) == csrk::ErrorKind::InvalidArgument);
}

TEST_CASE("construct_ep_general examples") {
  using Gens = std::vector<UnivariatePoly>;
  const auto one = csrk::construct_ep_general({{Scalar(1)}, Gens{UnivariatePoly::basis(0)}});
  CHECK(one.method == csrk::construct_ep_legendre(omegas({Scalar(1)})).method);
  CHECK(one.c_is_tau);
  const auto two = csrk::construct_ep_general(
      {{Scalar(1), Scalar(1)}, Gens{UnivariatePoly::basis(0), UnivariatePoly::basis(1)}});
  CHECK(two.method == csrk::construct_ep_legendre(omegas({Scalar(1), Scalar(1)})).method);
  const auto scaled = csrk::construct_ep_general({{Scalar(2)}, Gens{UnivariatePoly::basis(0)}});
  CHECK_FALSE(scaled.c_is_tau);
  CHECK(scaled.method.c() == UnivariatePoly::identity() * Scalar(2));
  CHECK(kind_of([] { csrk::construct_ep_general(omegas({Scalar(1)})); }) == csrk::ErrorKind::InvalidArgument);
}

TEST_CASE("to_dense rejects negative indices") {
  CHECK(kind_of([] { csrk::to_dense({{{-1, 0}, Scalar(1)}}); }) == csrk::ErrorKind::InvalidArgument);
  const AlphaMatrix d = csrk::to_dense({{{1, 2}, Scalar(3)}});
  CHECK(d.size() == 2);
  CHECK(d[1][2] == Scalar(3));
}
