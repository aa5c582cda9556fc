#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace teig;
using support::cplx;
using support::error_code;
using support::rel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("closed forms for rho = 1/4 and 4/9 agree with the library constant-rho formula") {
  std::mt19937_64 rng(1);
  for (const cplx l : support::random_lambdas(rng, 30, 500.0)) {
    CHECK(std::abs(eval_D_constant_rho(0.25, 1.0, l) - support::d_quarter(l)) <= 1e-12 * (1.0 + std::abs(support::d_quarter(l))));
    CHECK(std::abs(eval_D_constant_rho(4.0 / 9.0, 1.0, l) - support::d_four_ninths(l)) <=
          1e-12 * (1.0 + std::abs(support::d_four_ninths(l))));
  }
  CHECK(error_code([] { eval_D_constant_rho(0.0, 1.0, 1.0); }) == ErrorCode::NonPositiveProfile);
}

TEST_CASE("eval_D matches the closed form and its derivative") {
  std::mt19937_64 rng(2);
  for (double rho : {0.25, 4.0 / 9.0, 2.0}) {
    const auto p = support::constant_rho(rho);
    for (const cplx l : support::random_lambdas(rng, 50, 1e3)) {
      const auto d = eval_D(p, l);
      const cplx ref = eval_D_constant_rho(rho, 1.0, l);
      CHECK(std::abs(d.value - ref) <= 1e-8 * (1.0 + std::abs(ref)));
      const cplx dref = eval_dD_constant_rho(rho, 1.0, l);
      CHECK(std::abs(d.dvalue - dref) <= 1e-8 * (1.0 + std::abs(dref)));
    }
  }
}

TEST_CASE("D at the origin vanishes and the trig series joins the direct formula") {
  const auto p = support::constant_rho(0.25);
  CHECK(std::abs(eval_D(p, 0.0).value) == 0.0);
  // Both sides of |lambda b^2| = 1.
  const auto a = trig_prefactors(cplx(0.999999, 0.0), 1.0);
  const auto b = trig_prefactors(cplx(1.000001, 0.0), 1.0);
  CHECK_THAT(a.s.real(), WithinAbs(b.s.real(), 1e-6));
  CHECK_THAT(a.c.real(), WithinAbs(b.c.real(), 1e-6));
  const auto s = trig_prefactors(cplx(0.5, 0.2), 1.0);
  const cplx r = std::sqrt(cplx(0.5, 0.2));
  CHECK(rel(s.s, std::sin(r) / r) < 1e-15);
  CHECK(rel(s.c, std::cos(r)) < 1e-15);
}

TEST_CASE("conjugation and branch independence of D") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const auto p = support::random_cubic_rho(rng);
    const cplx l = support::random_lambdas(rng, 1, 1e3)[0];
    const auto d = eval_D(p, l);
    CHECK(std::abs(eval_D(p, std::conj(l)).value - std::conj(d.value)) <= 1e-10 * d.magnitude);
    const auto flip = eval_D_with_root(p, l, -principal_sqrt(l));
    CHECK(std::abs(flip.value - d.value) <= 1e-12 * d.magnitude);
  }
}

TEST_CASE("Maclaurin data of the closed-form examples") {
  // D = lambda/4 - lambda^2/32 + ... for rho = 1/4 (series of 2 sin^3(s/2)/s).
  const auto m = maclaurin(support::constant_rho(0.25));
  CHECK(m.d == 1);
  CHECK_THAT(m.coeffs[1], WithinAbs(0.25, 1e-10));
  CHECK_THAT(m.coeffs[2], WithinAbs(-1.0 / 32.0, 1e-8));
  CHECK_THAT(m.gamma, WithinAbs(0.25, 1e-10));
  // rho = 4/9: sin^3 u (5 - 4 sin^2 u)/s, u = s/3, gives 5/27 and -13/486.
  const auto m4 = maclaurin(support::constant_rho(4.0 / 9.0));
  CHECK_THAT(m4.coeffs[1], WithinAbs(5.0 / 27.0, 1e-12));
  CHECK_THAT(m4.coeffs[2], WithinAbs(-13.0 / 486.0, 1e-12));
  CHECK(error_code([] { maclaurin(support::constant_rho(1.0)); }) == ErrorCode::DegenerateExpansion);
}

TEST_CASE("Maclaurin coefficients agree with Cauchy integrals of eval_D") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 3; ++i) {
    const auto p = support::random_cubic_rho(rng, 1.5);
    const auto m = maclaurin(p);
    const auto c = cauchy_taylor([&](cplx l) { return eval_D(p, l).value; }, 0.0, 0.5, 2, 32);
    CHECK(std::abs(c[0]) < 1e-13);
    CHECK_THAT(c[1].real(), WithinRel(m.coeffs[1], 1e-9));
    CHECK_THAT(c[2].real(), WithinRel(m.coeffs[2], 1e-8));
  }
}

TEST_CASE("d detection is scale invariant") {
  for (double b : {1e-2, 1.0, 50.0}) {
    const auto m = maclaurin(support::constant_rho(0.25, b));
    CHECK(m.d == 1);
    CHECK_THAT(m.coeffs[1], WithinRel(0.25 * b * b * b, 1e-10));
  }
}

TEST_CASE("Schrodinger dispersion for a constant potential") {
  const auto p = Profile::constant(ProfileKind::SchrodingerPotential, 2.0, 1.0);
  // At mu = 2 = V the solution is phi = x, so D = S(2) - C(2).
  const double r2 = std::sqrt(2.0);
  const double ref = std::sin(r2) / r2 - std::cos(r2);
  CHECK_THAT(eval_D_constant_potential(2.0, 1.0, 2.0).real(), WithinRel(ref, 1e-14));
  CHECK_THAT(eval_D_schrodinger(p, 2.0).value.real(), WithinRel(ref, 1e-10));
  CHECK_THAT(ref, WithinAbs(0.5425123, 1e-7));
  // mu = 1: phi = sinh x.
  const double ref1 = std::sin(1.0) * std::cosh(1.0) - std::cos(1.0) * std::sinh(1.0);
  CHECK_THAT(eval_D_schrodinger(p, 1.0).value.real(), WithinRel(ref1, 1e-10));
  CHECK(std::abs(eval_D_schrodinger(Profile::constant(ProfileKind::SchrodingerPotential, 0.0, 1.0), cplx(3.0, 1.0)).value) < 1e-12);
  const auto m = maclaurin_schrodinger(p);
  CHECK(m.numeric_only);
  CHECK(m.d == 0);
  CHECK_THAT(m.coeffs[0], WithinRel(eval_D_constant_potential(2.0, 1.0, 0.0).real(), 1e-10));
}
