#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace teig;
using support::cplx;
using support::error_code;
using support::pi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("product with lattice tail reproduces the rho = 1/4 closed form") {
  const auto s = support::quarter_data(20, true);
  std::mt19937_64 rng(21);
  for (const cplx l : support::random_lambdas(rng, 40, 2e3)) {
    const cplx ref = support::d_quarter(l);
    CHECK(std::abs(reconstruct_D(s, l, 20) - ref) <= 1e-9 * (1.0 + std::abs(ref)));
    CHECK(std::abs(xi_eval(s, l, 20) - ref / 0.25) <= 4e-9 * (1.0 + std::abs(ref)));
  }
  // fewer groups, same answer: the tail covers the rest
  CHECK(std::abs(xi_eval(s, 300.0, 3) - xi_eval(s, 300.0, 20)) <= 1e-10 * std::abs(xi_eval(s, 300.0, 20)));
}

TEST_CASE("truncated product converges without a tail") {
  const auto s = support::quarter_data(400, false);
  const cplx l{50.0, 10.0};
  const cplx ref = support::d_quarter(l) / 0.25;
  CHECK(support::rel(xi_eval(s, l, 400), ref) < 1e-2);
  CHECK(support::rel(xi_eval(s, l, 400), ref) < support::rel(xi_eval(s, l, 50), ref));
  CHECK(error_code([&] { xi_eval(s, l, 401); }) == ErrorCode::InsufficientZeros);
}

TEST_CASE("complex pairs enter as quadratic factors") {
  SpectralData s;
  s.d = 1;
  s.gamma = 1.0;
  const cplx z{3.0, 4.0};
  s.zeros.push_back(EigenvalueRecord{z, 1, RecordKind::ComplexPair, {}, 0.0});
  s.zeros.push_back(EigenvalueRecord{std::conj(z), 1, RecordKind::ComplexPair, {}, 0.0});
  s.zeros.push_back(EigenvalueRecord{cplx(7.0), 2, RecordKind::RealPositive, {}, 0.0});
  validate(s);
  const cplx l{1.5, -0.5};
  const cplx ref = l * (1.0 - l / z) * (1.0 - l / std::conj(z)) * std::pow(1.0 - l / 7.0, 2);
  CHECK(support::rel(xi_eval(s, l, 2), ref) < 1e-14);
  const auto g = zero_groups(s);
  REQUIRE(g.size() == 2);
  CHECK(g[0].pair);
  CHECK(!g[1].pair);
}

TEST_CASE("sum rule on rho = 1/4") {
  const auto m = maclaurin(support::constant_rho(0.25));
  CHECK(sum_rule_check(support::quarter_data(200, true), m) <= 1e-4);
  CHECK(sum_rule_check(support::quarter_data(200, true), m, 5) <= 1e-4);
  // without the tail 200 groups leave a visible remainder
  const double bare = sum_rule_check(support::quarter_data(200, false), m);
  CHECK(bare > 1e-4);
  CHECK(bare < 1e-2);
}

TEST_CASE("sum rule with zeros found by the solver on rho = 4/9") {
  const auto p = support::constant_rho(4.0 / 9.0);
  const auto recs = find_eigenvalues(make_evaluator(p), ContourBox{-1.0, 2000.0, -400.0, 400.0}, 1e-4);
  const auto s = spectral_data_from_records(recs, Equation::Wave, std::nullopt, std::nullopt);
  CHECK(s.d == 1);
  const auto m = maclaurin(p);
  // truncated sum without a tail: error is of the order of the omitted terms
  CHECK(sum_rule_check(s, m) < 0.1);
}

TEST_CASE("spectral data validation") {
  auto s = support::quarter_data(3, false);
  s.zeros.push_back(EigenvalueRecord{cplx(5.0, 1.0), 1, RecordKind::ComplexPair, {}, 0.0});
  CHECK(error_code([&] { validate(s); }) == ErrorCode::SchemaError);
  auto t = support::quarter_data(3, false);
  t.zeros[0].multiplicity = 0;
  CHECK(error_code([&] { validate(t); }) == ErrorCode::SchemaError);
  auto u = support::quarter_data(3, false);
  u.zeros.push_back(EigenvalueRecord{cplx(0.0), 1, RecordKind::Origin, {}, 0.0});
  CHECK(error_code([&] { validate(u); }) == ErrorCode::SchemaError);
  auto v = support::quarter_data(3, false);
  v.d = 0;
  CHECK(error_code([&] { validate(v); }) == ErrorCode::SchemaError);
  auto w = support::quarter_data(3, false);
  w.gamma.reset();
  CHECK(!error_code([&] { validate(w); }));
  CHECK(error_code([&] { reconstruct_D(w, 1.0, 3); }) == ErrorCode::GammaMissing);
  auto x = support::quarter_data(3, false);
  x.d = 2;
  CHECK(error_code([&] { sum_rule_check(x, maclaurin(support::constant_rho(0.25))); }) == ErrorCode::WrongOriginOrder);
}

TEST_CASE("sample grids") {
  const auto phi = sample_phi_grid([](cplx l) { return support::d_quarter(l); }, 1.0, 5);
  REQUIRE(phi.size() == 5);
  for (int n = 1; n <= 5; ++n) {
    const auto& [l, v] = phi[static_cast<std::size_t>(n - 1)];
    CHECK_THAT(l, WithinRel(n * n * pi * pi, 1e-15));
    // on this lattice D = (-1)^(n+1) phi(b), and phi(1) = sin(n pi/2)/(n pi)... times 2
    const double s = std::sin(n * pi / 2.0);
    CHECK_THAT(v.real(), WithinAbs((n % 2 ? 1.0 : -1.0) * 2.0 * s * s * s / (n * pi), 1e-14));
  }
  const auto dphi = sample_dphi_grid([](cplx l) { return support::d_quarter(l); }, 2.0, 3);
  CHECK_THAT(dphi[0].first, WithinRel(pi * pi / 16.0, 1e-15));
  CHECK_THAT(dphi[2].first, WithinRel(25.0 * pi * pi / 16.0, 1e-15));
}

TEST_CASE("Hurwitz zeta at even arguments") {
  for (int k : {1, 2, 3}) {
    for (double q : {1.0, 2.5, 10.0}) {
      double direct = 0.0;
      for (int n = 0; n < 2000000; ++n) direct += std::pow(q + n, -2.0 * k);
      if (k == 1) direct += 1.0 / (q + 2000000.0 - 0.5);  // integral remainder
      CHECK_THAT(detail::hurwitz_even(k, q), WithinRel(direct, 1e-9));
    }
  }
  CHECK_THAT(detail::hurwitz_even(1, 1.0), WithinRel(pi * pi / 6.0, 1e-14));
}

TEST_CASE("even cardinal series recovers a band-limited function") {
  // f(t) = sinc(beta t) has band beta pi < pi.
  const double beta = 0.6;
  auto f = [&](double t) { return sinc_pi(beta * t); };
  std::vector<double> s;
  for (int k = 0; k <= 120; ++k) s.push_back(f(k));
  const EvenCardinalSeries g(s, 0.0, beta * pi);
  for (double t : {0.3, 2.7, 10.5, 20.25}) CHECK_THAT(g(t), WithinAbs(f(t), 1e-8));
  std::vector<double> h;
  for (int k = 0; k < 120; ++k) h.push_back(f(k + 0.5));
  const EvenCardinalSeries gh(h, 0.5, beta * pi);
  for (double t : {0.0, 3.1, 12.9}) CHECK_THAT(gh(t), WithinAbs(f(t), 1e-8));
  std::vector<double> from_one(s.begin() + 1, s.end());
  CHECK_THAT(alternating_centre_sample(from_one, beta * pi), WithinAbs(1.0, 1e-8));
}
