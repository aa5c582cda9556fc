#pragma once

// Invariant suite run by `teig verify`: conjugation, mean value on a circle,
// branch independence, Liouville consistency, Maclaurin data, sum rule and
// the lattice sampling identities. Each check reports its measured residual.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dispersion.hpp"
#include "factorization.hpp"
#include "profile.hpp"
#include "shooting.hpp"
#include "spectra.hpp"

namespace teig {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct VerifyOptions {
  int samples = 8;
  std::uint64_t seed = 20240607;
  double lambda_radius = 1e3;  // random lambda drawn with |lambda| <= this / b^2
  double conjugation_tol = 1e-10;
  double mean_value_tol = 1e-8;
  double branch_tol = 1e-12;
  double liouville_tol = 1e-7;
  double maclaurin_tol = 1e-6;
  // The lattice tail is exact only for constant profiles; with a dozen
  // indices the model error elsewhere is a few 1e-4.
  double sum_rule_tol = 5e-3;
  double sampling_tol = 1e-9;
  int sampling_points = 12;
  // Sum rule: zeros are located in `region` if given, else in a box covering
  // the first `lattice_indices` lattice spacings.
  std::optional<ContourBox> region;
  int lattice_indices = 12;
  bool run_sum_rule = true;
  SpectraOptions spectra;
  ShootingTolerances shoot;
};

struct VerifyReport {
  std::string profile_name;
  bool trivial = false;
  std::string trivial_note;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.skipped; });
  }
};

namespace detail {

inline CheckResult make_check(std::string name, double residual, double tol, std::string note = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tol;
  c.passed = residual <= tol;
  c.note = std::move(note);
  return c;
}

inline CheckResult skipped_check(std::string name, std::string why) {
  CheckResult c;
  c.name = std::move(name);
  c.skipped = true;
  c.note = std::move(why);
  return c;
}

inline ShootingTrace shoot_any(const Profile& p, cplx l, double x, const ShootingTolerances& tol) {
  return p.kind() == ProfileKind::WaveSpeedRho ? shoot_wave_to(p, l, x, tol) : shoot_schrodinger_to(p, l, x, tol);
}

// Local frequency sqrt(max(1, |k|)) at x, used to put phi and phi' on one scale.
inline double local_omega(const Profile& p, cplx l, double x) {
  const double w = p.kind() == ProfileKind::WaveSpeedRho ? p(x) : 1.0;
  const double v = p.kind() == ProfileKind::WaveSpeedRho ? 0.0 : p(x);
  return std::sqrt(std::max(1.0, std::abs(l * w - v)));
}

inline DispersionValue eval_any(const Profile& p, cplx l, const ShootingTolerances& tol) {
  return p.kind() == ProfileKind::WaveSpeedRho ? eval_D(p, l, tol) : eval_D_schrodinger(p, l, tol);
}

inline std::vector<cplx> random_lambdas(int n, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));
  return out;
}

}  // namespace detail

/// phi(x) and phi'(x) of the wave problem rebuilt from the Schrodinger
/// solution on the Liouville image: phi = rho^(-1/4) rho0^(-1/4) w(y(x)).
inline std::pair<cplx, cplx> liouville_wave_solution(const LiouvilleImage& img, cplx lambda, double x,
                                                     const ShootingTolerances& tol = {}) {
  const double y = img.y_of_x(x);
  const auto t = shoot_schrodinger_to(img.q(), lambda, y, tol);
  const auto& rho = img.rho();
  const double r = rho(x), r1 = rho.d1(x);
  const double s = img.phi0_scale();
  const cplx phi = s * std::pow(r, -0.25) * t.phi_b;
  const cplx dphi = s * (std::pow(r, 0.25) * t.dphi_b - 0.25 * r1 * std::pow(r, -1.25) * t.phi_b);
  return {phi, dphi};
}

/// Relative deviation of the Liouville reconstruction from direct shooting at x.
inline double liouville_deviation(const LiouvilleImage& img, cplx lambda, double x, const ShootingTolerances& tol = {}) {
  const auto direct = shoot_wave_to(img.rho(), lambda, x, tol);
  const auto [phi, dphi] = liouville_wave_solution(img, lambda, x, tol);
  const double om = detail::local_omega(img.rho(), lambda, x);
  const double scale = om * std::abs(direct.phi_b) + std::abs(direct.dphi_b);
  return (om * std::abs(phi - direct.phi_b) + std::abs(dphi - direct.dphi_b)) / scale;
}

inline CheckResult check_conjugation(const Profile& p, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  const double R = o.lambda_radius / (p.b() * p.b());
  double worst = 0.0;
  for (const cplx l : detail::random_lambdas(o.samples, R, rng)) {
    const auto t = detail::shoot_any(p, l, p.b(), o.shoot);
    const auto tc = detail::shoot_any(p, std::conj(l), p.b(), o.shoot);
    const double om = detail::local_omega(p, l, p.b());
    const double scale = om * std::abs(t.phi_b) + std::abs(t.dphi_b);
    worst = std::max(worst, (om * std::abs(tc.phi_b - std::conj(t.phi_b)) + std::abs(tc.dphi_b - std::conj(t.dphi_b))) / scale);
    const auto d = detail::eval_any(p, l, o.shoot);
    const auto dc = detail::eval_any(p, std::conj(l), o.shoot);
    worst = std::max(worst, std::abs(dc.value - std::conj(d.value)) / std::max(d.magnitude, std::abs(d.value)));
  }
  return detail::make_check("conjugation", worst, o.conjugation_tol);
}

/// Average of phi(b; .) over 64 points of a circle against the centre value.
inline CheckResult check_mean_value(const Profile& p, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 1);
  const double b2 = p.b() * p.b();
  double worst = 0.0;
  for (const cplx c : detail::random_lambdas(o.samples, o.lambda_radius / b2, rng)) {
    const double r = 1.0 / b2;
    cplx avg{0.0};
    double vmax = 0.0;
    for (int j = 0; j < 64; ++j) {
      const auto v = detail::shoot_any(p, c + r * std::polar(1.0, 2.0 * std::numbers::pi * j / 64.0), p.b(), o.shoot).phi_b;
      avg += v;
      vmax = std::max(vmax, std::abs(v));
    }
    avg /= 64.0;
    const cplx centre = detail::shoot_any(p, c, p.b(), o.shoot).phi_b;
    worst = std::max(worst, std::abs(avg - centre) / std::max(std::abs(centre), vmax));
  }
  return detail::make_check("mean_value", worst, o.mean_value_tol);
}

/// D with sqrt(lambda) and -sqrt(lambda) in the prefactors.
inline CheckResult check_branch(const Profile& p, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 2);
  double worst = 0.0;
  const bool wave = p.kind() == ProfileKind::WaveSpeedRho;
  for (const cplx l : detail::random_lambdas(o.samples, o.lambda_radius / (p.b() * p.b()), rng)) {
    const auto t = detail::shoot_any(p, l, p.b(), o.shoot);
    const cplx kb = wave ? l * p.pieces().back().value(p.b()) : l - p.pieces().back().value(p.b());
    const cplx root = principal_sqrt(l);
    const auto d1 = assemble_D(t, trig_prefactors(l, root, p.b()), kb);
    const auto d2 = assemble_D(t, trig_prefactors(l, -root, p.b()), kb);
    worst = std::max(worst, std::abs(d1.value - d2.value) / std::max(d1.magnitude, std::abs(d1.value)));
  }
  return detail::make_check("branch_independence", worst, o.branch_tol);
}

inline CheckResult check_liouville(const Profile& p, const VerifyOptions& o) {
  if (p.kind() != ProfileKind::WaveSpeedRho) return detail::skipped_check("liouville", "potential profile");
  if (p.smoothness() != Smoothness::C1) return detail::skipped_check("liouville", "profile is not C1");
  const auto img = liouville_transform(p);
  std::mt19937_64 rng(o.seed + 3);
  double worst = 0.0;
  for (const cplx l : detail::random_lambdas(o.samples, 100.0 / (p.b() * p.b()), rng))
    for (const double x : {0.25 * p.b(), 0.5 * p.b(), p.b()}) worst = std::max(worst, liouville_deviation(img, l, x, o.shoot));
  return detail::make_check("liouville", worst, o.liouville_tol);
}

/// Closed-form (wave) or Cauchy (Schrodinger) Taylor data against a
/// Richardson-extrapolated central-difference expansion of D near 0.
inline CheckResult check_maclaurin(const Profile& p, const VerifyOptions& o, std::optional<MaclaurinData>& out) {
  const bool wave = p.kind() == ProfileKind::WaveSpeedRho;
  MaclaurinData m;
  try {
    m = wave ? maclaurin(p) : maclaurin_schrodinger(p, o.shoot);
  } catch (const Error& e) {
    return detail::make_check("maclaurin", INFINITY, o.maclaurin_tol, e.what());
  }
  out = m;
  const double b = p.b();
  auto D = [&](double l) { return detail::eval_any(p, l, o.shoot).value.real(); };
  // Second-order central differences at steps h and h/10 (in units of 1/b^2),
  // Richardson-combined; D1 = D'(0), D2 = D''(0)/2.
  auto diffs = [&](double h) {
    const double fp = D(h), fm = D(-h), f0 = D(0.0);
    return std::pair{(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (2.0 * h * h)};
  };
  const double h1 = 1e-2 / (b * b), h2 = 1e-3 / (b * b);
  const auto [a1, a2] = diffs(h1);
  const auto [b1, b2] = diffs(h2);
  const double d1 = (100.0 * b1 - a1) / 99.0;
  const double d2 = (100.0 * b2 - a2) / 99.0;
  const double s1 = std::max(std::abs(m.coeffs[1]), b * b * b * 1e-3);
  const double s2 = std::max(std::abs(m.coeffs[2]), std::pow(b, 5) * 1e-3);
  const double res = std::max(std::abs(d1 - m.coeffs[1]) / s1, std::abs(d2 - m.coeffs[2]) / s2);
  std::string note = "d=" + std::to_string(m.d);
  if (m.numeric_only) note += ", numeric-only coefficients";
  return detail::make_check("maclaurin", res, o.maclaurin_tol, note);
}

/// Box over the first `indices` lattice spacings, c = |a - b| (b for
/// potentials), with |Im sqrt(lambda)| <= 2/c.
inline ContourBox default_search_region(const Profile& p, int indices) {
  const double b = p.b();
  double c = b;
  if (p.kind() == ProfileKind::WaveSpeedRho) {
    const double a = travel_time(p);
    if (classify_regime(a, b) != Regime::AEqualsB) c = std::abs(a - b);
  }
  const double R = std::pow((indices + 0.5) * std::numbers::pi / c, 2);
  const double h = std::min(0.5 * R, 2.0 * std::sqrt(R) * (2.0 / c));
  return ContourBox{-1.0 / (b * b), R, -h, h};
}

inline CheckResult check_sum_rule(const Profile& p, const VerifyOptions& o, const std::optional<MaclaurinData>& m) {
  if (!o.run_sum_rule) return detail::skipped_check("sum_rule", "disabled");
  if (!m) return detail::skipped_check("sum_rule", "no Maclaurin data");
  if (m->d != 1) return detail::skipped_check("sum_rule", "zero at the origin has order " + std::to_string(m->d) + ", not 1");
  if (p.kind() != ProfileKind::WaveSpeedRho)
    return detail::skipped_check("sum_rule", "no zero-lattice tail model for potential profiles");
  const double a = travel_time(p);
  if (classify_regime(a, p.b()) == Regime::AEqualsB)
    return detail::skipped_check("sum_rule", "travel time equals the radius: no lattice tail");
  const auto region = o.region.value_or(default_search_region(p, o.lattice_indices));
  const auto recs = find_eigenvalues(make_evaluator(p, o.shoot), region, o.spectra);
  auto s = spectral_data_from_records(recs, Equation::Wave, m->gamma, TailModel{a, p.b()});
  s.d = 1;
  const double res = sum_rule_check(s, *m);
  return detail::make_check("sum_rule", res, o.sum_rule_tol,
                            std::to_string(zero_groups(s).size()) + " zero groups plus lattice tail");
}

/// (-1)^(n+1) D on the sine lattice equals phi(b), and the cosine-lattice
/// samples equal phi'(b).
inline CheckResult check_sampling(const Profile& p, const VerifyOptions& o) {
  const double b = p.b();
  const ComplexFn dsrc = [&](cplx l) { return detail::eval_any(p, l, o.shoot).value; };
  const auto phis = sample_phi_grid(dsrc, b, o.sampling_points);
  const auto dphis = sample_dphi_grid(dsrc, b, o.sampling_points);
  double worst = 0.0;
  for (const auto& [l, v] : phis) {
    const auto t = detail::shoot_any(p, l, b, o.shoot);
    const double om = detail::local_omega(p, l, b);
    worst = std::max(worst, std::abs(v - t.phi_b) / (std::abs(t.phi_b) + std::abs(t.dphi_b) / om));
  }
  for (const auto& [l, v] : dphis) {
    const auto t = detail::shoot_any(p, l, b, o.shoot);
    const double om = detail::local_omega(p, l, b);
    worst = std::max(worst, std::abs(v - t.dphi_b) / (om * std::abs(t.phi_b) + std::abs(t.dphi_b)));
  }
  return detail::make_check("sampling_identities", worst, o.sampling_tol);
}

/// Runs every check. The free profiles (rho = 1, V = 0) have D identically
/// zero; they are reported as trivial without running the suite.
inline VerifyReport run_invariant_suite(const Profile& p, const VerifyOptions& o = {}) {
  VerifyReport r;
  r.profile_name = p.name();
  const bool wave = p.kind() == ProfileKind::WaveSpeedRho;
  if (p.is_constant(wave ? 1.0 : 0.0, 1e-14)) {
    r.trivial = true;
    r.trivial_note = wave ? "D identically zero: the profile is rho = 1" : "D identically zero: the potential is V = 0";
    return r;
  }
  r.checks.push_back(check_conjugation(p, o));
  r.checks.push_back(check_mean_value(p, o));
  r.checks.push_back(check_branch(p, o));
  r.checks.push_back(check_liouville(p, o));
  std::optional<MaclaurinData> m;
  r.checks.push_back(check_maclaurin(p, o, m));
  r.checks.push_back(check_sum_rule(p, o, m));
  r.checks.push_back(check_sampling(p, o));
  return r;
}

}  // namespace teig
