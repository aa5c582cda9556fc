#pragma once

// Dispersion function D(lambda) = S(lambda) phi'(b) - C(lambda) phi(b) with
// S = sin(sqrt(lambda) b)/sqrt(lambda), C = cos(sqrt(lambda) b), for the wave
// and Schrodinger problems, closed forms for constant coefficients, and the
// low-order Maclaurin data.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "profile.hpp"
#include "shooting.hpp"

namespace teig {

struct DispersionValue {
  cplx lambda{};
  cplx value{};
  cplx dvalue{};
  Equation equation = Equation::Wave;
  // Size of the two terms that cancel in D, measured against the solution's
  // local energy rather than its value at b. Rounding in D scales with it.
  double magnitude = 0.0;
};

/// S, C and their lambda-derivatives at one lambda.
struct TrigPrefactors {
  cplx s{}, c{}, ds{}, dc{};
};

/// Evaluates the prefactors using the given square root (either branch);
/// both S and C are even in the root, so the result does not depend on it
/// beyond rounding. Small |lambda| b^2 uses the power series.
inline TrigPrefactors trig_prefactors(cplx lambda, cplx root, double b) {
  TrigPrefactors t;
  const cplx x = lambda * (b * b);
  if (std::abs(x) < 1.0) {
    // S = b sum (-x)^k/(2k+1)!, C = sum (-x)^k/(2k)!
    cplx ps{0.0}, pc{0.0}, pds{0.0}, pdc{0.0};
    cplx xk{1.0};  // (-x)^k
    double fs = 1.0, fc = 1.0;  // (2k+1)!, (2k)!
    for (int k = 0; k < 20; ++k) {
      if (k > 0) {
        fc *= (2.0 * k - 1.0) * (2.0 * k);
        fs *= (2.0 * k) * (2.0 * k + 1.0);
      }
      ps += xk / fs;
      pc += xk / fc;
      if (k + 1 < 20) {
        // d/dlambda of (-x)^(k+1) = -(k+1) b^2 (-x)^k
        const double fs1 = fs * (2.0 * k + 2.0) * (2.0 * k + 3.0);
        const double fc1 = fc * (2.0 * k + 1.0) * (2.0 * k + 2.0);
        pds += -(k + 1.0) * xk / fs1;
        pdc += -(k + 1.0) * xk / fc1;
      }
      xk *= -x;
    }
    t.s = b * ps;
    t.c = pc;
    t.ds = b * b * b * pds;
    t.dc = b * b * pdc;
    return t;
  }
  const cplx sn = std::sin(root * b), cs = std::cos(root * b);
  t.s = sn / root;
  t.c = cs;
  t.dc = -0.5 * b * t.s;
  t.ds = (b * cs - t.s) / (2.0 * lambda);
  return t;
}

inline TrigPrefactors trig_prefactors(cplx lambda, double b) {
  return trig_prefactors(lambda, principal_sqrt(lambda), b);
}

/// `k_b` is lambda w(b) - v(b), the local squared frequency at the endpoint.
inline DispersionValue assemble_D(const ShootingTrace& t, const TrigPrefactors& f, cplx k_b) {
  DispersionValue d;
  const double omega = std::sqrt(std::max(1.0, std::abs(k_b)));
  const double energy = std::abs(t.dphi_b) + omega * std::abs(t.phi_b);
  d.magnitude = energy * (std::abs(f.s) + std::abs(f.c) / omega);
  d.lambda = t.lambda;
  d.equation = t.equation;
  d.value = f.s * t.dphi_b - f.c * t.phi_b;
  d.dvalue = f.ds * t.dphi_b + f.s * t.dlam_dphi_b - f.dc * t.phi_b - f.c * t.dlam_phi_b;
  return d;
}

inline DispersionValue eval_D(const Profile& p, cplx lambda, const ShootingTolerances& tol = {}) {
  const auto t = shoot_wave(p, lambda, tol);
  return assemble_D(t, trig_prefactors(lambda, p.b()), lambda * p.pieces().back().value(p.b()));
}

/// eval_D with an explicitly chosen square root of lambda (branch test hook).
inline DispersionValue eval_D_with_root(const Profile& p, cplx lambda, cplx root,
                                        const ShootingTolerances& tol = {}) {
  const auto t = shoot_wave(p, lambda, tol);
  return assemble_D(t, trig_prefactors(lambda, root, p.b()), lambda * p.pieces().back().value(p.b()));
}

inline DispersionValue eval_D_schrodinger(const Profile& p, cplx mu, const ShootingTolerances& tol = {}) {
  const auto t = shoot_schrodinger(p, mu, tol);
  return assemble_D(t, trig_prefactors(mu, p.b()), mu - p.pieces().back().value(p.b()));
}

/// Closed form for constant rho: S(lambda) C(lambda rho) - C(lambda) S(lambda rho).
inline cplx eval_D_constant_rho(double rho, double b, cplx lambda) {
  if (!(rho > 0.0)) throw Error(ErrorCode::NonPositiveProfile, "constant rho must be positive");
  const auto f = trig_prefactors(lambda, b);
  const auto g = trig_prefactors(lambda * rho, b);
  return f.s * g.c - f.c * g.s;
}

/// Derivative of the constant-rho closed form with respect to lambda.
inline cplx eval_dD_constant_rho(double rho, double b, cplx lambda) {
  const auto f = trig_prefactors(lambda, b);
  const auto g = trig_prefactors(lambda * rho, b);
  return f.ds * g.c + f.s * rho * g.dc - f.dc * g.s - f.c * rho * g.ds;
}

/// Closed form for a constant potential V: S(mu) C(mu - V) - C(mu) S(mu - V).
inline cplx eval_D_constant_potential(double v, double b, cplx mu) {
  const auto f = trig_prefactors(mu, b);
  const auto g = trig_prefactors(mu - v, b);
  return f.s * g.c - f.c * g.s;
}

using DispersionFn = std::function<DispersionValue(cplx)>;

inline DispersionFn wave_dispersion(const Profile& p, ShootingTolerances tol = {}) {
  return [p, tol](cplx l) { return eval_D(p, l, tol); };
}

inline DispersionFn schrodinger_dispersion(const Profile& p, ShootingTolerances tol = {}) {
  return [p, tol](cplx m) { return eval_D_schrodinger(p, m, tol); };
}

/// Taylor coefficients c_0..c_kmax of an analytic f at `center` from an
/// n-point trapezoid rule on the circle of the given radius.
inline std::vector<cplx> cauchy_taylor(const std::function<cplx(cplx)>& f, cplx center, double radius,
                                       int kmax, int n = 32) {
  std::vector<cplx> vals(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double th = 2.0 * std::numbers::pi * j / n;
    vals[static_cast<std::size_t>(j)] = f(center + radius * std::polar(1.0, th));
  }
  std::vector<cplx> c(static_cast<std::size_t>(kmax + 1));
  for (int k = 0; k <= kmax; ++k) {
    cplx acc{0.0};
    for (int j = 0; j < n; ++j) acc += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / n);
    c[static_cast<std::size_t>(k)] = acc / (static_cast<double>(n) * std::pow(radius, k));
  }
  return c;
}

struct MaclaurinData {
  int d = 0;
  std::array<double, 3> coeffs{};  // D0, D1, D2
  double gamma = 0.0;
  double sum_rule_rhs = 0.0;  // D2, compared against -gamma sum 1/lambda_j
  Equation equation = Equation::Wave;
  bool numeric_only = false;
};

namespace detail {
// `unit[k]` converts coefficient k to a common dimension before thresholding.
inline MaclaurinData finish_maclaurin(MaclaurinData m, std::array<double, 3> unit, int first) {
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) scale = std::max(scale, std::abs(m.coeffs[static_cast<std::size_t>(k)]) / unit[static_cast<std::size_t>(k)]);
  const double thr = 1e-10 * std::max(scale, 1.0);
  m.d = -1;
  for (int k = first; k < 3; ++k) {
    if (std::abs(m.coeffs[static_cast<std::size_t>(k)]) / unit[static_cast<std::size_t>(k)] > thr) {
      m.d = k;
      break;
    }
  }
  if (m.d < 0)
    throw Error(ErrorCode::DegenerateExpansion,
                "leading Maclaurin coefficients vanish to threshold; zero at origin has order >= 3");
  m.gamma = m.coeffs[static_cast<std::size_t>(m.d)];
  m.sum_rule_rhs = m.coeffs[2];
  return m;
}
}  // namespace detail

/// D1, D2 from the moment formulas; d and gamma from the first coefficient
/// above 1e-10 of the dimensionless scale max(|D1|/b^3, |D2|/b^5, 1).
inline MaclaurinData maclaurin(const Profile& p) {
  detail::require_rho(p);
  const double b = p.b();
  const auto m = moments(p, b);
  const double im1 = integral_m1_squared(p);
  MaclaurinData out;
  out.coeffs[0] = 0.0;
  out.coeffs[1] = b * b * b / 3.0 - m.m2;
  out.coeffs[2] = -std::pow(b, 5) / 30.0 + b * m.m1 * m.m1 - m.m1 * m.m2 - (b * b * b / 3.0) * m.m1 +
                  0.5 * b * b * m.m2 - im1;
  // D1 ~ b^3 and D2 ~ b^5; each is compared in units of its own power of b.
  return detail::finish_maclaurin(out, {1.0, b * b * b, std::pow(b, 5)}, 1);
}

/// Numeric Taylor data for the Schrodinger dispersion function (no closed
/// moment formulas exist for it). Coefficients come from a Cauchy circle of
/// radius 1/b^2.
inline MaclaurinData maclaurin_schrodinger(const Profile& p, const ShootingTolerances& tol = {}) {
  const double b = p.b();
  const double r = 1.0 / (b * b);
  const auto c = cauchy_taylor([&](cplx mu) { return eval_D_schrodinger(p, mu, tol).value; }, 0.0, r, 2, 32);
  MaclaurinData out;
  out.equation = Equation::Schrodinger;
  out.numeric_only = true;
  for (int k = 0; k < 3; ++k) out.coeffs[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)].real();
  // Coefficient k carries units length^(2k+1).
  return detail::finish_maclaurin(out, {b, b * b * b, std::pow(b, 5)}, 0);
}

}  // namespace teig
