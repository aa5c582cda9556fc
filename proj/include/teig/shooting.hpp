#pragma once

// Shooting for phi'' = (v(x) - lambda w(x)) phi, phi(0) = 0, phi'(0) = 1,
// co-integrating the lambda-derivative psi = d phi / d lambda, which obeys
// psi'' = (v - lambda w) psi - w phi with zero initial data.
//   wave:        w = rho, v = 0
//   Schrodinger: w = 1,   v = V, lambda = mu

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "errors.hpp"
#include "profile.hpp"

namespace teig {

using cplx = std::complex<double>;

enum class Equation { Wave, Schrodinger };

constexpr std::string_view to_string(Equation e) { return e == Equation::Wave ? "wave" : "schrodinger"; }

struct ShootingTrace {
  cplx lambda{};
  cplx phi_b{};
  cplx dphi_b{};
  cplx dlam_phi_b{};
  cplx dlam_dphi_b{};
  Equation equation = Equation::Wave;
  double x_end = 0.0;
  std::size_t steps = 0;
};

struct ShootingTolerances {
  double rtol = 1e-12;
  double atol = 1e-14;
  std::size_t max_steps = 2'000'000;
};

namespace detail {

using ShootState = std::array<cplx, 4>;  // phi, phi', psi, psi'

struct PieceSystem {
  const Piece* piece;
  cplx lambda;
  bool wave;

  void operator()(const ShootState& s, ShootState& ds, double x) const {
    const double pv = piece->value(x);
    const double w = wave ? pv : 1.0;
    const double v = wave ? 0.0 : pv;
    const cplx k = v - lambda * w;
    ds[0] = s[1];
    ds[1] = k * s[0];
    ds[2] = s[3];
    ds[3] = k * s[2] - w * s[0];
  }
};

inline ShootingTrace shoot(const Profile& p, cplx lambda, Equation eq, double x_end, const ShootingTolerances& tol) {
  namespace odeint = boost::numeric::odeint;
  using Stepper = odeint::runge_kutta_fehlberg78<ShootState, double, ShootState, double>;

  x_end = std::clamp(x_end, 0.0, p.b());
  const bool wave = eq == Equation::Wave;

  // Frequency scale for the error norm and first step.
  double wmax = 1.0, vmax = 0.0;
  for (const auto& pc : p.pieces()) {
    const double a0 = std::abs(pc.value(pc.x0)), a1 = std::abs(pc.value(pc.x1));
    const double am = std::abs(pc.value(0.5 * (pc.x0 + pc.x1)));
    const double m = std::max({a0, a1, am});
    if (wave) wmax = std::max(wmax, m); else vmax = std::max(vmax, m);
  }
  const double omega = std::sqrt(std::max(1.0, std::abs(lambda) * wmax + vmax));

  ShootState s{cplx{0.0}, cplx{1.0}, cplx{0.0}, cplx{0.0}};
  ShootState err{};
  Stepper stepper;
  double h = std::min(p.b(), 0.25 / omega);
  const double hmin = 1e-14 * p.b();
  std::size_t steps = 0;

  auto ratio = [&](const ShootState& y, const ShootState& e) {
    const double r0 = std::max(omega * std::abs(e[0]), std::abs(e[1])) /
                      (tol.atol + tol.rtol * (omega * std::abs(y[0]) + std::abs(y[1])));
    const double r1 = std::max(omega * std::abs(e[2]), std::abs(e[3])) /
                      (tol.atol + tol.rtol * (omega * std::abs(y[2]) + std::abs(y[3])));
    return std::max(r0, r1);
  };

  for (const auto& pc : p.pieces()) {
    if (pc.x0 >= x_end) break;
    const double end = std::min(pc.x1, x_end);
    PieceSystem sys{&pc, lambda, wave};
    double x = pc.x0;
    while (x < end) {
      const bool last = h >= end - x;
      const double dt = last ? end - x : h;
      ShootState trial = s;
      stepper.do_step(sys, trial, x, dt, err);
      const double r = ratio(trial, err);
      if (!std::isfinite(r)) {
        h = 0.25 * dt;
        if (h < hmin) throw Error(ErrorCode::ToleranceNotMet, "non-finite state during shooting");
        continue;
      }
      const double fac = std::clamp(0.9 * std::pow(std::max(r, 1e-30), -1.0 / 8.0), 0.2, 4.0);
      if (r <= 1.0) {
        s = trial;
        x = last ? end : x + dt;
        ++steps;
        if (!last || fac < 1.0) h = dt * fac;
        else h = std::max(h, dt * fac);
      } else {
        h = dt * fac;
        if (h < hmin) throw Error(ErrorCode::ToleranceNotMet, "step size underflow in shooting");
      }
      if (steps > tol.max_steps) throw Error(ErrorCode::ToleranceNotMet, "step budget exhausted in shooting");
    }
  }

  ShootingTrace t;
  t.lambda = lambda;
  t.phi_b = s[0];
  t.dphi_b = s[1];
  t.dlam_phi_b = s[2];
  t.dlam_dphi_b = s[3];
  t.equation = eq;
  t.x_end = x_end;
  t.steps = steps;
  return t;
}

}  // namespace detail

/// Wave IVP phi'' + lambda rho phi = 0 traced to x_end (default b).
inline ShootingTrace shoot_wave(const Profile& p, cplx lambda, const ShootingTolerances& tol = {}) {
  detail::require_rho(p);
  return detail::shoot(p, lambda, Equation::Wave, p.b(), tol);
}

inline ShootingTrace shoot_wave_to(const Profile& p, cplx lambda, double x_end, const ShootingTolerances& tol = {}) {
  detail::require_rho(p);
  return detail::shoot(p, lambda, Equation::Wave, x_end, tol);
}

/// Schrodinger IVP -phi'' + V phi = mu phi traced to x_end (default b).
inline ShootingTrace shoot_schrodinger(const Profile& p, cplx mu, const ShootingTolerances& tol = {}) {
  if (p.kind() != ProfileKind::SchrodingerPotential)
    throw Error(ErrorCode::InvalidProfile, "shoot_schrodinger requires a potential profile");
  return detail::shoot(p, mu, Equation::Schrodinger, p.b(), tol);
}

inline ShootingTrace shoot_schrodinger_to(const Profile& p, cplx mu, double x_end,
                                          const ShootingTolerances& tol = {}) {
  if (p.kind() != ProfileKind::SchrodingerPotential)
    throw Error(ErrorCode::InvalidProfile, "shoot_schrodinger requires a potential profile");
  return detail::shoot(p, mu, Equation::Schrodinger, x_end, tol);
}

/// Principal square root with arg in (-pi/2, pi/2]: on the negative real
/// axis the root is +i sqrt|lambda| regardless of the sign of a zero imag part.
inline cplx principal_sqrt(cplx z) {
  if (z.imag() == 0.0) {
    if (z.real() >= 0.0) return {std::sqrt(z.real()), 0.0};
    return {0.0, std::sqrt(-z.real())};
  }
  cplx r = std::sqrt(z);
  if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
  return r;
}

struct EnvelopeReport {
  cplx leading_phi{};
  cplx leading_dphi{};
  double ratio_phi = 0.0;   // |phi - lead| |sqrt(lambda)| exp(-|Im sqrt(lambda)| a)
  double ratio_dphi = 0.0;  // |phi' - lead'| exp(-|Im sqrt(lambda)| a)
  double rel_dev_phi = 0.0;
  double rel_dev_dphi = 0.0;
};

/// Compares a wave trace at b with the leading large-lambda terms built from
/// the Liouville data. Diagnostic only; never throws.
inline EnvelopeReport envelope_check(const ShootingTrace& t, const LiouvilleImage& img) {
  EnvelopeReport r;
  const cplx s = principal_sqrt(t.lambda);
  const double a = img.a();
  const double r0 = img.rho0(), rb = img.rhob();
  if (std::abs(s) == 0.0) {
    r.leading_phi = a / std::pow(r0 * rb, 0.25);
    r.leading_dphi = std::pow(rb / r0, 0.25);
  } else {
    r.leading_phi = std::sin(s * a) / (std::pow(r0 * rb, 0.25) * s);
    r.leading_dphi = std::pow(rb / r0, 0.25) * std::cos(s * a);
  }
  const double damp = std::exp(-std::abs(s.imag()) * a);
  const double dp = std::abs(t.phi_b - r.leading_phi);
  const double dd = std::abs(t.dphi_b - r.leading_dphi);
  r.ratio_phi = dp * std::max(std::abs(s), 1.0) * damp;
  r.ratio_dphi = dd * damp;
  r.rel_dev_phi = std::abs(r.leading_phi) > 0 ? dp / std::abs(r.leading_phi) : dp;
  r.rel_dev_dphi = std::abs(r.leading_dphi) > 0 ? dd / std::abs(r.leading_dphi) : dd;
  return r;
}

}  // namespace teig
