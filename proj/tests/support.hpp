#pragma once

// Shared fixtures and closed-form oracles for the test binaries.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <teig/teig.hpp>

namespace support {

using teig::cplx;
inline constexpr double pi = std::numbers::pi;

inline teig::Profile constant_rho(double v, double b = 1.0) {
  return teig::Profile::constant(teig::ProfileKind::WaveSpeedRho, v, b, "const");
}

/// Single-piece cubic rho on [0, b] with rho in [0.01, 0.74], so a < b.
inline teig::Profile random_cubic_rho(std::mt19937_64& rng, double b = 1.0) {
  std::uniform_real_distribution<double> c0(0.25, 0.5), ck(-0.08, 0.08);
  const double c1 = ck(rng) / b, c2 = ck(rng) / (b * b), c3 = ck(rng) / (b * b * b);
  return teig::Profile(b, teig::ProfileKind::WaveSpeedRho, {teig::Piece{0.0, b, {c0(rng), c1, c2, c3}}}, "cubic");
}

/// Cubic rho with values in [1.5, 2.5]: travel time above the radius.
inline teig::Profile random_dense_rho(std::mt19937_64& rng, double b = 1.0) {
  std::uniform_real_distribution<double> c0(1.8, 2.2), ck(-0.1, 0.1);
  return teig::Profile(b, teig::ProfileKind::WaveSpeedRho,
                       {teig::Piece{0.0, b, {c0(rng), ck(rng) / b, ck(rng) / (b * b), ck(rng) / (b * b * b)}}}, "dense");
}

inline teig::Profile random_potential(std::mt19937_64& rng, double b = 1.0) {
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  return teig::Profile(b, teig::ProfileKind::SchrodingerPotential, {teig::Piece{0.0, b, {c(rng), c(rng), c(rng), c(rng)}}},
                       "potential");
}

inline std::vector<cplx> random_lambdas(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(std::polar(radius * std::sqrt(u(rng)), 2.0 * pi * u(rng)));
  return out;
}

// rho = 1/4, b = 1: sqrt(lambda) D = 2 sin^3(sqrt(lambda)/2).
inline cplx d_quarter(cplx l) {
  const cplx s = std::sqrt(l);
  if (std::abs(s) < 1e-6) return l / 4.0;
  return 2.0 * std::pow(std::sin(s / 2.0), 3) / s;
}

// rho = 4/9, b = 1: sqrt(lambda) D = sin^3(u) (5 - 4 sin^2 u), u = sqrt(lambda)/3.
inline cplx d_four_ninths(cplx l) {
  const cplx s = std::sqrt(l);
  if (std::abs(s) < 1e-6) return 5.0 * l / 27.0;
  const cplx su = std::sin(s / 3.0);
  return su * su * su * (5.0 - 4.0 * su * su) / s;
}

/// Complex zeros of the rho = 4/9 closed form: 9((m + 1/2) pi +- i L/2)^2,
/// L = log((3 + sqrt 5)/2), m = 0, 1, ...
inline cplx four_ninths_pair(int m) {
  const double L = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  const cplx u{(m + 0.5) * pi, 0.5 * L};
  return 9.0 * u * u;
}

/// Spectral data for rho = 1/4, b = 1: zeros 4 j^2 pi^2 with multiplicity 3.
inline teig::SpectralData quarter_data(int groups, bool tail) {
  teig::SpectralData s;
  s.equation = teig::Equation::Wave;
  s.d = 1;
  s.gamma = 0.25;
  for (int j = 1; j <= groups; ++j) {
    teig::EigenvalueRecord r;
    r.lambda = 4.0 * j * j * pi * pi;
    r.multiplicity = 3;
    r.index_hint = j;
    s.zeros.push_back(r);
  }
  if (tail) s.tail = teig::TailModel{0.5, 1.0};
  return s;
}

/// Code of the teig::Error thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<teig::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const teig::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace support
