#pragma once

// Small quadrature layer over Boost.Math. Real integrands go straight to
// boost::math::quadrature; the complex Gauss-Kronrod panel used along contour
// edges is assembled here from Boost's node tables so callers see every
// sampled value.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace teig::quad {

using cplx = std::complex<double>;

namespace detail {

struct RealPanel {
  double kronrod, gauss, l1;
};

template <class F>
RealPanel real_panel(F& f, double a, double b) {
  using K = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const auto& xs = K::abscissa();
  const auto& wk = K::weights();
  const auto& wg = G::weights();
  RealPanel p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int signs = (i == 0) ? 1 : 2;
    for (int s = 0; s < signs; ++s) {
      const double v = f(mid + half * (s == 0 ? xs[i] : -xs[i]));
      p.kronrod += wk[i] * v;
      p.l1 += wk[i] * std::abs(v);
      if (i % 2 == 0) p.gauss += wg[i / 2] * v;
    }
  }
  p.kronrod *= half;
  p.gauss *= half;
  p.l1 *= std::abs(half);
  return p;
}

template <class F>
double adapt(F& f, double a, double b, const RealPanel& p, double abs_tol, unsigned depth) {
  const double err = std::abs(p.kronrod - p.gauss);
  if (depth == 0 || err <= abs_tol || err <= 50.0 * std::numeric_limits<double>::epsilon() * p.l1) return p.kronrod;
  const double m = 0.5 * (a + b);
  return adapt(f, a, m, real_panel(f, a, m), 0.5 * abs_tol, depth - 1) +
         adapt(f, m, b, real_panel(f, m, b), 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

/// Adaptive G7-K15 on [a, b] for a smooth real integrand; `tol` is relative
/// to the first panel's L1 estimate. (Boost's own adaptive driver compares
/// an unscaled panel error against a scaled tolerance and over-refines
/// short intervals, so only its node tables are used.)
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-14, unsigned max_depth = 20) {
  if (a == b) return 0.0;
  const auto p = detail::real_panel(f, a, b);
  return detail::adapt(f, a, b, p, tol * p.l1, max_depth);
}

/// Fixed 8-point Gauss-Legendre; exact for polynomials of degree <= 15.
template <class F>
double gauss8(F&& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
}

/// One G7-K15 panel for a complex path integral along the straight segment
/// z0 -> z1. `f(z)` may return any value type V with V{}, V += double * V and
/// V * cplx. Returns {Kronrod estimate, embedded Gauss estimate}.
template <class F>
auto kronrod_segment(F&& f, cplx z0, cplx z1) {
  using K = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  using V = std::decay_t<decltype(f(z0))>;
  const cplx mid = 0.5 * (z0 + z1);
  const cplx half = 0.5 * (z1 - z0);
  const auto& xs = K::abscissa();
  const auto& wk = K::weights();
  const auto& wg = G::weights();
  V kr{};
  V gs{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int signs = (i == 0) ? 1 : 2;
    for (int s = 0; s < signs; ++s) {
      const double x = (s == 0) ? xs[i] : -xs[i];
      const V val = f(mid + half * x);
      kr += wk[i] * val;
      // Gauss nodes are the even-indexed Kronrod nodes.
      if (i % 2 == 0) gs += wg[i / 2] * val;
    }
  }
  return std::pair<V, V>{kr * half, gs * half};
}

}  // namespace teig::quad
