#pragma once

// Recovery of rho (or V) from spectral data: travel time from the real-zero
// lattice, the Dirichlet / Dirichlet-Neumann spectra by cardinal sampling of
// the product, and a Levenberg-Marquardt forward fit of a profile family.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dispersion.hpp"
#include "errors.hpp"
#include "factorization.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "sampling.hpp"
#include "spectra.hpp"

namespace teig {

/// Travel time from the large-index real zeros, lambda_n ~ n^2 pi^2/(a - b)^2.
/// Uses a = b - pi n/sqrt(lambda_n) when that is positive, else b + pi n/sqrt(lambda_n);
/// the a < b branch wins whenever both are admissible.
inline double infer_travel_time(const SpectralData& s, double b) {
  std::vector<std::pair<double, std::optional<int>>> real;
  for (const auto& z : s.zeros)
    if (z.lambda.imag() == 0.0 && z.lambda.real() > 0.0) real.emplace_back(z.lambda.real(), z.index_hint);
  std::sort(real.begin(), real.end());
  real.erase(std::unique(real.begin(), real.end(),
                         [](const auto& x, const auto& y) { return std::abs(x.first - y.first) <= 1e-12 * y.first; }),
             real.end());
  if (real.size() < 5) throw Error(ErrorCode::InsufficientRealZeros, "need at least 5 distinct positive real zeros");
  const bool hinted = std::all_of(real.begin(), real.end(), [](const auto& r) { return r.second.has_value(); });
  // Upper half of the available indices, weighted by n^2.
  double num = 0.0, den = 0.0;
  for (std::size_t i = real.size() / 2; i < real.size(); ++i) {
    const double n = hinted ? static_cast<double>(*real[i].second) : static_cast<double>(i + 1);
    const double c = std::numbers::pi * n / std::sqrt(real[i].first);
    num += n * n * c;
    den += n * n;
  }
  const double c = num / den;
  const double a_low = b - c;
  if (a_low > 1e-6 * b) return a_low;
  if (std::abs(a_low) <= 1e-6 * b)
    throw Error(ErrorCode::PathologicalLattice, "lattice implies zero travel time (rho would vanish)");
  return b + c;
}

struct TwoSpectra {
  std::vector<double> dirichlet;
  std::vector<double> dirichlet_neumann;
  double holdout_residual = 0.0;  // max relative mismatch S h - C g vs Xi off-lattice
};

/// Auxiliary spectra from the product Xi. phi(b; s^2)/gamma is sampled on
/// s = n pi/b and phi'(b; s^2)/gamma on s = (n - 1/2) pi/b, both interpolated
/// by even cardinal series in t = b s/pi, and their real zeros are returned
/// for t below n_max/2.
inline TwoSpectra extract_two_spectra(const SpectralData& s, double b, int n_max,
                                      std::optional<std::size_t> truncation = std::nullopt) {
  if (!s.gamma) throw Error(ErrorCode::GammaMissing, "sampling needs gamma (any positive placeholder works)");
  if (n_max < 4) throw Error(ErrorCode::OutOfDomain, "n_max must be at least 4");
  const double pi = std::numbers::pi;
  const int limit = n_max / 2;
  TwoSpectra out;
  if (s.trivial()) {
    for (int n = 1; n <= limit; ++n) out.dirichlet.push_back(n * n * pi * pi / (b * b));
    for (int n = 1; 2 * n - 1 <= 2 * limit; ++n)
      if ((2 * n - 1) * 0.5 <= limit) out.dirichlet_neumann.push_back((2 * n - 1) * (2 * n - 1) * pi * pi / (4 * b * b));
    return out;
  }
  if (s.equation == Equation::Schrodinger)
    throw Error(ErrorCode::InterpolationIllConditioned,
                "Schrodinger traces have exponential type b: the b-lattice samples them critically");
  double a = 0.0;
  if (s.tail) a = s.tail->a;
  else a = infer_travel_time(s, b);
  if (!(a < b * (1.0 - 1e-9)))
    throw Error(ErrorCode::InterpolationIllConditioned,
                "travel time not below the radius: the b-lattice does not oversample the traces");
  const double band = pi * a / b;
  const std::size_t trunc = truncation.value_or(zero_groups(s).size());
  auto xi = [&](double l) { return xi_eval(s, l, trunc).real(); };

  std::vector<double> g(static_cast<std::size_t>(n_max) + 1), h(static_cast<std::size_t>(n_max));
  {
    std::vector<double> g1(static_cast<std::size_t>(n_max));
    const auto phi = sample_phi_grid([&](cplx l) { return cplx(xi(l.real())); }, b, n_max);
    for (int n = 0; n < n_max; ++n) g1[static_cast<std::size_t>(n)] = phi[static_cast<std::size_t>(n)].second.real();
    g[0] = alternating_centre_sample(g1, band);
    std::copy(g1.begin(), g1.end(), g.begin() + 1);
    const auto dphi = sample_dphi_grid([&](cplx l) { return cplx(xi(l.real())); }, b, n_max);
    for (int n = 0; n < n_max; ++n) h[static_cast<std::size_t>(n)] = dphi[static_cast<std::size_t>(n)].second.real();
  }
  const EvenCardinalSeries gs(g, 0.0, band), hs(h, 0.5, band);

  // Held-out check at quarter points.
  double worst = 0.0, scale = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (int m = 0; m < limit; ++m) {
    for (double off : {0.25, 0.75}) {
      const double t = m + off;
      const double sq = t * pi / b;
      const auto f = trig_prefactors(sq * sq, b);
      const double rec = f.s.real() * hs(t) - f.c.real() * gs(t);
      const double ref = xi(sq * sq);
      pts.emplace_back(rec, ref);
      scale = std::max(scale, std::abs(ref));
    }
  }
  for (const auto& [rec, ref] : pts) worst = std::max(worst, std::abs(rec - ref) / scale);
  out.holdout_residual = worst;
  if (!(worst <= 1e-3))
    throw Error(ErrorCode::InterpolationIllConditioned,
                "cardinal interpolation disagrees with the product off-lattice (relative " + std::to_string(worst) + ")");

  auto roots = [&](const EvenCardinalSeries& f) {
    std::vector<double> r;
    const double step = 0.02;
    double t0 = step, f0 = f(t0);
    for (double t1 = t0 + step; t1 <= limit; t1 += step) {
      const double f1 = f(t1);
      if (f0 == 0.0) r.push_back(t0);
      else if ((f0 < 0) != (f1 < 0)) {
        double lo = t0, hi = t1, flo = f0;
        for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        r.push_back(0.5 * (lo + hi));
      }
      t0 = t1;
      f0 = f1;
    }
    for (double& t : r) t = (t * pi / b) * (t * pi / b);
    return r;
  };
  out.dirichlet = roots(gs);
  out.dirichlet_neumann = roots(hs);
  return out;
}

enum class ParamFamily { Constant, PiecewiseConstant, PiecewiseCubic };

constexpr std::string_view to_string(ParamFamily f) {
  switch (f) {
    case ParamFamily::Constant: return "constant";
    case ParamFamily::PiecewiseConstant: return "piecewise_constant";
    case ParamFamily::PiecewiseCubic: return "piecewise_cubic";
  }
  return "?";
}

struct Parametrization {
  ParamFamily family = ParamFamily::Constant;
  int k = 1;  // pieces

  [[nodiscard]] std::size_t size() const {
    switch (family) {
      case ParamFamily::Constant: return 1;
      case ParamFamily::PiecewiseConstant: return static_cast<std::size_t>(k);
      case ParamFamily::PiecewiseCubic: return static_cast<std::size_t>(k) + 1;
    }
    return 0;
  }
};

/// Profile for a parameter vector. PiecewiseCubic takes node values on a
/// uniform grid and uses finite-difference slopes, which keeps the result C1.
inline Profile build_profile(const Parametrization& par, const std::vector<double>& p, double b, ProfileKind kind) {
  if (p.size() != par.size()) throw Error(ErrorCode::SchemaError, "parameter vector has the wrong length");
  switch (par.family) {
    case ParamFamily::Constant: return Profile::constant(kind, p[0], b, "fit");
    case ParamFamily::PiecewiseConstant: return Profile::piecewise_constant(kind, p, b, "fit");
    case ParamFamily::PiecewiseCubic: {
      const auto k = static_cast<std::size_t>(par.k);
      const double hx = b / static_cast<double>(k);
      std::vector<double> slope(k + 1);
      for (std::size_t i = 0; i <= k; ++i) {
        if (k == 1) slope[i] = (p[1] - p[0]) / hx;
        else if (i == 0) slope[i] = (p[1] - p[0]) / hx;
        else if (i == k) slope[i] = (p[k] - p[k - 1]) / hx;
        else slope[i] = (p[i + 1] - p[i - 1]) / (2.0 * hx);
      }
      std::vector<Piece> pieces;
      for (std::size_t i = 0; i < k; ++i) {
        const double x0 = hx * static_cast<double>(i);
        const double x1 = (i + 1 == k) ? b : hx * static_cast<double>(i + 1);
        const double h = x1 - x0;
        const double dv = p[i + 1] - p[i];
        const double c2 = (3.0 * dv / h - 2.0 * slope[i] - slope[i + 1]) / h;
        const double c3 = (slope[i] + slope[i + 1] - 2.0 * dv / h) / (h * h);
        pieces.push_back(Piece{x0, x1, {p[i], slope[i], c2, c3}});
      }
      return Profile(b, kind, std::move(pieces), "fit", Smoothness::C1);
    }
  }
  throw Error(ErrorCode::SchemaError, "unknown parametrization");
}

struct FitTargets {
  std::optional<std::size_t> zero_groups;  // first K groups; all when empty
  std::vector<double> dirichlet;
  std::vector<double> dirichlet_neumann;
  double tolerance = 1e-7;  // on the RMS misfit
  int max_iterations = 100;
  unsigned workers = 1;
};

struct InversionProblem {
  SpectralData data;
  double b = 1.0;
  Regime regime = Regime::ALessB;
  Parametrization parametrization;
  std::vector<std::pair<double, double>> bounds;  // per parameter; defaults when empty
  std::vector<double> seed;                       // defaults when empty
};

struct InversionResult {
  Profile profile = Profile::constant(ProfileKind::WaveSpeedRho, 1.0, 1.0);
  double misfit = 0.0;
  std::vector<double> per_eigenvalue_residuals;
  int iterations = 0;
  bool converged = false;
  double inferred_a = std::numeric_limits<double>::quiet_NaN();
};

/// Hypothesis checks made before any numerical work.
inline double check_regime(const InversionProblem& pr) {
  const auto& s = pr.data;
  if (pr.regime == Regime::AGreaterB)
    throw Error(ErrorCode::RegimeMismatch,
                "travel time exceeds the radius: uniqueness from the zeros is not available in this regime, refusing to invert");
  if (s.trivial()) return pr.b;
  if (pr.regime == Regime::AEqualsB && !s.gamma)
    throw Error(ErrorCode::GammaMissing,
                "equal travel time and radius: recovery requires gamma in addition to the zeros");
  double a = std::numeric_limits<double>::quiet_NaN();
  if (s.tail) {
    a = s.tail->a;
    if (classify_regime(a, s.tail->b) == Regime::AGreaterB)
      throw Error(ErrorCode::RegimeMismatch,
                  "tail model has travel time above the radius: uniqueness from the zeros is not available, refusing to invert");
  }
  if (s.equation == Equation::Wave && pr.regime == Regime::ALessB) {
    try {
      a = infer_travel_time(s, pr.b);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientRealZeros) throw;
    }
    if (std::isfinite(a) && classify_regime(a, pr.b) != Regime::ALessB)
      throw Error(ErrorCode::RegimeMismatch,
                  "zeros imply a travel time of " + std::to_string(a) + " which is not below the radius " + std::to_string(pr.b));
  }
  return a;
}

namespace detail {

struct Misfit {
  std::vector<double> r;
  bool feasible = true;
};

inline Misfit evaluate_misfit(const InversionProblem& pr, const FitTargets& tg, const std::vector<ZeroGroup>& groups,
                              const std::vector<double>& p) {
  Misfit out;
  const bool wave = pr.data.equation == Equation::Wave;
  const ProfileKind kind = wave ? ProfileKind::WaveSpeedRho : ProfileKind::SchrodingerPotential;
  std::optional<Profile> trial;
  try {
    trial.emplace(build_profile(pr.parametrization, p, pr.b, kind));
    if (wave && pr.regime == Regime::ALessB && !(travel_time(*trial) < pr.b)) out.feasible = false;
  } catch (const Error&) {
    out.feasible = false;
  }
  if (!out.feasible) return out;
  auto D = [&](cplx l) { return wave ? eval_D(*trial, l).value : eval_D_schrodinger(*trial, l).value; };
  for (const auto& g : groups) {
    const int m = g.multiplicity;
    const double rad = 0.05 * std::max(1.0, std::abs(g.lambda));
    const auto c = cauchy_taylor(D, g.lambda, rad, m, 16);
    const cplx cm = c[static_cast<std::size_t>(m)];
    // Monic local polynomial in the variable (lambda - lambda_j)/rad: its lower
    // coefficients are symmetric functions of the nearby trial zeros and vanish
    // together exactly when the trial has an m-fold zero at lambda_j.
    for (int k = 0; k < m; ++k) {
      const cplx rk = c[static_cast<std::size_t>(k)] / cm / std::pow(rad, m - k);
      out.r.push_back(rk.real());
      if (g.pair) out.r.push_back(rk.imag());
    }
  }
  for (double l : tg.dirichlet) {
    const auto t = wave ? shoot_wave(*trial, l) : shoot_schrodinger(*trial, l);
    out.r.push_back((t.phi_b / t.dlam_phi_b).real());
  }
  for (double l : tg.dirichlet_neumann) {
    const auto t = wave ? shoot_wave(*trial, l) : shoot_schrodinger(*trial, l);
    out.r.push_back((t.dphi_b / t.dlam_dphi_b).real());
  }
  if (pr.regime == Regime::AEqualsB && pr.data.gamma) {
    const double target = *pr.data.gamma;
    const double got = wave ? maclaurin(*trial).gamma : maclaurin_schrodinger(*trial).gamma;
    out.r.push_back((got - target) / std::abs(target));
  }
  for (double v : out.r)
    if (!std::isfinite(v)) out.feasible = false;
  return out;
}

inline double rms(const std::vector<double>& r) {
  if (r.empty()) return 0.0;
  double s = 0.0;
  for (double v : r) s += v * v;
  return std::sqrt(s / static_cast<double>(r.size()));
}

}  // namespace detail

/// Levenberg-Marquardt fit of the parametrization to the spectral targets.
inline InversionResult fit_profile(const InversionProblem& pr, const FitTargets& tg = {}) {
  const double a_inferred = check_regime(pr);
  const bool wave = pr.data.equation == Equation::Wave;
  const ProfileKind kind = wave ? ProfileKind::WaveSpeedRho : ProfileKind::SchrodingerPotential;
  InversionResult res;
  res.inferred_a = a_inferred;
  if (pr.data.trivial()) {
    res.profile = Profile::constant(kind, wave ? 1.0 : 0.0, pr.b, wave ? "rho=1" : "V=0");
    res.converged = true;
    res.inferred_a = pr.b;
    return res;
  }
  const std::size_t np = pr.parametrization.size();
  std::vector<std::pair<double, double>> bounds = pr.bounds;
  if (bounds.empty()) bounds.assign(np, wave ? std::pair{1e-4, 1e2} : std::pair{-1e4, 1e4});
  std::vector<double> p = pr.seed;
  if (p.empty()) p.assign(np, wave ? 0.5 : 0.0);
  if (bounds.size() != np || p.size() != np) throw Error(ErrorCode::SchemaError, "bounds/seed length mismatch");
  auto project = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < np; ++i) v[i] = std::clamp(v[i], bounds[i].first, bounds[i].second);
  };
  project(p);
  // The misfit landscape is oscillatory in the travel time; start from a seed
  // rescaled to the travel time read off the real-zero lattice.
  if (wave && std::isfinite(a_inferred) && pr.regime == Regime::ALessB) {
    try {
      const double a_seed = travel_time(build_profile(pr.parametrization, p, pr.b, kind));
      const double kappa = (a_inferred / a_seed) * (a_inferred / a_seed);
      std::vector<double> q = p;
      for (double& v : q) v *= kappa;
      project(q);
      if (detail::evaluate_misfit(pr, tg, {}, q).feasible) p = q;
    } catch (const Error&) {
    }
  }

  auto groups = zero_groups(pr.data);
  if (tg.zero_groups && *tg.zero_groups < groups.size()) groups.resize(*tg.zero_groups);
  std::size_t nres = tg.dirichlet.size() + tg.dirichlet_neumann.size() + (pr.regime == Regime::AEqualsB ? 1 : 0);
  for (const auto& g : groups) nres += static_cast<std::size_t>(g.multiplicity) * (g.pair ? 2 : 1);
  if (nres < np)
    throw Error(ErrorCode::InsufficientZeros, "fewer spectral constraints than parameters");

  auto cur = detail::evaluate_misfit(pr, tg, groups, p);
  if (!cur.feasible) throw Error(ErrorCode::NotConverged, "seed profile is infeasible for the declared regime");
  double cost = detail::rms(cur.r);
  double mu = 1e-3;
  int it = 0;
  for (; it < tg.max_iterations && cost > tg.tolerance; ++it) {
    const std::size_t m = cur.r.size();
    Eigen::MatrixXd J(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(np));
    std::vector<detail::Misfit> cols(np);
    std::vector<double> steps(np);
    parallel_for(np, tg.workers, [&](std::size_t j) {
      std::vector<double> q = p;
      double h = 1e-5 * (1.0 + std::abs(p[j]));
      if (q[j] + h > bounds[j].second) h = -h;
      q[j] += h;
      steps[j] = h;
      cols[j] = detail::evaluate_misfit(pr, tg, groups, q);
    });
    for (std::size_t j = 0; j < np; ++j) {
      if (!cols[j].feasible || cols[j].r.size() != m) {
        // Try the other side of the parameter.
        std::vector<double> q = p;
        steps[j] = -steps[j];
        q[j] += steps[j];
        cols[j] = detail::evaluate_misfit(pr, tg, groups, q);
        if (!cols[j].feasible) throw Error(ErrorCode::NotConverged, "Jacobian column infeasible on both sides");
      }
      for (std::size_t i = 0; i < m; ++i)
        J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (cols[j].r[i] - cur.r[i]) / steps[j];
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * Eigen::Map<const Eigen::VectorXd>(cur.r.data(), static_cast<Eigen::Index>(m));

    bool accepted = false;
    double step_norm = 0.0;
    for (int inner = 0; inner < 30 && !accepted; ++inner) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal() += mu * (JtJ.diagonal().array() + 1e-12).matrix();
      const Eigen::VectorXd delta = A.ldlt().solve(-g);
      if (!delta.allFinite()) {
        mu *= 4.0;
        continue;
      }
      std::vector<double> q = p;
      for (std::size_t d = 0; d < np; ++d) q[d] += delta(static_cast<Eigen::Index>(d));
      project(q);
      step_norm = 0.0;
      for (std::size_t d = 0; d < np; ++d) step_norm = std::max(step_norm, std::abs(q[d] - p[d]) / (1.0 + std::abs(p[d])));
      auto trial = detail::evaluate_misfit(pr, tg, groups, q);
      const double tc = trial.feasible ? detail::rms(trial.r) : std::numeric_limits<double>::infinity();
      if (tc < cost) {
        p = q;
        cur = std::move(trial);
        cost = tc;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
      } else {
        mu *= 4.0;
        if (step_norm < 1e-12) break;
      }
    }
    if (!accepted || step_norm < 1e-12) {
      ++it;
      break;
    }
  }
  res.profile = build_profile(pr.parametrization, p, pr.b, kind);
  res.misfit = cost;
  res.per_eigenvalue_residuals = cur.r;
  res.iterations = it;
  res.converged = cost <= tg.tolerance;
  if (wave && !std::isfinite(res.inferred_a)) res.inferred_a = travel_time(res.profile);
  return res;
}

}  // namespace teig
