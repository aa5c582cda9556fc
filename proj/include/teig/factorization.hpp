#pragma once

// Spectral data, the genus-zero product Xi(lambda) = lambda^d prod (1 - lambda/lambda_n),
// D = gamma Xi, the lattice sampling identities and the sum rule.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "dispersion.hpp"
#include "errors.hpp"
#include "spectra.hpp"

namespace teig {

struct TailModel {
  double a = 0.0;
  double b = 0.0;
};

struct SpectralData {
  Equation equation = Equation::Wave;
  int d = 1;
  // Absent when unknown; 0 encodes D identically zero (trivial data).
  std::optional<double> gamma;
  std::vector<EigenvalueRecord> zeros;  // nonzero zeros only
  std::optional<TailModel> tail;

  [[nodiscard]] bool trivial() const { return gamma && *gamma == 0.0; }
};

/// One real zero or one conjugate pair, the unit counted by `truncation`.
struct ZeroGroup {
  cplx lambda{};  // representative, Im >= 0
  int multiplicity = 1;
  bool pair = false;
};

inline void validate(const SpectralData& s) {
  if (s.d < 0) throw Error(ErrorCode::SchemaError, "origin order d must be nonnegative");
  if (s.equation == Equation::Wave && s.d < 1 && !s.trivial())
    throw Error(ErrorCode::SchemaError, "wave data must have a zero of order d >= 1 at the origin");
  for (const auto& z : s.zeros) {
    if (z.multiplicity < 1) throw Error(ErrorCode::SchemaError, "zero multiplicity must be positive");
    if (z.lambda == cplx(0.0)) throw Error(ErrorCode::SchemaError, "origin belongs in d, not in the zero list");
    if (z.lambda.imag() == 0.0) continue;
    const bool has_partner = std::any_of(s.zeros.begin(), s.zeros.end(), [&](const EigenvalueRecord& w) {
      return w.multiplicity == z.multiplicity &&
             std::abs(w.lambda - std::conj(z.lambda)) <= 1e-8 * std::max(1.0, std::abs(z.lambda));
    });
    if (!has_partner) throw Error(ErrorCode::SchemaError, "zero list is not closed under conjugation");
  }
  if (s.tail && !(s.tail->a > 0.0 && s.tail->b > 0.0))
    throw Error(ErrorCode::SchemaError, "tail model needs positive a and b");
}

/// Groups sorted by ascending |lambda| (ties by Re, then Im).
inline std::vector<ZeroGroup> zero_groups(const SpectralData& s) {
  std::vector<ZeroGroup> g;
  for (const auto& z : s.zeros) {
    if (z.lambda.imag() < 0.0) continue;
    g.push_back(ZeroGroup{z.lambda, z.multiplicity, z.lambda.imag() > 0.0});
  }
  std::sort(g.begin(), g.end(), [](const ZeroGroup& a, const ZeroGroup& b) {
    const double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
    if (ma != mb) return ma < mb;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return g;
}

/// Builds spectral data from located records: the origin record sets d.
inline SpectralData spectral_data_from_records(const std::vector<EigenvalueRecord>& recs, Equation eq,
                                               std::optional<double> gamma, std::optional<TailModel> tail) {
  SpectralData s;
  s.equation = eq;
  s.d = 0;
  s.gamma = gamma;
  s.tail = tail;
  for (const auto& r : recs) {
    if (r.lambda == cplx(0.0)) s.d += r.multiplicity;
    else s.zeros.push_back(r);
  }
  return s;
}

namespace detail {

struct TailSetup {
  double c = 0.0;       // |b - a|
  double weight = 0.0;  // zeros per lattice index, (a + b)/|b - a|
  double q = 1.0;       // first lattice index not covered by the data
};

inline TailSetup tail_setup(const TailModel& t, const std::vector<ZeroGroup>& used) {
  TailSetup ts;
  ts.c = std::abs(t.b - t.a);
  if (!(ts.c > 1e-9 * t.b))
    throw Error(ErrorCode::RegimeAEqualsB, "tail lattice undefined when the travel time equals the radius");
  ts.weight = (t.a + t.b) / ts.c;
  double top = 0.0;
  for (const auto& g : used) top = std::max(top, principal_sqrt(g.lambda).real());
  ts.q = ts.c * top / std::numbers::pi + 1.0;
  return ts;
}

// Hurwitz zeta at even argument 2k from the polygamma function.
inline double hurwitz_even(int k, double q) {
  const int m = 2 * k - 1;
  return boost::math::polygamma(m, q) / boost::math::factorial<double>(static_cast<unsigned>(m));
}

// log prod_{n >= q} (1 - x/n^2)^w, n = q, q+1, ...
inline cplx log_tail(cplx x, const TailSetup& ts) {
  cplx acc{0.0};
  double q = ts.q;
  // Peel off direct factors until the power series converges quickly.
  while (std::abs(x) > 0.25 * q * q) {
    acc += ts.weight * std::log(1.0 - x / (q * q));
    q += 1.0;
  }
  cplx xk = x;
  for (int k = 1; k <= 60; ++k) {
    const cplx term = xk / static_cast<double>(k) * hurwitz_even(k, q);
    acc -= ts.weight * term;
    if (std::abs(term) <= 1e-17 * (1.0 + std::abs(acc))) break;
    xk *= x;
  }
  return acc;
}

}  // namespace detail

struct XiValue {
  cplx value{};
  std::size_t groups_used = 0;
  bool tail_active = false;
};

/// lambda^d times the product over the first `truncation` zero groups, with
/// the optional free-lattice tail beyond them.
inline XiValue xi_eval_detailed(const SpectralData& s, cplx lambda, std::size_t truncation) {
  const auto groups = zero_groups(s);
  if (truncation > groups.size() && !s.tail)
    throw Error(ErrorCode::InsufficientZeros, "truncation exceeds the available zero groups and no tail model is set");
  const std::size_t n = std::min(truncation, groups.size());
  cplx prod = std::pow(lambda, s.d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = groups[i];
    cplx f;
    if (g.pair) {
      const double m2 = std::norm(g.lambda);
      f = 1.0 - lambda * (2.0 * g.lambda.real() / m2) + lambda * lambda / m2;
    } else {
      f = 1.0 - lambda / g.lambda;
    }
    prod *= g.multiplicity == 1 ? f : std::pow(f, g.multiplicity);
  }
  XiValue out;
  out.groups_used = n;
  if (s.tail) {
    const std::vector<ZeroGroup> used(groups.begin(), groups.begin() + static_cast<std::ptrdiff_t>(n));
    const auto ts = detail::tail_setup(*s.tail, used);
    const cplx x = lambda * (ts.c * ts.c) / (std::numbers::pi * std::numbers::pi);
    prod *= std::exp(detail::log_tail(x, ts));
    out.tail_active = true;
  }
  out.value = prod;
  return out;
}

inline cplx xi_eval(const SpectralData& s, cplx lambda, std::size_t truncation) {
  return xi_eval_detailed(s, lambda, truncation).value;
}

inline cplx reconstruct_D(const SpectralData& s, cplx lambda, std::size_t truncation) {
  if (!s.gamma) throw Error(ErrorCode::GammaMissing, "reconstructing D needs gamma");
  return *s.gamma * xi_eval(s, lambda, truncation);
}

using ComplexFn = std::function<cplx(cplx)>;

/// (n^2 pi^2/b^2, (-1)^(n+1) D) for n = 1..n_max: phi(b; .) on the sine-zero lattice.
inline std::vector<std::pair<double, cplx>> sample_phi_grid(const ComplexFn& d_source, double b, int n_max) {
  std::vector<std::pair<double, cplx>> out;
  for (int n = 1; n <= n_max; ++n) {
    const double l = n * n * std::numbers::pi * std::numbers::pi / (b * b);
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    out.emplace_back(l, sign * d_source(l));
  }
  return out;
}

/// ((2n-1)^2 pi^2/(4 b^2), (-1)^(n+1) sqrt(lambda) D): phi'(b; .) on the cosine-zero lattice.
inline std::vector<std::pair<double, cplx>> sample_dphi_grid(const ComplexFn& d_source, double b, int n_max) {
  std::vector<std::pair<double, cplx>> out;
  for (int n = 1; n <= n_max; ++n) {
    const double s = (2 * n - 1) * std::numbers::pi / (2.0 * b);
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    out.emplace_back(s * s, sign * s * d_source(s * s));
  }
  return out;
}

/// Relative residual |-gamma sum mult/lambda_j - D2| / |D2| over the first
/// `truncation` groups (all when omitted), plus the lattice tail if present.
inline double sum_rule_check(const SpectralData& s, const MaclaurinData& m,
                             std::optional<std::size_t> truncation = std::nullopt) {
  if (s.d != 1 || m.d != 1) throw Error(ErrorCode::WrongOriginOrder, "sum rule needs a simple zero at the origin");
  const double gamma = s.gamma ? *s.gamma : m.gamma;
  const auto groups = zero_groups(s);
  const std::size_t n = std::min(truncation.value_or(groups.size()), groups.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = groups[i];
    const double inv = g.pair ? 2.0 * (1.0 / g.lambda).real() : (1.0 / g.lambda).real();
    sum += g.multiplicity * inv;
  }
  if (s.tail) {
    const std::vector<ZeroGroup> used(groups.begin(), groups.begin() + static_cast<std::ptrdiff_t>(n));
    const auto ts = detail::tail_setup(*s.tail, used);
    sum += ts.weight * ts.c * ts.c / (std::numbers::pi * std::numbers::pi) * boost::math::trigamma(ts.q);
  }
  const double lhs = -gamma * sum;
  return std::abs(lhs - m.sum_rule_rhs) / std::abs(m.sum_rule_rhs);
}

}  // namespace teig
