#pragma once

// Piecewise-cubic coefficient profiles: the wave speed rho(x) or the
// potential V(x) on [0, b], plus the quantities derived from rho alone
// (travel time, moments, Liouville change of variables).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace teig {

enum class ProfileKind { WaveSpeedRho, SchrodingerPotential };

/// Continuity enforced across breakpoints. Rho profiles default to C1;
/// Piecewise admits jumps (used by the piecewise-constant inversion families).
enum class Smoothness { C1, Piecewise };

/// One polynomial piece. Coefficients are in the local variable t = x - x0.
struct Piece {
  double x0 = 0.0;
  double x1 = 0.0;
  std::array<double, 4> coeffs{};

  [[nodiscard]] double value(double x) const {
    const double t = x - x0;
    return coeffs[0] + t * (coeffs[1] + t * (coeffs[2] + t * coeffs[3]));
  }
  [[nodiscard]] double d1(double x) const {
    const double t = x - x0;
    return coeffs[1] + t * (2.0 * coeffs[2] + t * 3.0 * coeffs[3]);
  }
  [[nodiscard]] double d2(double x) const { return 2.0 * coeffs[2] + 6.0 * coeffs[3] * (x - x0); }
  [[nodiscard]] double d3(double) const { return 6.0 * coeffs[3]; }
};

inline constexpr std::size_t kAuditGridPoints = 4096;

class Profile {
 public:
  Profile(double b, ProfileKind kind, std::vector<Piece> pieces, std::string name = {})
      : Profile(b, kind, std::move(pieces), std::move(name),
                kind == ProfileKind::WaveSpeedRho ? Smoothness::C1 : Smoothness::Piecewise) {}

  Profile(double b, ProfileKind kind, std::vector<Piece> pieces, std::string name, Smoothness smoothness)
      : b_(b), kind_(kind), pieces_(std::move(pieces)), name_(std::move(name)), smoothness_(smoothness) {
    validate();
  }

  static Profile constant(ProfileKind kind, double value, double b, std::string name = {}) {
    return Profile(b, kind, {Piece{0.0, b, {value, 0.0, 0.0, 0.0}}}, std::move(name));
  }

  /// Equal-width steps; always built with Smoothness::Piecewise.
  static Profile piecewise_constant(ProfileKind kind, std::span<const double> values, double b,
                                    std::string name = {}) {
    if (values.empty()) throw Error(ErrorCode::InvalidProfile, "piecewise_constant needs at least one value");
    std::vector<Piece> pieces;
    const auto k = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double x0 = b * static_cast<double>(i) / k;
      const double x1 = (i + 1 == values.size()) ? b : b * static_cast<double>(i + 1) / k;
      pieces.push_back(Piece{x0, x1, {values[i], 0.0, 0.0, 0.0}});
    }
    return Profile(b, kind, std::move(pieces), std::move(name), Smoothness::Piecewise);
  }

  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] ProfileKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] Smoothness smoothness() const noexcept { return smoothness_; }

  [[nodiscard]] std::size_t piece_index(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Piece& p) { return v < p.x0; });
    if (it == pieces_.begin()) return 0;
    return std::min<std::size_t>(static_cast<std::size_t>(it - pieces_.begin()) - 1, pieces_.size() - 1);
  }
  [[nodiscard]] const Piece& piece_at(double x) const { return pieces_[piece_index(x)]; }

  [[nodiscard]] double operator()(double x) const { return piece_at(x).value(x); }
  [[nodiscard]] double d1(double x) const { return piece_at(x).d1(x); }
  [[nodiscard]] double d2(double x) const { return piece_at(x).d2(x); }

  /// Largest |value| over the audit grid; used for step-size scaling.
  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for_audit_points([&](const Piece& p, double x) { m = std::max(m, std::abs(p.value(x))); });
    return m;
  }

  [[nodiscard]] bool is_constant(double value, double tol = 0.0) const {
    return std::all_of(pieces_.begin(), pieces_.end(), [&](const Piece& p) {
      return std::abs(p.coeffs[0] - value) <= tol && p.coeffs[1] == 0.0 && p.coeffs[2] == 0.0 &&
             p.coeffs[3] == 0.0;
    });
  }

 private:
  template <class F>
  void for_audit_points(F&& f) const {
    for (std::size_t i = 0; i <= kAuditGridPoints; ++i) {
      const double x = b_ * static_cast<double>(i) / static_cast<double>(kAuditGridPoints);
      f(piece_at(x), x);
    }
    for (const auto& p : pieces_) {
      f(p, p.x0);
      f(p, p.x1);
    }
  }

  void validate() const {
    if (!(b_ > 0.0) || !std::isfinite(b_)) throw Error(ErrorCode::InvalidProfile, "radius b must be positive");
    if (pieces_.empty()) throw Error(ErrorCode::InvalidProfile, "profile has no pieces");
    const double tol = 1e-12 * b_;
    if (std::abs(pieces_.front().x0) > tol) throw Error(ErrorCode::InvalidProfile, "first breakpoint must be 0");
    if (std::abs(pieces_.back().x1 - b_) > tol) throw Error(ErrorCode::InvalidProfile, "last breakpoint must be b");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (!(p.x1 > p.x0)) throw Error(ErrorCode::InvalidProfile, "breakpoints must be strictly increasing");
      for (double c : p.coeffs)
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidProfile, "non-finite coefficient");
      if (i + 1 < pieces_.size()) {
        const auto& q = pieces_[i + 1];
        if (std::abs(p.x1 - q.x0) > tol) throw Error(ErrorCode::InvalidProfile, "pieces are not contiguous");
        if (smoothness_ == Smoothness::C1) {
          const double v0 = p.value(p.x1), v1 = q.value(q.x0);
          const double s0 = p.d1(p.x1), s1 = q.d1(q.x0);
          if (std::abs(v0 - v1) > 1e-9 * (1.0 + std::abs(v0)))
            throw Error(ErrorCode::InvalidProfile, "profile is discontinuous at x=" + std::to_string(p.x1));
          if (std::abs(s0 - s1) > 1e-9 * (1.0 + std::abs(s0)))
            throw Error(ErrorCode::InvalidProfile, "first derivative jumps at x=" + std::to_string(p.x1));
        }
      }
    }
    if (kind_ == ProfileKind::WaveSpeedRho) {
      for_audit_points([&](const Piece& p, double x) {
        if (!(p.value(x) > 0.0))
          throw Error(ErrorCode::NonPositiveProfile, "rho <= 0 at x=" + std::to_string(x));
      });
    }
  }

  double b_;
  ProfileKind kind_;
  std::vector<Piece> pieces_;
  std::string name_;
  Smoothness smoothness_;
};

enum class Regime { ALessB, AEqualsB, AGreaterB };

constexpr std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::ALessB: return "a<b";
    case Regime::AEqualsB: return "a=b";
    case Regime::AGreaterB: return "a>b";
  }
  return "?";
}

namespace detail {
inline void require_rho(const Profile& p) {
  if (p.kind() != ProfileKind::WaveSpeedRho)
    throw Error(ErrorCode::InvalidProfile, "operation requires a wave-speed profile");
}
}  // namespace detail

/// a = integral of sqrt(rho) over [0, b].
inline double travel_time(const Profile& p) {
  detail::require_rho(p);
  double a = 0.0;
  for (const auto& pc : p.pieces())
    a += quad::integrate([&](double x) { return std::sqrt(pc.value(x)); }, pc.x0, pc.x1);
  return a;
}

inline Regime classify_regime(double a, double b, double rel_band = 1e-9) {
  if (std::abs(a - b) <= rel_band * b) return Regime::AEqualsB;
  return a < b ? Regime::ALessB : Regime::AGreaterB;
}

inline Regime classify_regime(const Profile& p, double rel_band = 1e-9) {
  return classify_regime(travel_time(p), p.b(), rel_band);
}

struct Moments {
  double m1 = 0.0;  // integral of z rho(z)
  double m2 = 0.0;  // integral of z^2 rho(z)
};

/// Moments over [0, x]. Pieces are polynomial, so 8-point Gauss is exact.
inline Moments moments(const Profile& p, double x) {
  detail::require_rho(p);
  if (x < -1e-14 * p.b() || x > p.b() * (1.0 + 1e-14))
    throw Error(ErrorCode::OutOfDomain, "moment abscissa outside [0,b]");
  x = std::clamp(x, 0.0, p.b());
  Moments m;
  for (const auto& pc : p.pieces()) {
    if (pc.x0 >= x) break;
    const double hi = std::min(pc.x1, x);
    m.m1 += quad::gauss8([&](double z) { return z * pc.value(z); }, pc.x0, hi);
    m.m2 += quad::gauss8([&](double z) { return z * z * pc.value(z); }, pc.x0, hi);
  }
  return m;
}

/// Integral over [0, b] of M1(z)^2. M1 is a quintic on each piece, so the
/// square is degree 10 and 8-point Gauss is exact.
inline double integral_m1_squared(const Profile& p) {
  detail::require_rho(p);
  double total = 0.0;
  double m1_start = 0.0;
  for (const auto& pc : p.pieces()) {
    auto m1 = [&](double z) { return m1_start + quad::gauss8([&](double s) { return s * pc.value(s); }, pc.x0, z); };
    total += quad::gauss8([&](double z) { double v = m1(z); return v * v; }, pc.x0, pc.x1);
    m1_start = m1(pc.x1);
  }
  return total;
}

/// Liouville change of variables y = int_0^x sqrt(rho). Holds the y-grid,
/// the potential q(y) as a piecewise-cubic Hermite profile on [0, a], and the
/// endpoint data the asymptotic envelopes need.
class LiouvilleImage {
 public:
  LiouvilleImage(Profile rho, std::size_t min_nodes) : rho_(std::move(rho)) {
    const auto& pcs = rho_.pieces();
    piece_y0_.reserve(pcs.size() + 1);
    piece_y0_.push_back(0.0);
    for (const auto& pc : pcs)
      piece_y0_.push_back(piece_y0_.back() +
                          quad::integrate([&](double x) { return std::sqrt(pc.value(x)); }, pc.x0, pc.x1));
    a_ = piece_y0_.back();
    rho0_ = rho_(0.0);
    rhob_ = rho_.pieces().back().value(rho_.b());
    phi0_scale_ = std::pow(rho0_, -0.25);
    build_tables(std::max<std::size_t>(min_nodes, 2));
  }

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double phi0_scale() const noexcept { return phi0_scale_; }
  [[nodiscard]] double rho0() const noexcept { return rho0_; }
  [[nodiscard]] double rhob() const noexcept { return rhob_; }
  [[nodiscard]] const Profile& q() const { return *q_; }
  [[nodiscard]] const Profile& rho() const noexcept { return rho_; }
  [[nodiscard]] const std::vector<double>& x_nodes() const noexcept { return x_nodes_; }
  [[nodiscard]] const std::vector<double>& y_nodes() const noexcept { return y_nodes_; }

  [[nodiscard]] double y_of_x(double x) const {
    x = std::clamp(x, 0.0, rho_.b());
    const std::size_t k = rho_.piece_index(x);
    const auto& pc = rho_.pieces()[k];
    return piece_y0_[k] + quad::integrate([&](double s) { return std::sqrt(pc.value(s)); }, pc.x0, x);
  }

  /// Inverse of y_of_x: safeguarded Newton inside the bracketing table cell.
  [[nodiscard]] double x_of_y(double y) const {
    y = std::clamp(y, 0.0, a_);
    auto it = std::upper_bound(y_nodes_.begin(), y_nodes_.end(), y);
    std::size_t j = (it == y_nodes_.begin()) ? 0 : static_cast<std::size_t>(it - y_nodes_.begin()) - 1;
    j = std::min(j, y_nodes_.size() - 2);
    double lo = x_nodes_[j], hi = x_nodes_[j + 1];
    double x = lo + (hi - lo) * (y - y_nodes_[j]) / (y_nodes_[j + 1] - y_nodes_[j]);
    for (int it_n = 0; it_n < 60; ++it_n) {
      const double f = y_of_x(x) - y;
      if (f > 0) hi = x; else lo = x;
      double xn = x - f / std::sqrt(rho_(x));
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (std::abs(xn - x) <= 1e-16 * (1.0 + std::abs(x))) return xn;
      x = xn;
    }
    return x;
  }

 private:
  // q and dq/dy at x, using the derivatives of the given piece.
  static std::pair<double, double> q_and_slope(const Piece& pc, double x) {
    const double r = pc.value(x), r1 = pc.d1(x), r2 = pc.d2(x), r3 = pc.d3(x);
    const double q = 0.25 * r2 / (r * r) - (5.0 / 16.0) * r1 * r1 / (r * r * r);
    const double dqdx = 0.25 * (r3 / (r * r) - 2.0 * r2 * r1 / (r * r * r)) -
                        (5.0 / 16.0) * (2.0 * r1 * r2 / (r * r * r) - 3.0 * r1 * r1 * r1 / (r * r * r * r));
    return {q, dqdx / std::sqrt(r)};
  }

  double x_in_piece(std::size_t k, double y) const {
    const auto& pc = rho_.pieces()[k];
    double lo = pc.x0, hi = pc.x1;
    const double ylo = piece_y0_[k], yhi = piece_y0_[k + 1];
    double x = lo + (hi - lo) * (y - ylo) / (yhi - ylo);
    for (int it = 0; it < 80; ++it) {
      const double f = ylo + quad::integrate([&](double s) { return std::sqrt(pc.value(s)); }, pc.x0, x) - y;
      if (f > 0) hi = x; else lo = x;
      double xn = x - f / std::sqrt(pc.value(x));
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (std::abs(xn - x) <= 1e-16 * (1.0 + std::abs(x))) return xn;
      x = xn;
    }
    return x;
  }

  void build_tables(std::size_t min_nodes) {
    const auto& pcs = rho_.pieces();
    const std::size_t intervals = min_nodes - 1;
    std::vector<Piece> qpieces;
    x_nodes_.assign(1, 0.0);
    y_nodes_.assign(1, 0.0);
    for (std::size_t k = 0; k < pcs.size(); ++k) {
      const double dy = piece_y0_[k + 1] - piece_y0_[k];
      const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(intervals * dy / a_)));
      double xa = pcs[k].x0, ya = piece_y0_[k];
      for (std::size_t i = 1; i <= n; ++i) {
        const double yb = (i == n) ? piece_y0_[k + 1] : piece_y0_[k] + dy * static_cast<double>(i) / n;
        const double xb = (i == n) ? pcs[k].x1 : x_in_piece(k, yb);
        const auto [q0, m0] = q_and_slope(pcs[k], xa);
        const auto [q1, m1] = q_and_slope(pcs[k], xb);
        const double h = yb - ya;
        const double c2 = (3.0 * (q1 - q0) / h - 2.0 * m0 - m1) / h;
        const double c3 = (m0 + m1 - 2.0 * (q1 - q0) / h) / (h * h);
        qpieces.push_back(Piece{ya, yb, {q0, m0, c2, c3}});
        x_nodes_.push_back(xb);
        y_nodes_.push_back(yb);
        xa = xb;
        ya = yb;
      }
    }
    q_.emplace(Profile(a_, ProfileKind::SchrodingerPotential, std::move(qpieces),
                       rho_.name().empty() ? "q" : rho_.name() + ":q", Smoothness::Piecewise));
  }

  Profile rho_;
  std::vector<double> piece_y0_;
  std::vector<double> x_nodes_;
  std::vector<double> y_nodes_;
  std::optional<Profile> q_;
  double a_ = 0.0;
  double rho0_ = 1.0;
  double rhob_ = 1.0;
  double phi0_scale_ = 1.0;
};

inline LiouvilleImage liouville_transform(const Profile& p, std::size_t min_nodes = 512) {
  detail::require_rho(p);
  if (p.smoothness() != Smoothness::C1)
    throw Error(ErrorCode::InvalidProfile, "Liouville transform needs a C1 profile with piecewise second derivative");
  return LiouvilleImage(p, min_nodes);
}

}  // namespace teig
