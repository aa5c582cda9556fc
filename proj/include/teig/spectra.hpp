#pragma once

// Zeros of the dispersion function by argument-principle counting on
// rectangles with recursive subdivision; Dirichlet and Dirichlet-Neumann
// spectra of the shooting traces; the large-n real-zero lattice.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dispersion.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "shooting.hpp"

namespace teig {

struct DispersionEvaluator {
  DispersionFn fn;
  double b = 1.0;
  Equation equation = Equation::Wave;
  std::optional<double> lattice_c;  // |a - b| when the real-zero lattice is defined
};

inline DispersionEvaluator make_evaluator(const Profile& p, ShootingTolerances tol = {}) {
  DispersionEvaluator ev;
  ev.b = p.b();
  if (p.kind() == ProfileKind::WaveSpeedRho) {
    ev.fn = wave_dispersion(p, tol);
    ev.equation = Equation::Wave;
    const double a = travel_time(p);
    if (classify_regime(a, p.b()) != Regime::AEqualsB) ev.lattice_c = std::abs(a - p.b());
  } else {
    ev.fn = schrodinger_dispersion(p, tol);
    ev.equation = Equation::Schrodinger;
  }
  return ev;
}

enum class BoxStatus { Unresolved, Resolved, OnBoundaryRetry };

struct ContourBox {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
  int winding = 0;
  BoxStatus status = BoxStatus::Unresolved;

  [[nodiscard]] cplx centre() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
  [[nodiscard]] double diameter() const { return std::hypot(re_hi - re_lo, im_hi - im_lo); }
  [[nodiscard]] bool contains(cplx z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
};

enum class RecordKind { Origin, RealPositive, RealNegative, ComplexPair };

constexpr std::string_view to_string(RecordKind k) {
  switch (k) {
    case RecordKind::Origin: return "origin";
    case RecordKind::RealPositive: return "real_positive";
    case RecordKind::RealNegative: return "real_negative";
    case RecordKind::ComplexPair: return "complex_pair";
  }
  return "?";
}

struct EigenvalueRecord {
  cplx lambda{};
  int multiplicity = 1;
  RecordKind kind = RecordKind::RealPositive;
  std::optional<int> index_hint;
  double residual = 0.0;
};

struct SpectraOptions {
  // Terminal box diameter, relative to max(1, |centre|).
  double resolution = 1e-4;
  // |D| below this fraction of its local magnitude (the size of the terms
  // that cancel in it) counts as a zero on the contour.
  double zero_on_contour_rel = 1e-12;
  double integer_tolerance = 0.1;
  // Accepted |Kronrod - Gauss| per panel, in units of winding number.
  double panel_tol = 1e-4;
  int max_panel_depth = 40;
  int max_depth = 60;
  int max_retries = 5;
  // D is declared identically zero when all probes fall below this times b.
  double identically_zero_abs = 1e-13;
  // Relative rounding level of D against DispersionValue::magnitude.
  double noise_rel = 1e-12;
  // Subdivision stops once a contour comes within this factor of the noise.
  double noise_guard = 1e3;
  unsigned workers = 1;
};

namespace detail {

struct Moment2 {
  cplx n{};  // D'/D
  cplx m{};  // lambda D'/D
  Moment2& operator+=(const Moment2& o) {
    n += o.n;
    m += o.m;
    return *this;
  }
};
inline Moment2 operator*(double w, const Moment2& a) { return {w * a.n, w * a.m}; }
inline Moment2 operator*(const Moment2& a, cplx h) { return {a.n * h, a.m * h}; }
inline Moment2 operator+(Moment2 a, const Moment2& b) { return a += b; }
inline Moment2 operator-(const Moment2& a) { return {-a.n, -a.m}; }

struct EdgeResult {
  Moment2 integral{};
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  double min_snr = std::numeric_limits<double>::infinity();  // min |D| / noise
  bool ok = true;
};

struct BoxCount {
  cplx raw{};        // (1/2 pi i) contour integral of D'/D
  cplx moment{};     // (1/2 pi i) contour integral of lambda D'/D
  int winding = 0;
  double min_snr = 0.0;
  bool zero_on_contour = false;
  bool ok = false;
};

class ContourEngine {
 public:
  ContourEngine(const DispersionEvaluator& ev, const SpectraOptions& opt) : ev_(ev), opt_(opt) {}

  EdgeResult edge(cplx z0, cplx z1) {
    const bool swap = std::make_pair(z1.real(), z1.imag()) < std::make_pair(z0.real(), z0.imag());
    const cplx a = swap ? z1 : z0, b = swap ? z0 : z1;
    const std::array<double, 4> key{a.real(), a.imag(), b.real(), b.imag()};
    EdgeResult r;
    bool cached = false;
    {
      std::lock_guard lk(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        r = it->second;
        cached = true;
      }
    }
    if (!cached) {
      r = integrate(a, b, 0);
      std::lock_guard lk(mu_);
      cache_.emplace(key, r);
    }
    if (swap) r.integral = -r.integral;
    return r;
  }

  BoxCount count(const ContourBox& box) {
    const cplx c0{box.re_lo, box.im_lo}, c1{box.re_hi, box.im_lo}, c2{box.re_hi, box.im_hi},
        c3{box.re_lo, box.im_hi};
    const EdgeResult e[4] = {edge(c0, c1), edge(c1, c2), edge(c2, c3), edge(c3, c0)};
    BoxCount out;
    Moment2 total{};
    double min_snr = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const auto& ed : e) {
      total += ed.integral;
      min_snr = std::min(min_snr, ed.min_snr);
      ok = ok && ed.ok;
    }
    const cplx twopii{0.0, 2.0 * std::numbers::pi};
    out.raw = total.n / twopii;
    out.moment = total.m / twopii;
    out.min_snr = min_snr;
    out.zero_on_contour = !(min_snr * opt_.noise_rel >= opt_.zero_on_contour_rel) || !ok;
    const double rounded = std::round(out.raw.real());
    out.winding = static_cast<int>(rounded);
    out.ok = !out.zero_on_contour && std::isfinite(out.raw.real()) &&
             std::abs(out.raw.real() - rounded) <= opt_.integer_tolerance &&
             std::abs(out.raw.imag()) <= opt_.integer_tolerance && out.winding >= 0;
    return out;
  }

  DispersionValue eval(cplx z) const { return ev_.fn(z); }

 private:
  struct Panel {
    Moment2 kr, gs;
    double min_abs, max_abs, min_snr;
    bool finite;
  };

  Panel panel(cplx a, cplx b) const {
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0, snr = std::numeric_limits<double>::infinity();
    bool finite = true;
    auto f = [&](cplx z) {
      const DispersionValue v = ev_.fn(z);
      const double av = std::abs(v.value);
      mn = std::min(mn, av);
      mx = std::max(mx, av);
      const double noise = opt_.noise_rel * v.magnitude;
      snr = std::min(snr, noise > 0.0 ? av / noise : std::numeric_limits<double>::infinity());
      if (!(av > 0.0) || !std::isfinite(av)) {
        finite = false;
        return Moment2{};
      }
      const cplx q = v.dvalue / v.value;
      return Moment2{q, z * q};
    };
    auto [kr, gs] = quad::kronrod_segment(f, a, b);
    return Panel{kr, gs, mn, mx, snr, finite};
  }

  EdgeResult integrate(cplx a, cplx b, int depth) const {
    const Panel p = panel(a, b);
    EdgeResult r;
    r.min_abs = p.min_abs;
    r.max_abs = p.max_abs;
    r.min_snr = p.min_snr;
    if (!p.finite) {
      r.ok = false;
      return r;
    }
    const double err = std::abs(p.kr.n - p.gs.n) / (2.0 * std::numbers::pi);
    if (err <= opt_.panel_tol) {
      r.integral = p.kr;
      return r;
    }
    if (depth >= opt_.max_panel_depth) {
      r.integral = p.kr;
      r.ok = false;
      return r;
    }
    const cplx m = 0.5 * (a + b);
    const EdgeResult l = integrate(a, m, depth + 1);
    const EdgeResult h = integrate(m, b, depth + 1);
    r.integral = l.integral + h.integral;
    r.min_abs = std::min(l.min_abs, h.min_abs);
    r.max_abs = std::max(l.max_abs, h.max_abs);
    r.min_snr = std::min(l.min_snr, h.min_snr);
    r.ok = l.ok && h.ok;
    return r;
  }

  const DispersionEvaluator& ev_;
  const SpectraOptions& opt_;
  std::mutex mu_;
  std::map<std::array<double, 4>, EdgeResult> cache_;
};

inline ContourBox dilate(const ContourBox& b, double f) {
  const cplx c = b.centre();
  const double hw = 0.5 * (b.re_hi - b.re_lo) * f, hh = 0.5 * (b.im_hi - b.im_lo) * f;
  return ContourBox{c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
}

inline constexpr std::array<double, 5> kDilations{1.01, 0.99, 1.02, 0.98, 1.03};
inline constexpr std::array<double, 6> kSplitFractions{0.5137, 0.4871, 0.5411, 0.4623, 0.5589, 0.4419};

inline void check_not_identically_zero(const DispersionEvaluator& ev, const ContourBox& region,
                                       const SpectraOptions& opt) {
  static constexpr std::array<double, 4> fr{0.13, 0.37, 0.61, 0.87};
  for (double fx : fr) {
    for (double fy : fr) {
      const cplx z{region.re_lo + fx * (region.re_hi - region.re_lo), region.im_lo + fy * (region.im_hi - region.im_lo)};
      const DispersionValue v = ev.fn(z);
      const double floor = std::max(opt.identically_zero_abs * ev.b, 10.0 * opt.noise_rel * v.magnitude);
      if (std::abs(v.value) >= floor) return;
    }
  }
  throw Error(ErrorCode::IdenticallyZero,
              "dispersion function vanishes at all probe points: trivial profile (rho = 1 or V = 0)");
}

/// Counts with the deterministic dilation sequence; returns the box actually used.
inline std::pair<ContourBox, BoxCount> count_with_retry(ContourEngine& eng, const ContourBox& box,
                                                        const SpectraOptions& opt) {
  BoxCount c = eng.count(box);
  if (c.ok) return {box, c};
  bool on_contour = c.zero_on_contour;
  const int tries = std::min<int>(opt.max_retries, static_cast<int>(kDilations.size()));
  for (int i = 0; i < tries; ++i) {
    ContourBox d = dilate(box, kDilations[static_cast<std::size_t>(i)]);
    c = eng.count(d);
    if (c.ok) return {d, c};
    on_contour = on_contour || c.zero_on_contour;
  }
  if (on_contour) throw Error(ErrorCode::ZeroOnContour, "zero of D on the contour after dilation retries");
  throw Error(ErrorCode::QuadratureNotConverged, "winding integral did not settle near an integer");
}

struct Split {
  std::vector<ContourBox> children;
  std::vector<BoxCount> counts;
  bool ok = false;
};

inline Split split_box(ContourEngine& eng, const ContourBox& b, int parent_winding, const SpectraOptions& /*opt*/) {
  const double w = b.re_hi - b.re_lo, h = b.im_hi - b.im_lo;
  const bool cut_re = !(h > 2.0 * w);
  const bool cut_im = !(w > 2.0 * h);
  for (double f : kSplitFractions) {
    std::vector<double> xs{b.re_lo}, ys{b.im_lo};
    if (cut_re) xs.push_back(b.re_lo + f * w);
    if (cut_im) ys.push_back(b.im_lo + f * h);
    xs.push_back(b.re_hi);
    ys.push_back(b.im_hi);
    Split s;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      for (std::size_t j = 0; j + 1 < ys.size(); ++j) s.children.push_back(ContourBox{xs[i], xs[i + 1], ys[j], ys[j + 1]});
    int total = 0;
    bool ok = true;
    for (const auto& c : s.children) {
      s.counts.push_back(eng.count(c));
      ok = ok && s.counts.back().ok;
      total += s.counts.back().winding;
    }
    if (ok && total == parent_winding) {
      s.ok = true;
      return s;
    }
  }
  return {};
}

struct Terminal {
  ContourBox box;
  BoxCount count;
};

inline bool touching(const ContourBox& a, const ContourBox& b) {
  const double eps = 1e-12 * (1.0 + std::max({std::abs(a.re_lo), std::abs(a.re_hi), std::abs(b.re_lo), std::abs(b.re_hi)}));
  return a.re_lo <= b.re_hi + eps && b.re_lo <= a.re_hi + eps && a.im_lo <= b.im_hi + eps && b.im_lo <= a.im_hi + eps;
}

struct CircleResult {
  cplx winding{};
  cplx moment{};
};

/// Trapezoid rule for (1/2 pi i) contour integrals of D'/D and lambda D'/D on a circle.
inline CircleResult circle_moments(const DispersionEvaluator& ev, cplx c, double r, int n) {
  CircleResult out;
  for (int j = 0; j < n; ++j) {
    const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / n);
    const cplx z = c + r * u;
    const DispersionValue v = ev.fn(z);
    const cplx q = v.dvalue / v.value * (r * u);
    out.winding += q;
    out.moment += z * q;
  }
  out.winding /= static_cast<double>(n);
  out.moment /= static_cast<double>(n);
  return out;
}

}  // namespace detail

/// Winding number of a circle around `c`; cross-check for a record's multiplicity.
inline int circle_winding(const DispersionEvaluator& ev, cplx c, double r, int n = 128) {
  return static_cast<int>(std::lround(detail::circle_moments(ev, c, r, n).winding.real()));
}

/// Number of zeros (with multiplicity) inside the box by the argument principle.
inline int count_zeros(const DispersionEvaluator& ev, const ContourBox& box, const SpectraOptions& opt = {}) {
  detail::check_not_identically_zero(ev, box, opt);
  detail::ContourEngine eng(ev, opt);
  return detail::count_with_retry(eng, box, opt).second.winding;
}

/// All zeros in the region, one record per resolved cluster, sorted by (Re, Im).
inline std::vector<EigenvalueRecord> find_eigenvalues(const DispersionEvaluator& ev, const ContourBox& region,
                                                      const SpectraOptions& opt = {}) {
  using namespace detail;
  if (!(opt.resolution > 0.0)) throw Error(ErrorCode::OutOfDomain, "resolution must be positive");
  if (!(region.re_hi > region.re_lo && region.im_hi > region.im_lo))
    throw Error(ErrorCode::OutOfDomain, "search region must have positive width and height");
  check_not_identically_zero(ev, region, opt);

  ContourEngine eng(ev, opt);
  auto [top, top_count] = count_with_retry(eng, region, opt);
  std::vector<Terminal> terminals;
  std::vector<Terminal> frontier;
  if (top_count.winding > 0) frontier.push_back({top, top_count});

  for (int depth = 0; !frontier.empty(); ++depth) {
    if (depth > opt.max_depth) throw Error(ErrorCode::MaxDepthExceeded, "subdivision depth limit reached");
    std::vector<Split> splits(frontier.size());
    std::vector<char> terminal(frontier.size(), 0);
    parallel_for(frontier.size(), opt.workers, [&](std::size_t i) {
      const auto& t = frontier[i];
      const double target = opt.resolution * std::max(1.0, std::abs(t.box.centre()));
      if (t.box.diameter() <= target || t.count.min_snr < opt.noise_guard) {
        terminal[i] = 1;
        return;
      }
      splits[i] = split_box(eng, t.box, t.count.winding, opt);
      if (!splits[i].ok) terminal[i] = 1;
    });
    std::vector<Terminal> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (terminal[i]) {
        terminals.push_back(frontier[i]);
        continue;
      }
      for (std::size_t k = 0; k < splits[i].children.size(); ++k)
        if (splits[i].counts[k].winding > 0) next.push_back({splits[i].children[k], splits[i].counts[k]});
    }
    frontier = std::move(next);
  }

  // Group touching terminal boxes: a cluster straddling a split line is one cluster.
  const std::size_t nt = terminals.size();
  std::vector<std::size_t> parent(nt);
  for (std::size_t i = 0; i < nt; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = i + 1; j < nt; ++j)
      if (touching(terminals[i].box, terminals[j].box)) parent[find(i)] = find(j);

  struct Cluster {
    int m = 0;
    cplx moment{};
    std::vector<ContourBox> boxes;
    cplx centre{};
    double extent = 0.0;
  };
  std::map<std::size_t, Cluster> by_root;
  for (std::size_t i = 0; i < nt; ++i) {
    auto& c = by_root[find(i)];
    c.m += terminals[i].count.winding;
    c.moment += terminals[i].count.moment;
    c.boxes.push_back(terminals[i].box);
  }
  std::vector<Cluster> clusters;
  for (auto& [k, c] : by_root) {
    c.centre = c.moment / static_cast<double>(c.m);
    for (const auto& b : c.boxes)
      for (cplx corner : {cplx{b.re_lo, b.im_lo}, cplx{b.re_hi, b.im_lo}, cplx{b.re_lo, b.im_hi}, cplx{b.re_hi, b.im_hi}})
        c.extent = std::max(c.extent, std::abs(corner - c.centre));
    clusters.push_back(std::move(c));
  }

  std::vector<EigenvalueRecord> recs(clusters.size());
  parallel_for(clusters.size(), opt.workers, [&](std::size_t i) {
    const auto& c = clusters[i];
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < clusters.size(); ++j)
      if (j != i) nearest = std::min(nearest, std::abs(clusters[j].centre - c.centre));
    // A wide circle keeps |D| far above rounding noise on the contour, which is
    // what makes the centroid of a multiple zero accurate.
    double r = 0.5 * std::max(1.0 / (ev.b * ev.b), std::sqrt(std::abs(c.centre)) / ev.b);
    r = std::min(r, 0.45 * nearest);
    r = std::max(r, c.extent);
    cplx z = c.centre;
    double used_r = c.extent;
    for (int attempt = 0; attempt < 10; ++attempt) {
      const auto cm = circle_moments(ev, c.centre, r, 64);
      if (std::isfinite(cm.winding.real()) && std::abs(cm.winding - cplx(c.m)) < 1e-2) {
        z = cm.moment / static_cast<double>(c.m);
        used_r = r;
        break;
      }
      if (r <= c.extent) break;
      r = std::max(0.5 * r, c.extent);
    }
    const double mag = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) <= 1e-7 * mag) z.imag(0.0);
    if (c.m == 1) {
      cplx w = z;
      for (int it = 0; it < 30; ++it) {
        const DispersionValue v = ev.fn(w);
        if (v.value == 0.0) break;
        const cplx step = v.value / v.dvalue;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        w -= step;
        if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(w))) break;
      }
      if (std::abs(w - z) <= std::max(used_r, c.extent)) z = w;
    }
    auto& rec = recs[i];
    if (ev.equation == Equation::Wave && std::abs(z) <= 1e-9 * std::max(1.0, 1.0 / (ev.b * ev.b))) z = 0.0;
    rec.lambda = z;
    rec.multiplicity = c.m;
    rec.residual = std::abs(ev.fn(z).value);
    if (z == cplx(0.0)) rec.kind = RecordKind::Origin;
    else if (z.imag() != 0.0) rec.kind = RecordKind::ComplexPair;
    else rec.kind = z.real() > 0 ? RecordKind::RealPositive : RecordKind::RealNegative;
    if (rec.kind == RecordKind::RealPositive && ev.lattice_c) {
      const long n = std::lround(*ev.lattice_c * std::sqrt(z.real()) / std::numbers::pi);
      if (n >= 1) rec.index_hint = static_cast<int>(n);
    }
  });

  // Enforce conjugate pairing: partners are averaged so they are exact conjugates.
  std::vector<char> paired(recs.size(), 0);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].kind != RecordKind::ComplexPair || recs[i].lambda.imag() < 0 || paired[i]) continue;
    std::size_t best = recs.size();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < recs.size(); ++j) {
      if (j == i || paired[j] || recs[j].kind != RecordKind::ComplexPair || recs[j].lambda.imag() >= 0) continue;
      if (recs[j].multiplicity != recs[i].multiplicity) continue;
      const double d = std::abs(recs[j].lambda - std::conj(recs[i].lambda));
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    const double tol = 1e-6 * std::max(1.0, std::abs(recs[i].lambda)) +
                       opt.resolution * std::max(1.0, std::abs(recs[i].lambda));
    if (best < recs.size() && bd <= tol) {
      const cplx avg = 0.5 * (recs[i].lambda + std::conj(recs[best].lambda));
      recs[i].lambda = avg;
      recs[best].lambda = std::conj(avg);
      paired[i] = paired[best] = 1;
    }
  }

  std::sort(recs.begin(), recs.end(), [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return recs;
}

inline std::vector<EigenvalueRecord> find_eigenvalues(const DispersionEvaluator& ev, const ContourBox& region,
                                                      double resolution) {
  SpectraOptions opt;
  opt.resolution = resolution;
  return find_eigenvalues(ev, region, opt);
}

/// n^2 pi^2 / (a - b)^2.
inline double asymptotic_lattice(const Profile& p, int n) {
  const double a = travel_time(p);
  if (classify_regime(a, p.b()) == Regime::AEqualsB)
    throw Error(ErrorCode::RegimeAEqualsB, "lattice undefined when the travel time equals the radius");
  const double c = a - p.b();
  return static_cast<double>(n) * n * std::numbers::pi * std::numbers::pi / (c * c);
}

namespace detail {

// Zeros of phi(b; .) or phi'(b; .) on the real axis, scanning upward with a
// step tied to the local spacing of the free lattice and refining each sign
// change by safeguarded Newton.
inline std::vector<double> trace_zeros(const Profile& p, int count, bool derivative, const ShootingTolerances& tol) {
  if (count <= 0) return {};
  const bool wave = p.kind() == ProfileKind::WaveSpeedRho;
  const double a = wave ? travel_time(p) : p.b();
  double shift = 0.0;
  if (!wave) {
    shift = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= kAuditGridPoints; ++i) shift = std::min(shift, p(p.b() * i / static_cast<double>(kAuditGridPoints)));
  }
  auto g = [&](double l) {
    const auto t = wave ? shoot_wave(p, l, tol) : shoot_schrodinger(p, l, tol);
    return derivative ? std::pair{t.dphi_b.real(), t.dlam_dphi_b.real()} : std::pair{t.phi_b.real(), t.dlam_phi_b.real()};
  };
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double unit = pi2 / (a * a);
  const double lmax = shift + 4.0 * unit * (count + 5.0) * (count + 5.0) + 10.0 * unit;
  double lo = wave ? 0.0 : shift - unit;
  auto [glo, dlo] = g(lo);
  std::vector<double> out;
  while (static_cast<int>(out.size()) < count) {
    const double spacing = std::max(unit, 2.0 * std::numbers::pi * std::sqrt(std::max(lo - shift, 0.0)) / a);
    const double hi = lo + 0.05 * spacing;
    if (hi > lmax) throw Error(ErrorCode::BracketingFailed, "auxiliary spectrum: ran past the bracketing window");
    auto [ghi, dhi] = g(hi);
    if (ghi == 0.0) {
      out.push_back(hi);
    } else if ((glo < 0) != (ghi < 0) && glo != 0.0) {
      double x0 = lo, x1 = hi, f0 = glo;
      double x = 0.5 * (x0 + x1);
      for (int it = 0; it < 200; ++it) {
        auto [fx, dfx] = g(x);
        if (fx == 0.0) break;
        if ((fx < 0) == (f0 < 0)) {
          x0 = x;
          f0 = fx;
        } else {
          x1 = x;
        }
        double xn = x - fx / dfx;
        if (!(xn > x0 && xn < x1)) xn = 0.5 * (x0 + x1);
        if (std::abs(xn - x) <= 2e-16 * std::max(1.0, std::abs(x)) || x1 - x0 <= 4e-16 * std::max(1.0, std::abs(x))) {
          x = xn;
          break;
        }
        x = xn;
      }
      out.push_back(x);
    }
    lo = hi;
    glo = ghi;
  }
  return out;
}

}  // namespace detail

/// First `count` zeros of lambda -> phi(b; lambda).
inline std::vector<double> dirichlet_spectrum(const Profile& p, int count, const ShootingTolerances& tol = {}) {
  return detail::trace_zeros(p, count, false, tol);
}

/// First `count` zeros of lambda -> phi'(b; lambda).
inline std::vector<double> dirichlet_neumann_spectrum(const Profile& p, int count, const ShootingTolerances& tol = {}) {
  return detail::trace_zeros(p, count, true, tol);
}

}  // namespace teig
