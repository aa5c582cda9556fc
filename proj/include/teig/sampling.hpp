#pragma once

// Gaussian-regularized cardinal series on a unit-spaced lattice. Samples are
// indexed by t = offset + k, k = 0, 1, ...; the function is even in t, so the
// mirrored samples are implied.

#include <cmath>
#include <numbers>
#include <vector>

namespace teig {

inline double sinc_pi(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - (std::numbers::pi * std::numbers::pi * x * x) / 6.0;
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

class EvenCardinalSeries {
 public:
  /// `samples[k]` is the value at t = offset + k. `band` is the half-width
  /// of the spectrum in unit-spacing units; it must be below pi.
  EvenCardinalSeries(std::vector<double> samples, double offset, double band)
      : s_(std::move(samples)), offset_(offset), band_(band) {}

  /// Largest t covered by the samples.
  [[nodiscard]] double t_max() const { return offset_ + static_cast<double>(s_.size()) - 1.0; }

  [[nodiscard]] double operator()(double t) const {
    // Window width balances the Gaussian tail against the distance to the
    // last available sample.
    const double room = std::max(1.0, t_max() - std::abs(t));
    const double r = std::sqrt(room / (std::numbers::pi - band_));
    double acc = 0.0;
    for (std::size_t k = 0; k < s_.size(); ++k) {
      const double tk = offset_ + static_cast<double>(k);
      for (int side = 0; side < (tk == 0.0 ? 1 : 2); ++side) {
        const double u = t - (side == 0 ? tk : -tk);
        acc += s_[k] * sinc_pi(u) * std::exp(-u * u / (2.0 * r * r));
      }
    }
    return acc;
  }

 private:
  std::vector<double> s_;
  double offset_;
  double band_;
};

/// Missing centre sample of an even oversampled sequence: the alternating sum
/// over all integer samples of a function with band below pi vanishes, so
/// g(0) = 2 sum_{n >= 1} (-1)^(n+1) g(n), evaluated with a Gaussian taper.
inline double alternating_centre_sample(const std::vector<double>& g_from_one, double band) {
  const double n = static_cast<double>(g_from_one.size());
  const double r = std::sqrt(n / (std::numbers::pi - band));
  double acc = 0.0;
  for (std::size_t k = 0; k < g_from_one.size(); ++k) {
    const double t = static_cast<double>(k + 1);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * g_from_one[k] * std::exp(-t * t / (2.0 * r * r));
  }
  return 2.0 * acc;
}

}  // namespace teig
