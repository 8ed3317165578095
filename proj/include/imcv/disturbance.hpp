#pragma once

#include <vector>

namespace imcv {

enum class DistKind { truncated_gaussian, triangular };

/// One disturbance component: symmetric, unimodal density with a unique mode,
/// supported on a bounded interval.
class Disturbance1D {
 public:
  /// Gaussian N(mean, variance) truncated to [lo, hi] and renormalized.
  /// Symmetry requires lo + hi = 2*mean (within 1e-12).
  static Disturbance1D truncated_gaussian(double mean, double variance,
                                          double lo, double hi);
  /// Triangular density centered at `mode` with the given half-width.
  static Disturbance1D triangular(double mode, double half_width);

  DistKind kind() const { return kind_; }
  double mode() const { return mode_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

  double cdf(double x) const;
  double pdf(double x) const;
  /// Inverse CDF on (0,1); clamps to the support at the ends.
  double inverse_cdf(double u) const;

  // Truncated-gaussian parameters (mean == mode for symmetric truncation).
  double gauss_mean() const { return mode_; }
  double gauss_variance() const { return variance_; }
  double triangular_half_width() const { return hi_ - mode_; }

 private:
  Disturbance1D() = default;
  DistKind kind_ = DistKind::triangular;
  double mode_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double variance_ = 0.0;  // truncated-gaussian only
  double sigma_ = 0.0;
  double z_ = 1.0;        // probability mass of [lo_, hi_] under the untruncated normal
  double cdf_lo_raw_ = 0.0;
};

/// Per-dimension disturbance vector (mutually independent components).
using DisturbanceSpec = std::vector<Disturbance1D>;

}  // namespace imcv
