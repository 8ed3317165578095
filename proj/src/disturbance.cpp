#include "imcv/disturbance.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "imcv/errors.hpp"

namespace imcv {

namespace {
double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
}  // namespace

Disturbance1D Disturbance1D::truncated_gaussian(double mean, double variance,
                                                double lo, double hi) {
  if (!(variance > 0.0)) throw ModelError("truncated gaussian: variance must be positive");
  if (!(lo < hi)) throw ModelError("truncated gaussian: empty support");
  if (std::abs(lo + hi - 2.0 * mean) > 1e-12)
    throw ModelError("truncated gaussian: support must be symmetric about the mean");
  Disturbance1D d;
  d.kind_ = DistKind::truncated_gaussian;
  d.mode_ = mean;
  d.lo_ = lo;
  d.hi_ = hi;
  d.variance_ = variance;
  d.sigma_ = std::sqrt(variance);
  d.cdf_lo_raw_ = phi((lo - mean) / d.sigma_);
  d.z_ = phi((hi - mean) / d.sigma_) - d.cdf_lo_raw_;
  if (!(d.z_ > 0.0)) throw ModelError("truncated gaussian: support mass underflow");
  return d;
}

Disturbance1D Disturbance1D::triangular(double mode, double half_width) {
  if (half_width < 0.0) throw ModelError("triangular: half-width must be nonnegative");
  // half_width 0 degenerates to a deterministic disturbance at the mode.
  Disturbance1D d;
  d.kind_ = DistKind::triangular;
  d.mode_ = mode;
  d.lo_ = mode - half_width;
  d.hi_ = mode + half_width;
  return d;
}

double Disturbance1D::cdf(double x) const {
  if (lo_ == hi_) return x < mode_ ? 0.0 : 1.0;
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  if (kind_ == DistKind::truncated_gaussian)
    return (phi((x - mode_) / sigma_) - cdf_lo_raw_) / z_;
  double h = hi_ - mode_;
  if (x <= mode_) {
    double t = x - lo_;
    return t * t / (2.0 * h * h);
  }
  double t = hi_ - x;
  return 1.0 - t * t / (2.0 * h * h);
}

double Disturbance1D::pdf(double x) const {
  if (x < lo_ || x > hi_ || lo_ == hi_) return 0.0;
  if (kind_ == DistKind::truncated_gaussian) {
    double t = (x - mode_) / sigma_;
    double raw = std::exp(-0.5 * t * t) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
    return raw / z_;
  }
  double h = hi_ - mode_;
  return (h - std::abs(x - mode_)) / (h * h);
}

double Disturbance1D::inverse_cdf(double u) const {
  if (lo_ == hi_) return mode_;
  if (u <= 0.0) return lo_;
  if (u >= 1.0) return hi_;
  if (kind_ == DistKind::truncated_gaussian) {
    boost::math::normal_distribution<double> n(mode_, sigma_);
    double x = boost::math::quantile(n, cdf_lo_raw_ + u * z_);
    return std::clamp(x, lo_, hi_);
  }
  double h = hi_ - mode_;
  if (u <= 0.5) return lo_ + h * std::sqrt(2.0 * u);
  return hi_ - h * std::sqrt(2.0 * (1.0 - u));
}

}  // namespace imcv
