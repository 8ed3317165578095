#pragma once

#include <functional>

#include "imcv/disturbance.hpp"
#include "imcv/geometry.hpp"

namespace imcv {

/// Discrete-time stochastic system x' = F(x) + w on a rectangular domain.
/// F is mixed monotone with decomposition g: g(x,x) = F(x), g increasing in
/// the first argument and decreasing in the second.
struct SystemModel {
  std::size_t dim = 0;
  Rect domain;
  std::function<Vec(const Vec&, const Vec&)> decomposition;  // g(x, y)
  DisturbanceSpec disturbance;
  /// When set, mass that would leave the domain is held on its boundary.
  bool boundary_clipping = true;

  Vec nominal(const Vec& x) const { return decomposition(x, x); }
};

/// Monotone map supplied as F; decomposition g(x,y) = F(x).
SystemModel make_monotone_model(std::function<Vec(const Vec&)> f, Rect domain,
                                DisturbanceSpec disturbance, bool boundary_clipping);

/// Two-species bistable switch:
///   x1' = x1 + (-a*x1 + x2) * dt
///   x2' = x2 + (x1^2 / (x1^2 + 1) - b*x2) * dt
/// Monotone on x >= 0 for a*dt < 1 and b*dt < 1.
SystemModel make_bistable_switch(double a, double b, double dt, Rect domain,
                                 DisturbanceSpec disturbance, bool boundary_clipping);

/// Linear map x' = A x with decomposition g(x,y) = A+ x - A- y, where A+ and
/// A- are the positive and negative parts of A.
SystemModel make_linear_model(const std::vector<Vec>& a_matrix, Rect domain,
                              DisturbanceSpec disturbance, bool boundary_clipping);

}  // namespace imcv
