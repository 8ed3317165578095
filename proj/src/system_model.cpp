#include "imcv/system_model.hpp"

#include <utility>

#include "imcv/errors.hpp"

namespace imcv {

namespace {
void check_sizes(const Rect& domain, const DisturbanceSpec& w) {
  if (domain.dim() != w.size())
    throw ModelError("model: disturbance dimension does not match domain");
}
}  // namespace

SystemModel make_monotone_model(std::function<Vec(const Vec&)> f, Rect domain,
                                DisturbanceSpec disturbance, bool boundary_clipping) {
  check_sizes(domain, disturbance);
  SystemModel m;
  m.dim = domain.dim();
  m.domain = std::move(domain);
  m.disturbance = std::move(disturbance);
  m.boundary_clipping = boundary_clipping;
  m.decomposition = [f = std::move(f)](const Vec& x, const Vec&) { return f(x); };
  return m;
}

SystemModel make_bistable_switch(double a, double b, double dt, Rect domain,
                                 DisturbanceSpec disturbance, bool boundary_clipping) {
  if (a * dt >= 1.0 || b * dt >= 1.0)
    throw ModelError("bistable switch: a*dt and b*dt must be < 1 for monotonicity");
  if (domain.dim() != 2) throw ModelError("bistable switch: 2-dimensional model");
  auto f = [a, b, dt](const Vec& x) {
    Vec y(2);
    y[0] = x[0] + (-a * x[0] + x[1]) * dt;
    y[1] = x[1] + (x[0] * x[0] / (x[0] * x[0] + 1.0) - b * x[1]) * dt;
    return y;
  };
  return make_monotone_model(f, std::move(domain), std::move(disturbance),
                             boundary_clipping);
}

SystemModel make_linear_model(const std::vector<Vec>& a_matrix, Rect domain,
                              DisturbanceSpec disturbance, bool boundary_clipping) {
  check_sizes(domain, disturbance);
  const std::size_t n = domain.dim();
  if (a_matrix.size() != n)
    throw ModelError("linear model: matrix row count does not match domain");
  for (const auto& row : a_matrix)
    if (row.size() != n) throw ModelError("linear model: matrix must be square");
  SystemModel m;
  m.dim = n;
  m.domain = std::move(domain);
  m.disturbance = std::move(disturbance);
  m.boundary_clipping = boundary_clipping;
  m.decomposition = [a_matrix, n](const Vec& x, const Vec& y) {
    Vec out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double a = a_matrix[i][j];
        if (a >= 0)
          out[i] += a * x[j];
        else
          out[i] += a * y[j];  // -(-a) * y[j]
      }
    return out;
  };
  return m;
}

}  // namespace imcv
