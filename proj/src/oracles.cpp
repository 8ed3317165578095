#include "imcv/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <deque>
#include <random>
#include <set>

#include "imcv/errors.hpp"

namespace imcv::oracles {

namespace {

std::vector<double> greedy_allocation(std::span<const IntervalEntry> row,
                                      const std::vector<std::uint32_t>& order) {
  std::vector<double> p(row.size());
  double slack = 1.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    p[i] = row[i].lo;
    slack -= row[i].lo;
  }
  for (auto i : order) {
    if (slack <= 0.0) break;
    double add = std::min(row[i].hi - row[i].lo, slack);
    p[i] += add;
    slack -= add;
  }
  return p;
}

void dedupe(std::vector<std::vector<double>>& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) {
                           for (std::size_t i = 0; i < a.size(); ++i)
                             if (std::abs(a[i] - b[i]) > 1e-12) return false;
                           return true;
                         }),
             rows.end());
}

}  // namespace

std::vector<std::vector<double>> row_vertices(std::span<const IntervalEntry> row) {
  if (row.size() > 8)
    throw ModelError("row_vertices: rows with more than 8 successors are not enumerable");
  std::vector<std::uint32_t> order(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::vector<std::vector<double>> out;
  do {
    out.push_back(greedy_allocation(row, order));
  } while (std::next_permutation(order.begin(), order.end()));
  dedupe(out);
  return out;
}

std::vector<std::vector<double>> row_support_representatives(
    std::span<const IntervalEntry> row) {
  const std::size_t k = row.size();
  if (k > 8)
    throw ModelError("row supports: rows with more than 8 successors are not enumerable");
  std::vector<std::vector<double>> out;
  for (std::uint32_t s = 1; s < (1u << k); ++s) {
    bool ok = true;
    double lo_sum = 0.0, hi_sum = 0.0;
    for (std::size_t i = 0; i < k && ok; ++i) {
      if (s >> i & 1u) {
        lo_sum += row[i].lo;
        hi_sum += row[i].hi;
      } else if (row[i].lo > 0.0) {
        ok = false;  // forced entries belong to every support
      }
    }
    if (!ok || hi_sum < 1.0 - 1e-12 || lo_sum > 1.0 + 1e-12) continue;
    double lambda = hi_sum > lo_sum ? (1.0 - lo_sum) / (hi_sum - lo_sum) : 0.0;
    std::vector<double> p(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      if (s >> i & 1u) p[i] = row[i].lo + lambda * (row[i].hi - row[i].lo);
    out.push_back(std::move(p));
  }
  dedupe(out);
  return out;
}

std::vector<InducedMc> enumerate_vertex_mcs(const ProductImc& product,
                                            std::size_t max_mcs,
                                            bool include_representatives) {
  const std::size_t n = product.n_states();
  std::vector<std::vector<std::vector<double>>> choices(n);
  std::size_t total = 1;
  for (std::size_t q = 0; q < n; ++q) {
    auto row = product.trans.row(q);
    choices[q] = row_vertices(row);
    if (include_representatives) {
      auto reps = row_support_representatives(row);
      choices[q].insert(choices[q].end(), reps.begin(), reps.end());
      dedupe(choices[q]);
    }
    if (choices[q].empty())
      throw ModelError("enumerate_vertex_mcs: row " + std::to_string(q) +
                       " has no feasible allocation");
    if (total > max_mcs / choices[q].size() + 1) total = max_mcs + 1;
    else total *= choices[q].size();
    if (total > max_mcs)
      throw ModelError("enumerate_vertex_mcs: combination count exceeds the guard");
  }

  std::vector<InducedMc> out;
  out.reserve(total);
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    InducedMc mc;
    mc.rows.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      auto row = product.trans.row(q);
      const auto& alloc = choices[q][pick[q]];
      for (std::size_t i = 0; i < row.size(); ++i)
        if (alloc[i] > 0.0) mc.rows[q].emplace_back(row[i].col, alloc[i]);
    }
    out.push_back(std::move(mc));
    std::size_t d = 0;
    while (d < n && ++pick[d] == choices[d].size()) pick[d++] = 0;
    if (d == n) break;
  }
  return out;
}

std::vector<double> mc_exact_reach(const InducedMc& mc, const StateSet& target) {
  const std::size_t n = mc.n_states();
  std::vector<char> is_target(n, 0);
  for (auto q : target) is_target[q] = 1;

  // Backward reachability over the support.
  std::vector<std::vector<std::uint32_t>> preds(n);
  for (std::size_t q = 0; q < n; ++q)
    for (const auto& [c, p] : mc.rows[q])
      if (p > 0.0) preds[c].push_back(static_cast<std::uint32_t>(q));
  std::vector<char> can(n, 0);
  std::deque<std::uint32_t> queue;
  for (auto q : target) {
    can[q] = 1;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    auto q = queue.front();
    queue.pop_front();
    for (auto p : preds[q])
      if (!can[p]) {
        can[p] = 1;
        queue.push_back(p);
      }
  }

  std::vector<std::int64_t> trans_index(n, -1);
  std::vector<std::uint32_t> transient;
  for (std::size_t q = 0; q < n; ++q)
    if (can[q] && !is_target[q]) {
      trans_index[q] = static_cast<std::int64_t>(transient.size());
      transient.push_back(static_cast<std::uint32_t>(q));
    }

  std::vector<double> result(n, 0.0);
  for (auto q : target) result[q] = 1.0;
  if (transient.empty()) return result;

  const std::size_t t = transient.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(t, t);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(t);
  for (std::size_t i = 0; i < t; ++i) {
    for (const auto& [c, p] : mc.rows[transient[i]]) {
      if (is_target[c])
        b(i) += p;
      else if (trans_index[c] >= 0)
        a(i, trans_index[c]) -= p;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  if (!((a * x - b).cwiseAbs().maxCoeff() < 1e-8))
    throw NumericalError("mc_exact_reach: singular or ill-conditioned system");
  for (std::size_t i = 0; i < t; ++i)
    result[transient[i]] = std::clamp(x(i), 0.0, 1.0);
  return result;
}

double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::vector<Vec> simulate(const SystemModel& model, const Vec& x0,
                          std::size_t horizon, std::uint64_t seed) {
  if (!model.domain.contains(x0))
    throw ModelError("simulate: initial state outside the domain");
  std::mt19937_64 rng(seed);
  std::vector<Vec> traj;
  traj.reserve(horizon + 1);
  traj.push_back(x0);
  Vec x = x0;
  for (std::size_t k = 0; k < horizon; ++k) {
    Vec next = model.nominal(x);
    for (std::size_t i = 0; i < model.dim; ++i) {
      double u = to_unit_interval(rng());
      next[i] += model.disturbance[i].inverse_cdf(u);
      next[i] = std::clamp(next[i], model.domain.lower[i], model.domain.upper[i]);
    }
    traj.push_back(next);
    x = next;
  }
  return traj;
}

double quadrature_mass(const DisturbanceSpec& dist, std::size_t dim, double a,
                       double b, double s) {
  const Disturbance1D& w = dist[dim];
  double lo = std::max(a, s + w.support_lo());
  double hi = std::min(b, s + w.support_hi());
  if (lo >= hi) return 0.0;
  auto f = [&](double x) { return w.pdf(x - s); };
  // Split at the mode so each piece is smooth.
  std::vector<double> pts{lo};
  double mode_x = s + w.mode();
  if (mode_x > lo && mode_x < hi) pts.push_back(mode_x);
  pts.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, pts[i], pts[i + 1], 15, 1e-12, &err);
    if (err > 1e-9)
      throw NumericalError("quadrature_mass: integration did not converge");
  }
  return total;
}

}  // namespace imcv::oracles
