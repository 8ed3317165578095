#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "imcv/abstraction.hpp"
#include "imcv/errors.hpp"
#include "imcv/oracles.hpp"

using namespace imcv;
using testutil::Rng;

namespace {

DisturbanceSpec paper_disturbance() {
  return {Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2),
          Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2)};
}

SystemModel paper_switch(bool clip = true) {
  return make_bistable_switch(1.3, 0.25, 0.05, make_rect({0, 0}, {4, 4}),
                              paper_disturbance(), clip);
}

Disturbance1D random_dist(Rng& rng, bool gaussian) {
  if (gaussian) {
    double mean = rng.uniform(-1, 1);
    double var = rng.uniform(0.01, 0.5);
    double half = rng.uniform(0.05, 1.0);
    return Disturbance1D::truncated_gaussian(mean, var, mean - half, mean + half);
  }
  return Disturbance1D::triangular(rng.uniform(-1, 1), rng.uniform(0.05, 1.0));
}

}  // namespace

TEST_CASE("cdf sanity: monotone, 0 at lower support, 1 at upper, 0.5 at mode") {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    for (bool gaussian : {true, false}) {
      Disturbance1D d = random_dist(rng, gaussian);
      CHECK(d.cdf(d.support_lo()) == 0.0);
      CHECK(d.cdf(d.support_hi()) == 1.0);
      CHECK(d.cdf(d.mode()) == doctest::Approx(0.5).epsilon(1e-12));
      double prev = -1.0;
      for (int i = 0; i <= 50; ++i) {
        double x = d.support_lo() + (d.support_hi() - d.support_lo()) * i / 50.0;
        double c = d.cdf(x);
        CHECK(c >= prev);
        prev = c;
      }
    }
  }
}

TEST_CASE("truncated gaussian requires a symmetric support") {
  CHECK_THROWS_AS(Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.1), ModelError);
}

TEST_CASE("shifted_mass examples") {
  DisturbanceSpec w = paper_disturbance();

  // An interval covering the whole (shifted) support holds all the mass.
  CHECK(shifted_mass(w, 0, -0.4 + 0.7, -0.2 + 0.7, 0.7, false, false) ==
        doctest::Approx(1.0));

  // Half the support below the mode carries half the mass.
  CHECK(shifted_mass(w, 0, -0.4, -0.3, 0.0, false, false) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Cross-check against adaptive quadrature.
  double m = shifted_mass(w, 0, -0.4, -0.35, 0.0, false, false);
  double q = oracles::quadrature_mass(w, 0, -0.4, -0.35, 0.0);
  CHECK(m == doctest::Approx(q).epsilon(1e-9));

  // Clipped faces absorb the out-of-domain side.
  CHECK(shifted_mass(w, 0, -0.35, -0.3, 0.0, true, false) ==
        doctest::Approx(w[0].cdf(-0.3)));
  CHECK(shifted_mass(w, 0, -0.35, -0.3, 0.0, false, true) ==
        doctest::Approx(1.0 - w[0].cdf(-0.35)));
  CHECK(shifted_mass(w, 0, -0.35, -0.3, 0.0, true, true) == doctest::Approx(1.0));
}

TEST_CASE("optimal_shifts: clamp for the maximizer, farthest endpoint for the minimizer") {
  auto [mx1, mn1] = optimal_shifts(1.0, 0.0, 3.0);
  CHECK(mx1 == 1.0);
  CHECK(mn1 == 3.0);

  auto [mx2, mn2] = optimal_shifts(1.0, 2.0, 3.0);
  CHECK(mx2 == 2.0);
  CHECK(mn2 == 3.0);

  // Tie: the midpoint picks the lower endpoint for the minimizer.
  auto [mx3, mn3] = optimal_shifts(1.5, 1.0, 2.0);
  CHECK(mx3 == 1.5);
  CHECK(mn3 == 1.0);
}

TEST_CASE("optimal_shifts matches a dense grid search of the shifted integral") {
  Rng rng(23);
  for (int t = 0; t < 25; ++t) {
    bool gaussian = t % 2 == 0;
    DisturbanceSpec w{random_dist(rng, gaussian)};
    double a = rng.uniform(-2, 2);
    double b = a + rng.uniform(0.01, 1.5);
    double r_lo = rng.uniform(-2, 2);
    double r_hi = r_lo + rng.uniform(0.0, 2.0);
    double s_center = (a + b) / 2.0 - w[0].mode();
    auto [s_max, s_min] = optimal_shifts(s_center, r_lo, r_hi);

    double best = -1.0, worst = 2.0;
    const double step = 1e-3;
    for (double s = r_lo; s <= r_hi + step / 2; s += step) {
      double v = oracles::quadrature_mass(w, 0, a, b, std::min(s, r_hi));
      best = std::max(best, v);
      worst = std::min(worst, v);
    }
    double got_max = oracles::quadrature_mass(w, 0, a, b, s_max);
    double got_min = oracles::quadrature_mass(w, 0, a, b, s_min);
    CHECK(got_max >= best - 1e-6);
    CHECK(got_min <= worst + 1e-6);
  }
}

TEST_CASE("extremal shifts dominate random shifts") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    DisturbanceSpec w{random_dist(rng, t % 2 == 0)};
    double a = rng.uniform(-2, 2), b = a + rng.uniform(0.01, 1.5);
    double r_lo = rng.uniform(-2, 2), r_hi = r_lo + rng.uniform(0.0, 2.0);
    auto [s_max, s_min] =
        optimal_shifts((a + b) / 2.0 - w[0].mode(), r_lo, r_hi);
    double vmax = oracles::quadrature_mass(w, 0, a, b, s_max);
    double vmin = oracles::quadrature_mass(w, 0, a, b, s_min);
    for (int i = 0; i < 100; ++i) {
      double s = rng.uniform(r_lo, r_hi);
      double v = oracles::quadrature_mass(w, 0, a, b, s);
      CHECK(vmax >= v - 1e-8);
      CHECK(vmin <= v + 1e-8);
    }
  }
}

TEST_CASE("reach_overapprox: equilibrium, monotone interval arithmetic, sampling") {
  SystemModel model = paper_switch();

  // (0,0) is an equilibrium of the deterministic part.
  Rect origin = make_rect({0, 0}, {0, 0});
  Rect r0 = reach_overapprox(model, origin);
  CHECK(r0.lower[0] == doctest::Approx(0.0));
  CHECK(r0.lower[1] == doctest::Approx(0.0));
  CHECK(r0.upper[0] == doctest::Approx(0.0));
  CHECK(r0.upper[1] == doctest::Approx(0.0));

  // Monotone decomposition maps a box to [F(lower), F(upper)].
  Rect box = make_rect({0.5, 1.0}, {1.5, 2.0});
  Rect r = reach_overapprox(model, box);
  Vec flo = model.nominal(box.lower), fhi = model.nominal(box.upper);
  for (int i = 0; i < 2; ++i) {
    CHECK(r.lower[i] == flo[i]);
    CHECK(r.upper[i] == fhi[i]);
  }

  // Dense sampling stays inside the over-approximation.
  Rng rng(41);
  Rect unit = make_rect({0, 0}, {1, 1});
  Rect ru = reach_overapprox(model, unit);
  for (int i = 0; i < 10000; ++i) {
    Vec x{rng.uniform(0, 1), rng.uniform(0, 1)};
    Vec y = model.nominal(x);
    CHECK(ru.contains(y, 1e-12));
  }
}

TEST_CASE("mixed-monotone decomposition properties of the built-in families") {
  SystemModel sw = paper_switch();
  SystemModel lin = make_linear_model({{0.5, -0.2}, {0.1, 0.4}},
                                      make_rect({-1, -1}, {1, 1}),
                                      {Disturbance1D::triangular(0, 0.1),
                                       Disturbance1D::triangular(0, 0.1)},
                                      false);
  Rng rng(43);
  for (const SystemModel& m : {sw, lin}) {
    const Rect& d = m.domain;
    for (int t = 0; t < 1000; ++t) {
      Vec x(2), y(2), x2(2);
      for (int i = 0; i < 2; ++i) {
        x[i] = rng.uniform(d.lower[i], d.upper[i]);
        y[i] = rng.uniform(d.lower[i], d.upper[i]);
        x2[i] = std::min(d.upper[i], x[i] + rng.uniform(0, 0.5));
      }
      // g(x,x) = F(x)
      Vec g1 = m.decomposition(x, x), f = m.nominal(x);
      for (int i = 0; i < 2; ++i) CHECK(g1[i] == f[i]);
      // increasing in the first argument
      Vec a = m.decomposition(x, y), b = m.decomposition(x2, y);
      for (int i = 0; i < 2; ++i) CHECK(a[i] <= b[i] + 1e-12);
      // decreasing in the second argument
      Vec c = m.decomposition(y, x), e = m.decomposition(y, x2);
      for (int i = 0; i < 2; ++i) CHECK(e[i] <= c[i] + 1e-12);
    }
  }
}

TEST_CASE("reach_overapprox rejects an inconsistent decomposition") {
  SystemModel broken;
  broken.dim = 1;
  broken.domain = make_rect({0.0}, {1.0});
  broken.disturbance = {Disturbance1D::triangular(0.0, 0.1)};
  // Decreasing in the first argument: g(a,b) > g(b,a) on any proper box.
  broken.decomposition = [](const Vec& x, const Vec&) { return Vec{-x[0]}; };
  CHECK_THROWS_AS(reach_overapprox(broken, make_rect({0.2}, {0.8})), ModelError);
}

TEST_CASE("near-flat triangular densities stay numerically consistent") {
  // A half-width much larger than the integration window approximates a
  // uniform density; shifts and masses must still agree with quadrature.
  DisturbanceSpec w{Disturbance1D::triangular(0.0, 100.0)};
  double a = -0.25, b = 0.5;
  auto [s_max, s_min] = optimal_shifts((a + b) / 2.0, -1.0, 1.0);
  double m_max = shifted_mass(w, 0, a, b, s_max, false, false);
  double m_min = shifted_mass(w, 0, a, b, s_min, false, false);
  CHECK(m_max == doctest::Approx(oracles::quadrature_mass(w, 0, a, b, s_max))
                     .epsilon(1e-9));
  CHECK(m_min == doctest::Approx(oracles::quadrature_mass(w, 0, a, b, s_min))
                     .epsilon(1e-9));
  CHECK(m_max >= m_min);
  CHECK(m_max == doctest::Approx(0.75 / 100.0).epsilon(1e-3));
}

TEST_CASE("transition_bounds: unreachable and single-cell cases") {
  SystemModel model = paper_switch();

  // Far-away target with disjoint reach+support in one dimension.
  Rect near = make_rect({0, 0}, {0.5, 0.5});
  Rect far = make_rect({3.5, 3.5}, {4, 4});
  auto [lo, hi] = transition_bounds(model, near, far);
  CHECK(lo == 0.0);
  CHECK(hi == 0.0);

  // Whole-domain cell with clipping keeps all mass.
  auto [l1, h1] = transition_bounds(model, model.domain, model.domain);
  CHECK(l1 == doctest::Approx(1.0));
  CHECK(h1 == doctest::Approx(1.0));
}

TEST_CASE("build_imc: single-cell partition gives a [1,1] self-loop") {
  SystemModel model = paper_switch();
  Partition p = align_partition_to_labels(model.domain, {{model.domain, {}}}, {1, 1});
  Imc imc = build_imc(model, p);
  CHECK(imc.n_states() == 1);
  auto [lo, hi] = imc.trans.at(0, 0);
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(1.0));
}

TEST_CASE("build_imc: 8x8 rows satisfy interval feasibility") {
  SystemModel model = paper_switch();
  Partition p = align_partition_to_labels(model.domain, {{model.domain, {}}}, {8, 8});
  Imc imc = build_imc(model, p);
  CHECK(imc.n_states() == 64);
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(imc.trans.row_lo_sum(j) <= 1.0 + 1e-9);
    CHECK(imc.trans.row_hi_sum(j) >= 1.0 - 1e-9);
    for (const auto& e : imc.trans.row(j)) {
      CHECK(e.lo >= 0.0);
      CHECK(e.hi <= 1.0 + 1e-12);
      CHECK(e.lo <= e.hi);
    }
  }
}

TEST_CASE("transition bounds bracket Monte Carlo frequencies") {
  SystemModel model = paper_switch();
  Partition p = align_partition_to_labels(model.domain, {{model.domain, {}}}, {8, 8});
  Imc imc = build_imc(model, p);

  Rng rng(59);
  const int n_samples = 2000;
  for (int t = 0; t < 12; ++t) {
    std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, 63));
    std::size_t l = static_cast<std::size_t>(rng.uniform_int(0, 63));
    auto [lo, hi] = imc.trans.at(j, l);
    for (int xi = 0; xi < 4; ++xi) {
      Vec x(2);
      for (int i = 0; i < 2; ++i)
        x[i] = rng.uniform(p.cells[j].lower[i], p.cells[j].upper[i]);
      int hit = 0;
      for (int s = 0; s < n_samples; ++s) {
        Vec y = model.nominal(x);
        for (int i = 0; i < 2; ++i) {
          y[i] += model.disturbance[i].inverse_cdf(rng.uniform());
          y[i] = std::clamp(y[i], model.domain.lower[i], model.domain.upper[i]);
        }
        if (p.cells[l].contains(y)) ++hit;
      }
      double freq = static_cast<double>(hit) / n_samples;
      double sd = std::sqrt(std::max(freq * (1 - freq), 1e-4) / n_samples);
      CHECK(freq >= lo - 4 * sd - 1e-12);
      CHECK(freq <= hi + 4 * sd + 1e-12);
    }
  }
}

TEST_CASE("update_imc: identity update returns an identical IMC") {
  SystemModel model = paper_switch();
  Partition p = align_partition_to_labels(model.domain, {{model.domain, {}}}, {4, 4});
  Imc imc = build_imc(model, p);
  Imc same = update_imc(imc, model, p, {});
  CHECK(same == imc);
}

TEST_CASE("update_imc equals a full rebuild bit-for-bit after a split") {
  SystemModel model = paper_switch();
  Partition p = align_partition_to_labels(model.domain, {{model.domain, {}}}, {4, 4});
  Imc imc = build_imc(model, p);

  // Split cell 5 the way the refinement loop does: first child replaces the
  // parent slot, second child is appended.
  auto [c1, c2] = split_rect(p.cells[5]);
  Partition q = p;
  q.cells[5] = c1;
  q.cells.push_back(c2);
  q.cell_props.push_back(p.cell_props[5]);
  std::vector<std::uint32_t> changed{5, static_cast<std::uint32_t>(q.size() - 1)};

  Imc incremental = update_imc(imc, model, q, changed);
  Imc rebuilt = build_imc(model, q);
  CHECK(incremental == rebuilt);

  // Untouched pairs kept identical entries (spot check).
  auto [lo_old, hi_old] = imc.trans.at(1, 2);
  auto [lo_new, hi_new] = incremental.trans.at(1, 2);
  CHECK(lo_old == lo_new);
  CHECK(hi_old == hi_new);
}

TEST_CASE("update_imc recomputes exactly the changed columns of unchanged rows") {
  SystemModel model = paper_switch();
  Partition p;
  p.domain = model.domain;
  p.cells = {make_rect({0, 0}, {4, 2}), make_rect({0, 2}, {4, 4})};
  p.cell_props = {{}, {}};
  Imc imc = build_imc(model, p);

  auto [c1, c2] = split_rect(p.cells[1]);
  Partition q = p;
  q.cells[1] = c1;
  q.cells.push_back(c2);
  q.cell_props.push_back(p.cell_props[1]);
  Imc updated = update_imc(imc, model, q, {1, 2});
  CHECK(updated == build_imc(model, q));
  // Rows of the two children cover three columns each at most.
  CHECK(updated.trans.row(1).size() <= 3);
  CHECK(updated.trans.row(2).size() <= 3);
}

TEST_CASE("infeasible rows are a hard error") {
  // x' = 3x pushes the upper half of [0,1] entirely out of the domain; with
  // clipping disabled no target can absorb that mass, so the row's upper
  // bounds cannot reach 1.
  Rect domain = make_rect({0.0}, {1.0});
  DisturbanceSpec w{Disturbance1D::triangular(0.0, 0.1)};
  SystemModel leaky = make_linear_model({{3.0}}, domain, w, false);
  Partition p;
  p.domain = domain;
  p.cells = {make_rect({0.0}, {0.5}), make_rect({0.5}, {1.0})};
  p.cell_props = {{}, {}};
  CHECK_THROWS_AS(build_imc(leaky, p), ModelError);

  // The same model with boundary clipping is feasible: the boundary cell
  // retains the escaping mass.
  SystemModel clipped = make_linear_model({{3.0}}, domain, w, true);
  CHECK_NOTHROW(build_imc(clipped, p));
}
