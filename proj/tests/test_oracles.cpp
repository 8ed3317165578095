#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "imcv/abstraction.hpp"
#include "imcv/errors.hpp"
#include "imcv/oracles.hpp"

using namespace imcv;
using testutil::make_direct_product;

TEST_CASE("row_vertices examples") {
  std::vector<IntervalEntry> point{{0, 0.5, 0.5}, {1, 0.5, 0.5}};
  CHECK(oracles::row_vertices(point).size() == 1);

  std::vector<IntervalEntry> swing{{0, 0.0, 1.0}, {1, 0.0, 1.0}};
  auto v = oracles::row_vertices(swing);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == std::vector<double>{0.0, 1.0});
  CHECK(v[1] == std::vector<double>{1.0, 0.0});

  std::vector<IntervalEntry> mixed{{0, 0.2, 0.6}, {1, 0.3, 0.8}};
  auto m = oracles::row_vertices(mixed);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == std::vector<double>{0.2, 0.8});
  CHECK(m[1] == std::vector<double>{0.6, 0.4});
}

TEST_CASE("support representatives cover achievable supports only") {
  std::vector<IntervalEntry> row{{0, 0.0, 1.0}, {1, 0.0, 0.4}};
  auto reps = oracles::row_support_representatives(row);
  // {0} alone works (hi 1), {1} alone cannot reach mass 1, {0,1} works.
  REQUIRE(reps.size() == 2);
  for (const auto& r : reps) {
    double s = 0;
    for (double x : r) s += x;
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("enumerate_vertex_mcs: point product yields exactly one MC") {
  auto p = make_direct_product(2, {{0, 1, 1.0, 1.0}, {1, 0, 1.0, 1.0}}, {0, 0},
                               {0, 0}, 1);
  auto mcs = oracles::enumerate_vertex_mcs(p);
  CHECK(mcs.size() == 1);
}

TEST_CASE("enumerate_vertex_mcs honors the combination guard") {
  auto p = make_direct_product(2,
                               {{0, 0, 0.0, 1.0},
                                {0, 1, 0.0, 1.0},
                                {1, 0, 0.0, 1.0},
                                {1, 1, 0.0, 1.0}},
                               {0, 0}, {0, 0}, 1);
  CHECK_THROWS_AS(oracles::enumerate_vertex_mcs(p, 2), ModelError);
  CHECK(oracles::enumerate_vertex_mcs(p, 16).size() == 4);
}

TEST_CASE("mc_exact_reach examples") {
  InducedMc chain;
  chain.rows = {{{1, 1.0}}, {{2, 1.0}}, {{2, 1.0}}};
  auto r1 = oracles::mc_exact_reach(chain, {2});
  CHECK(r1[0] == doctest::Approx(1.0));
  CHECK(r1[1] == doctest::Approx(1.0));

  InducedMc branch;  // 0 -> {1 target, 2 sink} fifty-fifty
  branch.rows = {{{1, 0.5}, {2, 0.5}}, {{1, 1.0}}, {{2, 1.0}}};
  auto r2 = oracles::mc_exact_reach(branch, {1});
  CHECK(r2[0] == doctest::Approx(0.5));
  CHECK(r2[2] == 0.0);

  InducedMc loop;  // geometric escape: self 0.5, target 0.5
  loop.rows = {{{0, 0.5}, {1, 0.5}}, {{1, 1.0}}};
  auto r3 = oracles::mc_exact_reach(loop, {1});
  CHECK(r3[0] == doctest::Approx(1.0));
}

TEST_CASE("simulate: deterministic disturbance gives a deterministic trajectory") {
  Rect domain = make_rect({-2, -2}, {2, 2});
  DisturbanceSpec w{Disturbance1D::triangular(0.1, 0.0),
                    Disturbance1D::triangular(-0.1, 0.0)};
  SystemModel m = make_linear_model({{0.5, 0.0}, {0.0, 0.5}}, domain, w, true);
  auto t1 = oracles::simulate(m, {1.0, 1.0}, 20, 1);
  auto t2 = oracles::simulate(m, {1.0, 1.0}, 20, 99);
  REQUIRE(t1.size() == 21);
  CHECK(t1 == t2);
  CHECK(t1[1][0] == doctest::Approx(0.6));
  CHECK(t1[1][1] == doctest::Approx(0.4));
}

TEST_CASE("simulate: the bistable switch sticks to the lower-left boundary") {
  Rect domain = make_rect({0, 0}, {4, 4});
  DisturbanceSpec w{Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2),
                    Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2)};
  SystemModel m = make_bistable_switch(1.3, 0.25, 0.05, domain, w, true);
  auto traj = oracles::simulate(m, {0.0, 0.0}, 50, 7);
  // (0,0) is an equilibrium and the disturbance only pushes outward, so the
  // clipped trajectory never leaves the corner.
  for (const auto& x : traj) {
    CHECK(x[0] == 0.0);
    CHECK(x[1] == 0.0);
  }
  // From the interior the drift is toward the corner region.
  auto t2 = oracles::simulate(m, {2.0, 2.0}, 80, 11);
  CHECK(t2.back()[0] <= 0.5);
  CHECK(t2.back()[1] <= 0.5);
}

TEST_CASE("simulate respects the seed and rejects outside starts") {
  Rect domain = make_rect({0, 0}, {4, 4});
  DisturbanceSpec w{Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2),
                    Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2)};
  SystemModel m = make_bistable_switch(1.3, 0.25, 0.05, domain, w, true);
  CHECK(oracles::simulate(m, {1, 1}, 10, 5) == oracles::simulate(m, {1, 1}, 10, 5));
  CHECK(oracles::simulate(m, {1, 1}, 10, 5) != oracles::simulate(m, {1, 1}, 10, 6));
  CHECK_THROWS_AS(oracles::simulate(m, {5, 5}, 10, 5), ModelError);
}

TEST_CASE("one-step simulation frequencies respect abstraction bounds") {
  Rect domain = make_rect({0, 0}, {4, 4});
  DisturbanceSpec w{Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2),
                    Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2)};
  SystemModel m = make_bistable_switch(1.3, 0.25, 0.05, domain, w, true);

  // Fixed start, one-step empirical distribution over the 4x4 partition.
  Partition p;
  {
    std::vector<LabeledRegion> regions{{domain, {}}};
    p = align_partition_to_labels(domain, regions, {4, 4});
  }
  Vec x{1.1, 0.9};
  std::size_t j_cell = 0;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p.cells[j].contains(x)) j_cell = j;

  std::vector<int> hits(p.size(), 0);
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    auto traj = oracles::simulate(m, x, 1, 1000 + s);
    for (std::size_t l = 0; l < p.size(); ++l)
      if (p.cells[l].contains(traj[1], 1e-12)) {
        ++hits[l];
        break;
      }
  }
  Imc imc;
  {
    SystemModel copy = m;
    imc = build_imc(copy, p);
  }
  for (std::size_t l = 0; l < p.size(); ++l) {
    double freq = static_cast<double>(hits[l]) / n;
    auto [lo, hi] = imc.trans.at(j_cell, l);
    double sd = std::sqrt(std::max(freq * (1 - freq), 1e-4) / n);
    CHECK(freq >= lo - 4 * sd - 1e-12);
    CHECK(freq <= hi + 4 * sd + 1e-12);
  }
}

TEST_CASE("quadrature_mass examples and cross-checks") {
  DisturbanceSpec w{Disturbance1D::truncated_gaussian(-0.3, 0.1, -0.4, -0.2)};
  CHECK(oracles::quadrature_mass(w, 0, -0.4, -0.2, 0.0) == doctest::Approx(1.0));
  CHECK(oracles::quadrature_mass(w, 0, -0.4, -0.3, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-9));

  DisturbanceSpec tri{Disturbance1D::triangular(0.3, 0.5)};
  CHECK(oracles::quadrature_mass(tri, 0, -0.2, 0.8, 0.0) == doctest::Approx(1.0));
  CHECK(oracles::quadrature_mass(tri, 0, -0.2, 0.3, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-9));

  testutil::Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const Disturbance1D& d = (t % 2 ? tri[0] : w[0]);
    DisturbanceSpec spec{d};
    double a = rng.uniform(-1.5, 1.5);
    double b = a + rng.uniform(0, 1.0);
    double s = rng.uniform(-1, 1);
    double by_quad = oracles::quadrature_mass(spec, 0, a, b, s);
    double by_cdf = d.cdf(b - s) - d.cdf(a - s);
    CHECK(by_quad == doctest::Approx(by_cdf).epsilon(1e-9));
  }
}

TEST_CASE("reach probabilities to the two BSCC kinds always sum to 1") {
  for (std::uint64_t seed = 800; seed < 820; ++seed) {
    auto inst = testutil::random_lattice_instance(seed);
    std::vector<InducedMc> mcs;
    try {
      mcs = oracles::enumerate_vertex_mcs(inst.product, 1 << 14, true);
    } catch (const ModelError&) {
      continue;
    }
    for (const auto& mc : mcs) {
      auto a = testutil::analyze_mc(inst.product, mc);
      StateSet ua, un;
      for (std::uint32_t q = 0; q < inst.product.n_states(); ++q) {
        if (a.in_ua[q]) ua.push_back(q);
        if (a.in_un[q]) un.push_back(q);
      }
      std::vector<double> ra(inst.product.n_states(), 0.0), rn(ra);
      if (!ua.empty()) ra = oracles::mc_exact_reach(mc, ua);
      if (!un.empty()) rn = oracles::mc_exact_reach(mc, un);
      for (std::size_t q = 0; q < inst.product.n_states(); ++q)
        CHECK(ra[q] + rn[q] == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}
