#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mobius/geometry.hpp"
#include "mobius/rng.hpp"

using namespace mobius;

TEST_CASE("deck transformation") {
  const CoverPoint p{0.2, 0.1};
  const CoverPoint tp = tau(p);
  CHECK(tp.x == doctest::Approx(1.2));
  CHECK(tp.y == doctest::Approx(-0.1));
  const CoverPoint t2 = tau(tau({0.37, -0.21}));
  CHECK(t2.x == doctest::Approx(2.37));
  CHECK(t2.y == doctest::Approx(-0.21));
  const CoverPoint ti = tau_inverse({0.7, 0.3});
  CHECK(ti.x == doctest::Approx(-0.3));
  CHECK(ti.y == doctest::Approx(-0.3));
}

TEST_CASE("projection to the canonical domain") {
  const BandPoint a = project({0.7, 0.3});
  CHECK(a.x() == doctest::Approx(-0.3));
  CHECK(a.y() == doctest::Approx(-0.3));
  const BandPoint b = project({0.2, 0.1});
  CHECK(b.x() == doctest::Approx(0.2));
  CHECK(b.y() == doctest::Approx(0.1));
  const BandPoint c = project({2.2, 0.1});
  CHECK(c.x() == doctest::Approx(0.2));
  CHECK(c.y() == doctest::Approx(0.1));
  CHECK_THROWS_AS(project({0.0, 0.7}), DomainError);
}

TEST_CASE("projection is deck invariant") {
  Rng rng(11);
  for (int i = 0; i < 100000; ++i) {
    const CoverPoint p{rng.uniform(-5.0, 5.0), rng.uniform(-0.5, 0.5)};
    const BandPoint a = project(p);
    const BandPoint b = project(tau(p));
    CHECK(a.x() == doctest::Approx(b.x()).epsilon(1e-12));
    CHECK(a.y() == doctest::Approx(b.y()).epsilon(1e-12));
  }
}

TEST_CASE("distance examples") {
  CHECK(distance(band_point(-0.45, 0.0), band_point(0.45, 0.0)) ==
        doctest::Approx(0.1));
  CHECK(distance(band_point(0.2, 0.1), band_point(0.2, 0.1)) ==
        doctest::Approx(0.0));
  CHECK(distance(band_point(-0.45, 0.2), band_point(0.45, 0.2)) ==
        doctest::Approx(std::sqrt(0.17)));
}

TEST_CASE("distance window sufficiency and metric properties") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const BandPoint p =
        band_point(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const BandPoint q =
        band_point(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const double d1 = distance_windowed(p, q, 1);
    const double d3 = distance_windowed(p, q, 3);
    CHECK(d1 == doctest::Approx(d3).epsilon(1e-14));
  }
  for (int i = 0; i < 2000; ++i) {
    const BandPoint p =
        band_point(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const BandPoint q =
        band_point(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const BandPoint r =
        band_point(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    CHECK(distance(p, q) == doctest::Approx(distance(q, p)).epsilon(1e-12));
    CHECK(distance(p, r) <= distance(p, q) + distance(q, r) + 1e-12);
  }
}

TEST_CASE("interior geodesics") {
  const BandPoint a = band_point(-0.25, 0.0);
  const BandPoint b = band_point(0.25, 0.0);
  const GeodesicLeg leg = geodesic_interior(a, b);
  CHECK(leg.length() == doctest::Approx(0.5));
  const GeodesicLeg deg = geodesic_interior(a, a);
  CHECK(deg.length() == doctest::Approx(0.0));
  const GeodesicLeg diag =
      geodesic_interior(band_point(-0.4, -0.4), band_point(0.4, 0.4));
  const CoverPoint mid = diag.at(0.5);
  CHECK(mid.x == doctest::Approx(0.0));
  CHECK(mid.y == doctest::Approx(0.0));
  // interior legs never meet the cut
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const GeodesicLeg l = geodesic_interior(
        band_point(rng.uniform(-0.49, 0.49), rng.uniform(-0.5, 0.5)),
        band_point(rng.uniform(-0.49, 0.49), rng.uniform(-0.5, 0.5)));
    for (int k = 0; k <= 20; ++k) {
      const CoverPoint p = l.at(k / 20.0);
      CHECK(std::abs(p.x) < 0.5);
    }
  }
  CHECK_THROWS_AS(geodesic_interior(project({-0.5, 0.0}), b), DomainError);
}

TEST_CASE("branch legs") {
  const BandPoint z = band_point(0.0, 0.0);
  const GeodesicLeg plus = geodesic_to_branch(z, 0.0, CutSide::Plus);
  CHECK(plus.cover_b.x == doctest::Approx(0.5));
  CHECK(plus.cover_b.y == doctest::Approx(0.0));
  const GeodesicLeg minus = geodesic_to_branch(z, 0.0, CutSide::Minus);
  CHECK(minus.cover_b.x == doctest::Approx(-0.5));
  CHECK(same_point(plus.end, minus.end));
  const GeodesicLeg up =
      geodesic_to_branch(band_point(0.25, 0.1), 0.3, CutSide::Plus);
  CHECK(up.cover_b.x == doctest::Approx(0.5));
  CHECK(up.cover_b.y == doctest::Approx(0.3));
  // projected endpoints coincide for both signs at any height
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double qy = rng.uniform(-0.5, 0.5);
    const GeodesicLeg lp = geodesic_to_branch(z, qy, CutSide::Plus);
    const GeodesicLeg lm = geodesic_to_branch(z, qy, CutSide::Minus);
    CHECK(same_point(lp.end, lm.end));
  }
}

TEST_CASE("simultaneous distance of legs") {
  const BandPoint z1 = band_point(-0.25, 0.0);
  const BandPoint z2 = band_point(0.25, 0.0);
  const GeodesicLeg l1 = geodesic_interior(z1, band_point(-0.25, 0.2));
  CHECK(min_simultaneous_distance(l1, l1) == doctest::Approx(0.0));

  const GeodesicLeg h1 =
      geodesic_interior(band_point(-0.3, -0.2), band_point(0.3, -0.2));
  const GeodesicLeg h2 =
      geodesic_interior(band_point(-0.3, 0.2), band_point(0.3, 0.2));
  CHECK(min_simultaneous_distance(h1, h2) == doctest::Approx(0.4));

  const GeodesicLeg a =
      geodesic_interior(band_point(-0.25, 0.0), band_point(0.25, 0.2));
  const GeodesicLeg b =
      geodesic_interior(band_point(0.25, 0.0), band_point(-0.25, 0.2));
  const double exact = min_simultaneous_distance(a, b);
  const double grid = min_simultaneous_distance_grid(a, b, 10000);
  CHECK(exact == doctest::Approx(grid).epsilon(1e-6));
  (void)z2;
}

TEST_CASE("region decomposition") {
  SUBCASE("symmetric") {
    const RegionDecomposition d = region_decomposition(0.5, 0.5, 1.0 / 16);
    CHECK(d.a1_star == doctest::Approx(0.5));
    CHECK(d.dividing_line_x == doctest::Approx(0.0));
    CHECK(d.area_v1() == doctest::Approx(21.0 / 64.0));
    CHECK(d.junctions.size() == 4);
    CHECK(d.strips.size() == 6);
    for (const auto& j : d.junctions) {
      CHECK(j.adjacent_strips.size() == 3);
    }
    CHECK(d.area_v1() + d.area_v2() + d.area_n() == doctest::Approx(1.0));
    // exact area accounting of the frame pieces
    double n_area = 0.0;
    for (const auto& j : d.junctions) {
      for (const auto& r : j.pieces) n_area += r.area();
    }
    for (const auto& s : d.strips) {
      for (const auto& r : s.pieces) n_area += r.area();
    }
    CHECK(n_area == doctest::Approx(d.area_n()));
  }
  SUBCASE("asymmetric") {
    const RegionDecomposition d = region_decomposition(0.3, 0.5, 0.05);
    CHECK(d.a1_star == doctest::Approx(0.375));
    CHECK(d.dividing_line_x == doctest::Approx(-0.125));
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(region_decomposition(0.6, 0.6, 0.01), ConfigError);
    CHECK_THROWS_AS(region_decomposition(0.5, 0.5, 0.2), ConfigError);
  }
  SUBCASE("serialization") {
    const RegionDecomposition d = region_decomposition(0.5, 0.5, 1.0 / 16);
    const std::string text = describe(d);
    CHECK(text.find("junction_cut_a") != std::string::npos);
    CHECK(text.find("strip_dividing") != std::string::npos);
  }
}
