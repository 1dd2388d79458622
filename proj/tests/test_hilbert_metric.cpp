#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hilbertlab/hilbert_metric.hpp"
#include "oracles.hpp"

using namespace hilbertlab;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

ProjectivePoint pt(double x, double y) { return ProjectivePoint::from_affine(vec2(x, y)); }

ConvexBody unit_square() {
  return ConvexBody::from_vertices(
      2, {vec2(-1, -1), vec2(1, -1), vec2(1, 1), vec2(-1, 1)});
}

ConvexBody triangle_body() {
  return ConvexBody::from_vertices(2, {vec2(0, 0), vec2(1, 0), vec2(0, 1)});
}

Vec sample_interior(std::mt19937_64& rng, const ConvexBody& body) {
  return oracles::random_interior_point(rng, body);
}

}  // namespace

TEST_CASE("Hilbert distance closed forms") {
  const ConvexBody disk = ConvexBody::unit_ball(2);
  const HilbertDistanceValue d = distance(disk, pt(0, 0), pt(0.5, 0));
  REQUIRE(d.value == Catch::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
  REQUIRE(d.value == Catch::Approx(std::atanh(0.5)).epsilon(1e-12));
  REQUIRE(d.a.approx_equal(pt(1, 0), 1e-9));
  REQUIRE(d.b.approx_equal(pt(-1, 0), 1e-9));

  REQUIRE(distance(disk, pt(0.3, -0.2), pt(0.3, -0.2)).value == 0.0);

  const ConvexBody square = unit_square();
  REQUIRE(distance(square, pt(0, 0), pt(0.5, 0)).value ==
          Catch::Approx(0.5 * std::log(3.0)).epsilon(1e-12));

  REQUIRE_THROWS_AS(distance(disk, pt(0, 0), pt(2, 0)), PointOutsideBody);
}

TEST_CASE("disk distance matches the Klein model on random pairs") {
  const ConvexBody disk = ConvexBody::unit_ball(2);
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unif(-0.95, 0.95);
  int checked = 0;
  while (checked < 1000) {
    const Vec u = vec2(unif(rng), unif(rng));
    const Vec v = vec2(unif(rng), unif(rng));
    if (u.norm() > 0.95 || v.norm() > 0.95) continue;
    ++checked;
    const double lib = distance(disk, ProjectivePoint::from_affine(u),
                                ProjectivePoint::from_affine(v)).value;
    REQUIRE(std::abs(lib - oracles::klein_distance(u, v)) <= 1e-10);
  }
}

TEST_CASE("distance equals half the log of the generic cross-ratio") {
  std::mt19937_64 rng(606);
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::unit_ball(2));
  bodies.push_back(unit_square());
  for (const ConvexBody& body : bodies) {
    for (int trial = 0; trial < 100; ++trial) {
      const ProjectivePoint x = body.chart().embed(sample_interior(rng, body));
      const ProjectivePoint y = body.chart().embed(sample_interior(rng, body));
      if (x.approx_equal(y, 1e-6)) continue;
      const HilbertDistanceValue d = distance(body, x, y);
      const double via_cross_ratio = 0.5 * std::log(cross_ratio(d.a, d.b, x, y));
      REQUIRE(std::abs(d.value - via_cross_ratio) <= 1e-10 * std::max(1.0, d.value));
    }
  }
}

TEST_CASE("metric axioms on disk, square, triangle") {
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::unit_ball(2));
  bodies.push_back(unit_square());
  bodies.push_back(triangle_body());
  std::mt19937_64 rng(77);
  for (const ConvexBody& body : bodies) {
    for (int trial = 0; trial < 300; ++trial) {
      const ProjectivePoint x = body.chart().embed(sample_interior(rng, body));
      const ProjectivePoint y = body.chart().embed(sample_interior(rng, body));
      const ProjectivePoint z = body.chart().embed(sample_interior(rng, body));
      const double dxy = distance(body, x, y).value;
      const double dyx = distance(body, y, x).value;
      const double dxz = distance(body, x, z).value;
      const double dzy = distance(body, z, y).value;
      REQUIRE(std::abs(dxy - dyx) <= 1e-10);
      REQUIRE(dxz + dzy - dxy >= -1e-9);
      REQUIRE(distance(body, x, x).value == 0.0);
      if (!x.approx_equal(y, 1e-9)) REQUIRE(dxy > 0.0);
    }
  }
}

TEST_CASE("projective invariance of the distance") {
  std::mt19937_64 rng(20250810);
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::unit_ball(2));
  bodies.push_back(unit_square());
  for (const ConvexBody& body : bodies) {
    for (int trial = 0; trial < 100; ++trial) {
      const ProjectiveMap g =
          ProjectiveMap::from_matrix(oracles::random_map_matrix(rng, 3));
      const ProjectivePoint x = body.chart().embed(sample_interior(rng, body));
      const ProjectivePoint y = body.chart().embed(sample_interior(rng, body));
      const ConvexBody image = transform_body(body, g);
      const double base = distance(body, x, y).value;
      const double mapped = distance(image, g(x), g(y)).value;
      REQUIRE(std::abs(base - mapped) <= 1e-8);
    }
  }
}

TEST_CASE("displacement closed forms") {
  const ConvexBody disk = ConvexBody::unit_ball(2);
  const ProjectivePoint center = pt(0, 0);

  Mat rot = Mat::Identity(3, 3);
  rot(0, 0) = std::cos(1.0); rot(0, 1) = -std::sin(1.0);
  rot(1, 0) = std::sin(1.0); rot(1, 1) = std::cos(1.0);
  REQUIRE(displacement(disk, ProjectiveMap::from_matrix(rot), center) <= 1e-12);

  const BodyFamily family = make_family("ellipsoid", 2, FamilyParams{.boost = 0.3});
  REQUIRE(displacement(disk, family.automorphism_generators[0], center) ==
          Catch::Approx(0.3).epsilon(1e-10));

  Mat stretch = Mat::Zero(3, 3);
  stretch.diagonal() << 2.0, 1.0, 1.0;
  REQUIRE_THROWS_AS(displacement(disk, ProjectiveMap::from_matrix(stretch), center),
                    NotAnAutomorphism);
}

TEST_CASE("simplex displacement matches the positive-cone closed form") {
  FamilyParams params;
  params.diagonal = {std::exp(1.0), 1.0, std::exp(-1.0)};
  const BodyFamily family = make_family("simplex", 2, params);
  const ProjectiveMap g = family.automorphism_generators[0];

  const ProjectivePoint centroid(Vec::Ones(3));
  const double disp = displacement(family.body, g, centroid);
  // oracle: the Hilbert metric of the simplex is the log-oscillation metric
  Vec gx = g.matrix() * Vec::Ones(3);
  REQUIRE(disp == Catch::Approx(oracles::simplex_hilbert_distance(gx, Vec::Ones(3)))
                      .epsilon(1e-10));
  REQUIRE(disp == Catch::Approx(1.0).epsilon(1e-10));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vec x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = unif(rng);
      y[i] = unif(rng);
    }
    const double lib =
        distance(family.body, ProjectivePoint(x), ProjectivePoint(y)).value;
    REQUIRE(lib == Catch::Approx(oracles::simplex_hilbert_distance(x, y)).margin(1e-10));
  }
}

TEST_CASE("displacement is invariant under conjugation") {
  std::mt19937_64 rng(31);
  const ConvexBody disk = ConvexBody::unit_ball(2);
  const BodyFamily family = make_family("ellipsoid", 2, FamilyParams{.boost = 0.7});
  for (int trial = 0; trial < 30; ++trial) {
    const ProjectiveMap h = ProjectiveMap::from_matrix(oracles::random_map_matrix(rng, 3));
    const ProjectiveMap g = family.automorphism_generators[trial % 2];
    const ProjectivePoint x = pt(0.2, -0.1);
    const ConvexBody image = transform_body(disk, h);
    const ProjectiveMap conj = h * g * h.inverse();
    REQUIRE(std::abs(displacement(disk, g, x) - displacement(image, conj, h(x))) <= 1e-8);
  }
}

TEST_CASE("ball boundary samples") {
  const ConvexBody disk = ConvexBody::unit_ball(2);
  const ProjectivePoint center = pt(0, 0);
  const AffineChart chart = AffineChart::standard(2);

  SECTION("disk ball is a Euclidean circle of radius tanh r") {
    const double r = 0.5;
    const auto samples = ball_boundary_samples(disk, center, r, 16);
    REQUIRE(samples.size() == 16);
    for (const ProjectivePoint& p : samples) {
      REQUIRE(std::abs(chart.coords(p).norm() - std::tanh(r)) <= 1e-8);
      REQUIRE(std::abs(distance(disk, center, p).value - r) <= 1e-8);
    }
  }

  SECTION("square ball sampling meets the distance contract") {
    const ConvexBody square = unit_square();
    const auto samples = ball_boundary_samples(square, pt(0.1, -0.2), 1.25, 4);
    REQUIRE(samples.size() == 4);
    for (const ProjectivePoint& p : samples) {
      REQUIRE(std::abs(distance(square, pt(0.1, -0.2), p).value - 1.25) <= 1e-8);
    }
  }

  SECTION("large radii approach the boundary") {
    const ConvexBody square = unit_square();
    const auto samples = ball_boundary_samples(square, pt(0, 0), 20.0, 8);
    for (const ProjectivePoint& p : samples) {
      const Vec w = chart.coords(p);
      double closest = std::numeric_limits<double>::infinity();
      for (const Halfspace& h : square.facets()) {
        closest = std::min(closest, h.offset - h.normal.dot(w));
      }
      REQUIRE(closest >= -1e-12);
      REQUIRE(closest <= 1e-6);
    }
  }

  REQUIRE_THROWS_AS(ball_boundary_samples(disk, center, 0.5, 2), DegenerateConfiguration);
  REQUIRE_THROWS_AS(ball_boundary_samples(disk, pt(2, 0), 0.5, 8), PointOutsideBody);
}
