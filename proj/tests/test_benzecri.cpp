#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hilbertlab/benzecri.hpp"
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

const AffineChart kStd = AffineChart::standard(2);

}  // namespace

TEST_CASE("centroids") {
  REQUIRE((centroid(triangle_body(), kStd) - vec2(1.0 / 3, 1.0 / 3)).norm() < 1e-14);
  REQUIRE(centroid(ConvexBody::unit_ball(2), kStd).norm() < 1e-14);
  REQUIRE(centroid(unit_square(), kStd).norm() < 1e-14);
}

TEST_CASE("second moments, closed forms") {
  const MomentData disk = moments(ConvexBody::unit_ball(2), kStd);
  REQUIRE(disk.volume == Catch::Approx(M_PI).epsilon(1e-12));
  REQUIRE((disk.second_moment - (M_PI / 4) * Mat::Identity(2, 2)).norm() <= 1e-12);

  const MomentData square = moments(unit_square(), kStd);
  REQUIRE(square.volume == Catch::Approx(4.0).epsilon(1e-12));
  REQUIRE((square.second_moment - (4.0 / 3) * Mat::Identity(2, 2)).norm() <= 1e-12);

  // triangle (0,0),(1,0),(0,1) about its centroid, by hand:
  // M = [[1/36, -1/72], [-1/72, 1/36]]
  const MomentData tri = moments(triangle_body(), kStd);
  Mat expected(2, 2);
  expected << 1.0 / 36, -1.0 / 72, -1.0 / 72, 1.0 / 36;
  REQUIRE((tri.second_moment - expected).norm() < 1e-15);
  REQUIRE(tri.volume == Catch::Approx(0.5).epsilon(1e-14));

  // moment about a shifted basepoint follows the parallel-axis rule
  const MomentData shifted = second_moment_matrix(unit_square(), vec2(0.5, 0), kStd);
  Mat shifted_expected = (4.0 / 3) * Mat::Identity(2, 2);
  shifted_expected(0, 0) += 4.0 * 0.25;
  REQUIRE((shifted.second_moment - shifted_expected).norm() < 1e-12);
}

TEST_CASE("hypercube moments in four dimensions") {
  std::vector<Vec> corners;
  for (int mask = 0; mask < 16; ++mask) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    corners.push_back(v);
  }
  const ConvexBody cube = ConvexBody::from_vertices(4, corners);
  const MomentData data = moments(cube, AffineChart::standard(4));
  REQUIRE(data.volume == Catch::Approx(16.0).epsilon(1e-12));
  REQUIRE((data.second_moment - (16.0 / 3) * Mat::Identity(4, 4)).norm() <= 1e-11);
  REQUIRE(data.centroid.norm() <= 1e-13);
}

TEST_CASE("monte carlo agrees with the exact path") {
  const ConvexBody tri = triangle_body();
  const MomentData exact = moments(tri, kStd);
  const MomentData mc = second_moment_monte_carlo(tri, exact.centroid, kStd, 10000000, 99);
  REQUIRE_FALSE(mc.exact);
  REQUIRE(mc.sample_count == 10000000);
  REQUIRE(mc.seed == 99);
  REQUIRE(std::abs(mc.volume - exact.volume) <= 1e-3 * exact.volume);
  REQUIRE((mc.second_moment - exact.second_moment).norm() <= 1e-3 * exact.second_moment.norm());
}

TEST_CASE("inertia ellipsoids") {
  const AffineEllipsoid disk = inertia_ellipsoid(ConvexBody::unit_ball(2), kStd);
  REQUIRE(disk.center.norm() < 1e-14);
  REQUIRE((disk.shape - Mat::Identity(2, 2)).norm() < 1e-12);

  // ellipsoids are their own inertia ellipsoids
  Mat q2 = Mat::Identity(3, 3);
  q2(2, 2) = -4.0;  // disk of radius 2
  const AffineEllipsoid big = inertia_ellipsoid(ConvexBody::ellipsoid(q2), kStd);
  REQUIRE((big.shape - 2.0 * Mat::Identity(2, 2)).norm() < 1e-12);

  const double rho = std::pow(16.0 / (3.0 * M_PI), 0.25);
  const AffineEllipsoid square = inertia_ellipsoid(unit_square(), kStd);
  REQUIRE((square.shape - rho * Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("moment matching on random polygons") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const ConvexBody poly = oracles::random_polygon(rng);
    const MomentData body_moments = moments(poly, kStd);
    const AffineEllipsoid inertia = inertia_ellipsoid(poly, kStd);
    const MomentData ell_moments = moments(ellipsoid_body(inertia, kStd), kStd);
    REQUIRE((ell_moments.second_moment - body_moments.second_moment).norm() <=
            1e-9 * std::max(1.0, body_moments.second_moment.norm()));
    REQUIRE((ell_moments.centroid - body_moments.centroid).norm() <= 1e-9);
  }
}

TEST_CASE("standard pair certificates") {
  const MarkedBody disk(ConvexBody::unit_ball(2), pt(0, 0));
  REQUIRE(is_standard(disk, 1e-6).valid());

  const MarkedBody square(unit_square(), pt(0, 0));
  const StandardPairCertificate cert = is_standard(square, 1e-6);
  REQUIRE_FALSE(cert.valid());
  REQUIRE(cert.bounded);
  REQUIRE(cert.centroid_residual <= 1e-12);
  const double rho = std::pow(16.0 / (3.0 * M_PI), 0.25);
  (void)rho;
  REQUIRE(cert.inertia_residual > 0.1);  // inertia radius is about 1.14, not 1

  const MarkedBody off_center(ConvexBody::unit_ball(2), pt(0.5, 0));
  REQUIRE_FALSE(is_standard(off_center, 1e-6).valid());

  // the projective simplex is not bounded in the standard chart
  const BodyFamily simplex = make_family("simplex", 2, FamilyParams{});
  const MarkedBody marked_simplex(simplex.body, ProjectivePoint(Vec::Ones(3)));
  const StandardPairCertificate simplex_cert = is_standard(marked_simplex, 1e-6);
  REQUIRE_FALSE(simplex_cert.bounded);
  REQUIRE_FALSE(simplex_cert.valid());
  REQUIRE_THROWS_AS(moments(simplex.body, kStd), UnboundedInChart);
}

TEST_CASE("standardize the unit disk") {
  const MarkedBody disk(ConvexBody::unit_ball(2), pt(0, 0));
  const StandardizationResult result = standardize(disk);
  REQUIRE(result.certificate.valid());
  // already standard: the map can only be orthogonal
  const Mat gtg = result.g.matrix().transpose() * result.g.matrix();
  REQUIRE((gtg - Mat::Identity(3, 3)).norm() <= 1e-6);
}

TEST_CASE("standardize an off-center disk picks the polar chart") {
  const ConvexBody disk = ConvexBody::unit_ball(2);
  const ProjectivePoint x = pt(0.5, 0);
  const StandardizationResult result = standardize(MarkedBody(disk, x));
  REQUIRE(result.certificate.valid());

  // chart covector proportional to Q x
  const Vec polar = disk.form() * x.coords();
  const Vec xi = result.chart_covector;
  const Mat cross = polar * xi.transpose() - xi * polar.transpose();
  REQUIRE(cross.norm() <= 1e-8 * polar.norm() * xi.norm());

  // the standardized image of the disk is the unit disk again
  const ConvexBody image = transform_body(disk, result.g);
  const AffineEllipsoid e = image.affine_form(kStd);
  REQUIRE(e.center.norm() <= 1e-7);
  REQUIRE((e.shape - Mat::Identity(2, 2)).norm() <= 1e-6);
}

TEST_CASE("standardize the triangle and its permuted copies") {
  const ConvexBody tri = triangle_body();
  const ProjectivePoint centroid_pt = pt(1.0 / 3, 1.0 / 3);
  const StandardizationResult base = standardize(MarkedBody(tri, centroid_pt));
  REQUIRE(base.certificate.valid());

  // applying a symmetry of the triangle first changes g by an orthogonal map
  Mat swap = Mat::Zero(3, 3);
  swap(0, 1) = 1.0; swap(1, 0) = 1.0; swap(2, 2) = 1.0;  // swaps the two legs
  const ProjectiveMap sigma = ProjectiveMap::from_matrix(swap);
  const MarkedBody permuted = transform_marked(MarkedBody(tri, centroid_pt), sigma);
  const StandardizationResult moved = standardize(permuted);
  REQUIRE(moved.certificate.valid());
  const Mat u = moved.g.matrix() * sigma.matrix() * base.g.inverse().matrix();
  REQUIRE((u.transpose() * u - Mat::Identity(3, 3)).norm() <= 1e-5);
}

TEST_CASE("standardization equivariance and idempotence on random polygons") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexBody poly = oracles::random_polygon(rng);
    const Vec x = oracles::random_interior_point(rng, poly);
    const MarkedBody mb(poly, poly.chart().embed(x));
    const StandardizationResult base = standardize(mb);
    REQUIRE(base.certificate.valid());
    REQUIRE(base.newton_iterations <= 100);

    // idempotence
    const MarkedBody standard_pair = transform_marked(mb, base.g);
    const StandardizationResult again = standardize(standard_pair);
    const Mat gtg = again.g.matrix().transpose() * again.g.matrix();
    REQUIRE((gtg - Mat::Identity(3, 3)).norm() <= 1e-5);

    // equivariance modulo the orthogonal group
    const ProjectiveMap h = ProjectiveMap::from_matrix(oracles::random_map_matrix(rng, 3));
    const StandardizationResult moved = standardize(transform_marked(mb, h));
    const Mat u = moved.g.matrix() * h.matrix() * base.g.inverse().matrix();
    REQUIRE((u.transpose() * u - Mat::Identity(3, 3)).norm() <= 1e-5);
  }
}

TEST_CASE("sandwich radii") {
  REQUIRE(sandwich_radii(ConvexBody::unit_ball(2)).inner_r == Catch::Approx(1.0));
  REQUIRE(sandwich_radii(ConvexBody::unit_ball(2)).outer_R == Catch::Approx(1.0));

  // standardized square: r = (3 pi / 16)^{1/4}, R = sqrt(2) r
  const StandardizationResult result = standardize(MarkedBody(unit_square(), pt(0, 0)));
  const ConvexBody scaled = transform_body(unit_square(), result.g);
  const SandwichRadii radii = sandwich_radii(scaled);
  const double rho = std::pow(16.0 / (3.0 * M_PI), 0.25);
  REQUIRE(radii.inner_r == Catch::Approx(1.0 / rho).epsilon(1e-6));
  REQUIRE(radii.outer_R == Catch::Approx(std::sqrt(2.0) / rho).epsilon(1e-6));

  REQUIRE_THROWS_AS(sandwich_radii(unit_square()), NotStandard);
}

TEST_CASE("sandwich bracketing on random standardized polygons") {
  std::mt19937_64 rng(909);
  double min_r = std::numeric_limits<double>::infinity();
  double max_R = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ConvexBody poly = oracles::random_polygon(rng);
    const Vec x = oracles::random_interior_point(rng, poly);
    const StandardizationResult result = standardize(MarkedBody(poly, poly.chart().embed(x)));
    REQUIRE(result.certificate.valid());
    const MarkedBody std_pair =
        transform_marked(MarkedBody(poly, poly.chart().embed(x)), result.g);
    const SandwichRadii radii = sandwich_radii(std_pair.body);
    REQUIRE(radii.inner_r <= 1.0 + 1e-9);
    REQUIRE(radii.outer_R >= 1.0 - 1e-9);
    min_r = std::min(min_r, radii.inner_r);
    max_R = std::max(max_R, radii.outer_R);
  }
  REQUIRE(min_r > 0.1);
  REQUIRE(max_R < 10.0);
}

TEST_CASE("standardized bodies of a shrinking perturbation family converge") {
  // compactness proxy: the standardized images of a convergent body
  // sequence form a Cauchy sequence for the vertex-set Hausdorff distance
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Vec> base, pattern;
  for (int i = 0; i < 7; ++i) {
    const double a = 2.0 * M_PI * i / 7;
    base.push_back(vec2(std::cos(a), std::sin(a)));
    pattern.push_back(vec2(unif(rng), unif(rng)));
  }
  std::vector<double> hausdorff;
  ConvexBody previous = ConvexBody::unit_ball(2);
  for (int step = 0; step < 7; ++step) {
    const double scale = 0.5 * std::pow(0.25, step);
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < base.size(); ++i) pts.push_back(base[i] + scale * pattern[i]);
    const ConvexBody poly = ConvexBody::from_vertices(2, pts);
    const StandardizationResult result =
        standardize(MarkedBody(poly, poly.interior_point()));
    const ConvexBody standardized = transform_body(poly, result.g);
    if (step > 0) {
      double d = 0.0;
      for (const Vec& v : standardized.vertices()) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& w : previous.vertices()) best = std::min(best, (v - w).norm());
        d = std::max(d, best);
      }
      hausdorff.push_back(d);
    }
    previous = standardized;
  }
  for (std::size_t i = 1; i < hausdorff.size(); ++i) {
    REQUIRE(hausdorff[i] <= 0.5 * hausdorff[i - 1] + 1e-12);
  }
  REQUIRE(hausdorff.back() <= 1e-3);
}
