// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run from the repository root (ctest does this automatically).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hilbertlab/scenario.hpp"
#include "hilbertlab/svg.hpp"
#include "hilbertlab/verification.hpp"
#include "oracles.hpp"

using namespace hilbertlab;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, double time_limit_s,
               const std::function<bool(std::string*)>& body) {
  std::string detail;
  bool passed = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    passed = body(&detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0.0 && elapsed > time_limit_s) {
    passed = false;
    detail += (detail.empty() ? "" : "; ") + std::string("time limit exceeded");
  }
  std::printf("[%s] criterion %2d: %s (%.2f s%s%s)\n", passed ? "PASS" : "FAIL", number,
              label.c_str(), elapsed, detail.empty() ? "" : "; ", detail.c_str());
  std::fflush(stdout);
  if (!passed) ++failures;
}

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

ConvexBody unit_square() {
  return ConvexBody::from_vertices(2, {vec2(-1, -1), vec2(1, -1), vec2(1, 1), vec2(-1, 1)});
}

ConvexBody triangle_body() {
  return ConvexBody::from_vertices(2, {vec2(0, 0), vec2(1, 0), vec2(0, 1)});
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double round_to_digits(double v, int digits) {
  if (v == 0.0) return 0.0;
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(v))));
  return std::round(v * scale) / scale;
}

struct SandwichSummary {
  double min_r = std::numeric_limits<double>::infinity();
  double max_R = 0.0;
  bool all_bracketed = true;
};

SandwichSummary sandwich_suite(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  SandwichSummary summary;
  for (int trial = 0; trial < count; ++trial) {
    const ConvexBody poly = oracles::random_polygon(rng);
    const Vec x = oracles::random_interior_point(rng, poly);
    const MarkedBody mb(poly, poly.chart().embed(x));
    const StandardizationResult result = standardize(mb);
    const SandwichRadii radii = sandwich_radii(transform_body(poly, result.g));
    summary.all_bracketed = summary.all_bracketed && radii.inner_r <= 1.0 + 1e-9 &&
                            radii.outer_R >= 1.0 - 1e-9;
    summary.min_r = std::min(summary.min_r, radii.inner_r);
    summary.max_R = std::max(summary.max_R, radii.outer_R);
  }
  return summary;
}

const char* kKleinScenario = R"({
  "schema": "hilbertlab/v1",
  "name": "klein-boosts",
  "family": {"tag": "ellipsoid", "n": 2, "parameters": {"boost": 2.0}},
  "epsilon_grid": [0.1, 0.5, 2.0],
  "depth": 3,
  "seed": 1
})";

}  // namespace

int main() {
  criterion(1, "Klein-model equivalence on 1000 seeded pairs at 1e-10", 1.0,
            [](std::string* detail) {
    const ConvexBody disk = ConvexBody::unit_ball(2);
    std::mt19937_64 rng(20250801);
    std::uniform_real_distribution<double> unif(-0.95, 0.95);
    int checked = 0;
    double worst = 0.0;
    while (checked < 1000) {
      const Vec u = vec2(unif(rng), unif(rng));
      const Vec v = vec2(unif(rng), unif(rng));
      if (u.norm() > 0.95 || v.norm() > 0.95) continue;
      ++checked;
      const double lib = distance(disk, ProjectivePoint::from_affine(u),
                                  ProjectivePoint::from_affine(v)).value;
      worst = std::max(worst, std::abs(lib - oracles::klein_distance(u, v)));
    }
    *detail = "max deviation " + std::to_string(worst);
    return worst <= 1e-10;
  });

  criterion(2, "metric axioms on 1000 triples in disk, square, triangle", 5.0,
            [](std::string* detail) {
    std::vector<ConvexBody> bodies;
    bodies.push_back(ConvexBody::unit_ball(2));
    bodies.push_back(unit_square());
    bodies.push_back(triangle_body());
    std::mt19937_64 rng(20250802);
    for (const ConvexBody& body : bodies) {
      for (int trial = 0; trial < 1000; ++trial) {
        const ProjectivePoint x = body.chart().embed(oracles::random_interior_point(rng, body));
        const ProjectivePoint y = body.chart().embed(oracles::random_interior_point(rng, body));
        const ProjectivePoint z = body.chart().embed(oracles::random_interior_point(rng, body));
        const double dxy = distance(body, x, y).value;
        if (std::abs(dxy - distance(body, y, x).value) > 1e-10) {
          *detail = "symmetry violated";
          return false;
        }
        if (distance(body, x, z).value + distance(body, z, y).value - dxy < -1e-9) {
          *detail = "triangle inequality violated";
          return false;
        }
        if (distance(body, x, x).value != 0.0) {
          *detail = "identity violated";
          return false;
        }
      }
    }
    return true;
  });

  criterion(3, "projective invariance over 200 random maps at 1e-8", 5.0,
            [](std::string* detail) {
    std::mt19937_64 rng(20250803);
    std::vector<ConvexBody> bodies;
    bodies.push_back(ConvexBody::unit_ball(2));
    bodies.push_back(unit_square());
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const ConvexBody& body = bodies[trial % 2];
      const ProjectiveMap g = ProjectiveMap::from_matrix(oracles::random_map_matrix(rng, 3));
      const ProjectivePoint x = body.chart().embed(oracles::random_interior_point(rng, body));
      const ProjectivePoint y = body.chart().embed(oracles::random_interior_point(rng, body));
      const ConvexBody image = transform_body(body, g);
      worst = std::max(worst, std::abs(distance(body, x, y).value -
                                       distance(image, g(x), g(y)).value));
    }
    *detail = "max deviation " + std::to_string(worst);
    return worst <= 1e-8;
  });

  criterion(4, "Benzecri standardization of 100 random polygons", 60.0,
            [](std::string* detail) {
    std::mt19937_64 rng(20250804);
    for (int trial = 0; trial < 100; ++trial) {
      const ConvexBody poly = oracles::random_polygon(rng);
      const Vec x = oracles::random_interior_point(rng, poly);
      const MarkedBody mb(poly, poly.chart().embed(x));
      const StandardizationResult base = standardize(mb);
      if (!base.certificate.valid() || base.newton_iterations > 100) {
        *detail = "convergence or certificate failure at trial " + std::to_string(trial);
        return false;
      }
      const MarkedBody std_pair = transform_marked(mb, base.g);
      const StandardizationResult again = standardize(std_pair);
      if ((again.g.matrix().transpose() * again.g.matrix() - Mat::Identity(3, 3)).norm() >
          1e-5) {
        *detail = "idempotence failure at trial " + std::to_string(trial);
        return false;
      }
      const ProjectiveMap h = ProjectiveMap::from_matrix(oracles::random_map_matrix(rng, 3));
      const StandardizationResult moved = standardize(transform_marked(mb, h));
      const Mat u = moved.g.matrix() * h.matrix() * base.g.inverse().matrix();
      if ((u.transpose() * u - Mat::Identity(3, 3)).norm() > 1e-5) {
        *detail = "equivariance failure at trial " + std::to_string(trial);
        return false;
      }
    }
    return true;
  });

  criterion(5, "moment machinery: exact vs Monte Carlo, inertia identity, disk closed form",
            120.0, [](std::string* detail) {
    const AffineChart std2 = AffineChart::standard(2);
    const MomentData disk = moments(ConvexBody::unit_ball(2), std2);
    if ((disk.second_moment - (M_PI / 4) * Mat::Identity(2, 2)).norm() > 1e-12) {
      *detail = "unit disk closed form off";
      return false;
    }
    std::mt19937_64 rng(20250805);
    double worst_mc = 0.0, worst_matching = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const ConvexBody poly = oracles::random_polygon(rng);
      const MomentData exact = moments(poly, std2);
      const MomentData mc = second_moment_monte_carlo(
          poly, exact.centroid, std2, 10000000, 0xabcddcba0000 + trial);
      // agreement to three significant digits: every entry within half a
      // unit of the third significant digit at the matrix's magnitude
      const double magnitude = exact.second_moment.cwiseAbs().maxCoeff();
      const double allowance =
          0.5 * std::pow(10.0, std::floor(std::log10(magnitude)) - 2.0);
      worst_mc = std::max(worst_mc, (mc.second_moment - exact.second_moment)
                                            .cwiseAbs()
                                            .maxCoeff() /
                                        allowance);
      const AffineEllipsoid inertia = inertia_ellipsoid(poly, std2);
      const MomentData ell = moments(ellipsoid_body(inertia, std2), std2);
      worst_matching =
          std::max(worst_matching, (ell.second_moment - exact.second_moment).norm() /
                                       std::max(1.0, exact.second_moment.norm()));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst third-digit ratio %.2f, matching rel %.2e",
                  worst_mc, worst_matching);
    *detail = buf;
    return worst_mc <= 1.0 && worst_matching <= 1e-9;
  });

  criterion(6, "sandwich property r <= 1 <= R with stable extremes", 120.0,
            [](std::string* detail) {
    const SandwichSummary a = sandwich_suite(20250801, 100);
    const SandwichSummary b = sandwich_suite(424242, 100);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "min r %.4f / %.4f, max R %.4f / %.4f", a.min_r,
                  b.min_r, a.max_R, b.max_R);
    *detail = buf;
    if (!a.all_bracketed || !b.all_bracketed) return false;
    const bool finite = std::isfinite(a.min_r) && std::isfinite(b.min_r) && a.min_r > 0.0 &&
                        b.min_r > 0.0 && a.max_R < 1e3 && b.max_R < 1e3;
    // reported precision: two significant digits
    const bool stable = round_to_digits(a.min_r, 2) == round_to_digits(b.min_r, 2) &&
                        round_to_digits(a.max_R, 2) == round_to_digits(b.max_R, 2);
    return finite && stable;
  });

  criterion(7, "orbit lemma: exhaustive scan, |E| <= 8, |S| <= 4", 30.0,
            [](std::string* detail) {
    const orbitscan::ScanStats stats = orbit_lemma_scan(8, 20250801, 400000, 2);
    *detail = std::to_string(stats.sets_checked) + " cases, " +
              std::to_string(stats.counterexamples) + " counterexamples";
    return stats.counterexamples == 0 && stats.sets_checked > 100000000;
  });

  criterion(8, "nilpotency verdicts: Heisenberg, abelian, Sanov", 10.0,
            [](std::string* detail) {
    Mat e12 = Mat::Identity(3, 3), e23 = Mat::Identity(3, 3);
    e12(0, 1) = 1.0;
    e23(1, 2) = 1.0;
    GeneratorSet heisenberg;
    heisenberg.elements = {ProjectiveMap::from_matrix(e12), ProjectiveMap::from_matrix(e23)};
    const NilpotencyVerdict h = nilpotency_witness(heisenberg, 6);
    if (h.kind != VerdictKind::Nilpotent || h.nilpotency_class != 2 || !h.exact_path) {
      *detail = "Heisenberg verdict wrong";
      return false;
    }

    Mat d1 = Mat::Zero(3, 3), d2 = Mat::Zero(3, 3);
    d1.diagonal() << 2.0, 1.0, 0.5;
    d2.diagonal() << 4.0, 1.0, 0.25;
    GeneratorSet abelian;
    abelian.elements = {ProjectiveMap::from_matrix(d1), ProjectiveMap::from_matrix(d2)};
    const NilpotencyVerdict a = nilpotency_witness(abelian, 6);
    if (a.kind != VerdictKind::Nilpotent || a.nilpotency_class != 1) {
      *detail = "abelian verdict wrong";
      return false;
    }

    GeneratorSet sanov = GeneratorSet::symmetrized(
        {ProjectiveMap::from_matrix((Mat(2, 2) << 1, 2, 0, 1).finished()),
         ProjectiveMap::from_matrix((Mat(2, 2) << 1, 0, 2, 1).finished())});
    const NilpotencyVerdict s = nilpotency_witness(sanov, 6);
    if (s.kind != VerdictKind::NotNilpotent || !s.exact_path || s.witness_word.empty()) {
      *detail = "Sanov verdict wrong";
      return false;
    }
    std::vector<exact::IntMat> gens;
    for (const ProjectiveMap& g : sanov.elements) {
      gens.push_back(*exact::from_double(g.matrix()));
    }
    if (exact::is_scalar_identity(exact::evaluate_word(gens, s.witness_word, 2))) {
      *detail = "Sanov witness re-evaluates to the identity";
      return false;
    }
    *detail = "witness length " + std::to_string(s.witness_word.size());
    return true;
  });

  criterion(9, "Margulis scan: trivial eps-subgroups at 0.1, positive eps*", 120.0,
            [](std::string* detail) {
    const ScanReport klein = run_scenario(scenario_from_string(kKleinScenario));
    if (klein.per_epsilon[0].subgroup_size != 1 ||
        klein.per_epsilon[0].verdict.kind != VerdictKind::Nilpotent) {
      *detail = "Klein-disk subgroup at 0.1 not trivial";
      return false;
    }
    const char* simplex_text = R"({
      "schema": "hilbertlab/v1",
      "name": "simplex-diag",
      "family": {"tag": "simplex", "n": 2,
                 "parameters": {"diagonal": [2.718281828459045, 1.0, 0.36787944117144233]}},
      "epsilon_grid": [0.1, 0.5, 2.0],
      "depth": 3,
      "seed": 1
    })";
    const ScanReport simplex = run_scenario(scenario_from_string(simplex_text));
    if (simplex.per_epsilon[0].subgroup_size != 1 ||
        simplex.per_epsilon[0].verdict.kind != VerdictKind::Nilpotent) {
      *detail = "simplex subgroup at 0.1 not trivial";
      return false;
    }
    const std::vector<double> eps_grid{0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
    const AggregatedScan disk_scan =
        margulis_scan("ellipsoid", 2, {0.5, 1.0, 1.5, 2.0}, eps_grid, 3, 1);
    const AggregatedScan simplex_scan =
        margulis_scan("simplex", 2, {0.5, 1.0, 1.5, 2.0}, eps_grid, 3, 1);
    double min_star = std::numeric_limits<double>::infinity();
    for (const AggregatedScan* scan : {&disk_scan, &simplex_scan}) {
      for (std::size_t i = 0; i < scan->configs.size(); ++i) {
        if (!scan->monotone_consistent[i]) {
          *detail = "verdicts not monotone";
          return false;
        }
        min_star = std::min(min_star, scan->epsilon_star[i]);
      }
    }
    *detail = "min epsilon* = " + std::to_string(min_star);
    return min_star > 0.0;
  });

  criterion(10, "displacement-vs-gauge envelope below 0.05 at displacement 0.01", 60.0,
            [](std::string* detail) {
    const auto samples = displacement_gauge_experiment(20250801);
    const auto again = displacement_gauge_experiment(20250801);
    if (samples.size() != again.size()) {
      *detail = "experiment not deterministic";
      return false;
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].gauge_to_stabilizer != again[i].gauge_to_stabilizer) {
        *detail = "experiment not deterministic";
        return false;
      }
    }
    const double env = gauge_envelope(samples, 0.01);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "envelope(0.01) = %.4f", env);
    *detail = buf;
    double prev = 0.0;
    for (double eps : {0.01, 0.02, 0.05, 0.2, 1.0, 2.0}) {
      const double e = gauge_envelope(samples, eps);
      if (e < prev) {
        *detail = "envelope not monotone";
        return false;
      }
      prev = e;
    }
    return env < 0.05;
  });

  criterion(11, "CLI determinism and golden SVG", 60.0, [](std::string* detail) {
    const Scenario scenario = scenario_from_string(kKleinScenario);
    const std::string once = report_to_json(run_scenario(scenario)).dump(2);
    const std::string twice = report_to_json(run_scenario(scenario)).dump(2);
    if (once != twice) {
      *detail = "reports differ between runs";
      return false;
    }
    const Json parsed = Json::parse(once);
    if (report_to_json(report_from_json(parsed)) != parsed) {
      *detail = "report round trip lossy";
      return false;
    }
    const std::string golden = slurp("tests/golden/unit_disk.svg");
    if (golden.empty()) {
      *detail = "golden SVG missing";
      return false;
    }
    const std::string svg =
        render_svg(ConvexBody::unit_ball(2), ProjectivePoint::from_affine(Vec::Zero(2)),
                   {0.5, 1.0});
    if (svg != golden) {
      *detail = "SVG differs from the golden file";
      return false;
    }
    *detail = "byte-identical reports and SVG";
    return true;
  });

  if (failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
