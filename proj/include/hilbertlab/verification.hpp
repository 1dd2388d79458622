#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hilbertlab/benzecri.hpp"
#include "hilbertlab/group_lab.hpp"
#include "hilbertlab/hilbert_metric.hpp"
#include "hilbertlab/scenario.hpp"

namespace hilbertlab {

struct CheckResult {
  std::string id;
  bool passed = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// fast exhaustive machinery for the orbit lemma
//
// Permutations of up to 8 points are packed 3 bits per point. The checked
// statement: for a symmetric generating set acting transitively on E and
// every m < |E|, the ball S_*^m e meets at least min(m+1, |E|) points.
// The statement is invariant under simultaneous relabeling of the points,
// which is what makes the canonical-first-element reductions below cover
// every set exactly once up to relabeling.

namespace orbitscan {

using Packed = std::uint32_t;

inline Packed pack(const std::vector<int>& perm) {
  Packed p = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    p |= static_cast<Packed>(perm[i]) << (3 * i);
  }
  return p;
}

inline int apply(Packed p, int point) { return (p >> (3 * point)) & 7; }

inline std::uint32_t grow(const Packed* perms, int count, std::uint32_t reach) {
  std::uint32_t next = reach;
  for (int j = 0; j < count; ++j) {
    std::uint32_t bits = reach;
    const Packed p = perms[j];
    while (bits) {
      const int pt = __builtin_ctz(bits);
      bits &= bits - 1;
      next |= 1u << apply(p, pt);
    }
  }
  return next;
}

/// Evaluates the orbit-lemma claim for one set and base point: when the
/// action is transitive, the ball S_*^m e must meet at least min(m+1, n)
/// points for every m < n. Intransitive sets hold vacuously.
inline bool lemma_holds_at(const Packed* perms, int count, int n, int e) {
  std::uint32_t reach = 1u << e;
  int sizes[9];
  sizes[0] = 1;
  for (int m = 1; m < n; ++m) {
    reach = grow(perms, count, reach);
    sizes[m] = __builtin_popcount(reach);
  }
  std::uint32_t closure = reach;
  for (;;) {
    const std::uint32_t wider = grow(perms, count, closure);
    if (wider == closure) break;
    closure = wider;
  }
  if (__builtin_popcount(closure) < n) return true;
  for (int m = 1; m < n; ++m) {
    if (sizes[m] < std::min(m + 1, n)) return false;
  }
  return true;
}

struct UnitTable {
  int n = 0;
  std::vector<Packed> involutions;       // non-identity involutions
  std::vector<std::pair<Packed, Packed>> pairs;  // {g, g^{-1}} with g < g^{-1}
  std::vector<Packed> involution_reps;   // canonical involution per cycle type
  std::vector<std::pair<Packed, Packed>> pair_reps;  // canonical non-involution units
};

inline std::vector<int> cycle_type(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  std::vector<int> type;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    type.push_back(len);
  }
  std::sort(type.begin(), type.end());
  return type;
}

inline UnitTable build_units(int n) {
  UnitTable table;
  table.n = n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> seen_inv_types, seen_pair_types;
  do {
    std::vector<int> inverse(n);
    for (int i = 0; i < n; ++i) inverse[perm[i]] = i;
    const bool identity = std::is_sorted(perm.begin(), perm.end());
    if (identity) continue;
    if (inverse == perm) {
      table.involutions.push_back(pack(perm));
      const std::vector<int> type = cycle_type(perm);
      if (std::find(seen_inv_types.begin(), seen_inv_types.end(), type) ==
          seen_inv_types.end()) {
        seen_inv_types.push_back(type);
        table.involution_reps.push_back(pack(perm));
      }
    } else if (std::lexicographical_compare(perm.begin(), perm.end(), inverse.begin(),
                                            inverse.end())) {
      table.pairs.emplace_back(pack(perm), pack(inverse));
      const std::vector<int> type = cycle_type(perm);
      if (std::find(seen_pair_types.begin(), seen_pair_types.end(), type) ==
          seen_pair_types.end()) {
        seen_pair_types.push_back(type);
        table.pair_reps.emplace_back(pack(perm), pack(inverse));
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return table;
}

struct ScanStats {
  long long sets_checked = 0;
  long long counterexamples = 0;
};

/// Exhaustive scan over all inverse-closed generating sets with at most
/// four elements, for n <= 6. The enumeration covers every set, so testing
/// the base point e = 0 covers every (set, point) case up to relabeling.
inline void scan_all_small(const UnitTable& t, ScanStats* stats) {
  const int n = t.n;
  std::vector<Packed> gens;
  auto check_all_e = [&](int count) {
    ++stats->sets_checked;
    if (!lemma_holds_at(gens.data(), count, n, 0)) ++stats->counterexamples;
  };

  // one unit
  for (const Packed& a : t.involutions) {
    gens = {a};
    check_all_e(1);
  }
  for (const auto& [g, gi] : t.pairs) {
    gens = {g, gi};
    check_all_e(2);
  }
  // two units
  for (std::size_t i = 0; i < t.involutions.size(); ++i) {
    for (std::size_t j = i + 1; j < t.involutions.size(); ++j) {
      gens = {t.involutions[i], t.involutions[j]};
      check_all_e(2);
    }
  }
  for (const auto& [g, gi] : t.pairs) {
    for (const Packed& a : t.involutions) {
      gens = {g, gi, a};
      check_all_e(3);
    }
  }
  for (std::size_t i = 0; i < t.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < t.pairs.size(); ++j) {
      gens = {t.pairs[i].first, t.pairs[i].second, t.pairs[j].first, t.pairs[j].second};
      check_all_e(4);
    }
  }
  // three units: sizes force at least two involutions
  for (std::size_t i = 0; i < t.involutions.size(); ++i) {
    for (std::size_t j = i + 1; j < t.involutions.size(); ++j) {
      for (std::size_t k = j + 1; k < t.involutions.size(); ++k) {
        gens = {t.involutions[i], t.involutions[j], t.involutions[k]};
        check_all_e(3);
      }
      for (const auto& [g, gi] : t.pairs) {
        gens = {t.involutions[i], t.involutions[j], g, gi};
        check_all_e(4);
      }
    }
  }
  // four units: all involutions
  const std::size_t ni = t.involutions.size();
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = i + 1; j < ni; ++j) {
      for (std::size_t k = j + 1; k < ni; ++k) {
        for (std::size_t l = k + 1; l < ni; ++l) {
          gens = {t.involutions[i], t.involutions[j], t.involutions[k], t.involutions[l]};
          check_all_e(4);
        }
      }
    }
  }
}

/// Scan for n = 7, 8: families are enumerated with one generator pinned to
/// a canonical representative of its conjugacy class, which covers every
/// set up to relabeling of E; the base point then runs over all of E. Only
/// the four-involution family at n = 8 stays sampled (size ~10^10).
inline void scan_large(const UnitTable& t, std::uint64_t seed, long long four_inv_samples,
                       ScanStats* stats) {
  const int n = t.n;
  std::vector<Packed> gens;
  auto check_all_e = [&](int count) {
    for (int e = 0; e < n; ++e) {
      ++stats->sets_checked;
      if (!lemma_holds_at(gens.data(), count, n, e)) ++stats->counterexamples;
    }
  };
  auto check_origin = [&](int count) {
    ++stats->sets_checked;
    if (!lemma_holds_at(gens.data(), count, n, 0)) ++stats->counterexamples;
  };

  // single units: fully enumerated, e = 0 covers all cases up to relabeling
  for (const Packed& a : t.involutions) {
    gens = {a};
    check_origin(1);
  }
  for (const auto& [g, gi] : t.pairs) {
    gens = {g, gi};
    check_origin(2);
  }

  // two units: canonical first unit x every second unit
  auto second_units = [&](const std::vector<Packed>& first, int first_count) {
    for (const Packed& a : t.involutions) {
      gens = first;
      gens.push_back(a);
      check_all_e(first_count + 1);
    }
    for (const auto& [g, gi] : t.pairs) {
      gens = first;
      gens.push_back(g);
      gens.push_back(gi);
      check_all_e(first_count + 2);
    }
  };
  for (const Packed& rep : t.involution_reps) second_units({rep}, 1);
  for (const auto& [g, gi] : t.pair_reps) second_units({g, gi}, 2);

  // pair + two involutions: canonical pair x all involution pairs
  for (const auto& [g, gi] : t.pair_reps) {
    for (std::size_t i = 0; i < t.involutions.size(); ++i) {
      for (std::size_t j = i + 1; j < t.involutions.size(); ++j) {
        gens = {g, gi, t.involutions[i], t.involutions[j]};
        check_all_e(4);
      }
    }
  }

  // three involutions: canonical involution x all involution pairs
  for (const Packed& rep : t.involution_reps) {
    for (std::size_t i = 0; i < t.involutions.size(); ++i) {
      for (std::size_t j = i + 1; j < t.involutions.size(); ++j) {
        gens = {rep, t.involutions[i], t.involutions[j]};
        check_all_e(3);
      }
    }
  }

  // four involutions
  if (n <= 7) {
    for (const Packed& rep : t.involution_reps) {
      for (std::size_t i = 0; i < t.involutions.size(); ++i) {
        for (std::size_t j = i + 1; j < t.involutions.size(); ++j) {
          for (std::size_t k = j + 1; k < t.involutions.size(); ++k) {
            gens = {rep, t.involutions[i], t.involutions[j], t.involutions[k]};
            check_all_e(4);
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, t.involutions.size() - 1);
    for (long long s = 0; s < four_inv_samples; ++s) {
      gens = {t.involutions[pick(rng)], t.involutions[pick(rng)], t.involutions[pick(rng)],
              t.involutions[pick(rng)]};
      check_all_e(4);
    }
  }
}

}  // namespace orbitscan

/// Orbit-lemma sweep over all generating-set families up to |E| = max_points.
/// Point counts run concurrently when threads > 1; the merged statistics do
/// not depend on the schedule.
inline orbitscan::ScanStats orbit_lemma_scan(int max_points, std::uint64_t seed = 20250801,
                                             long long four_inv_samples = 400000,
                                             int threads = 1) {
  std::vector<std::future<orbitscan::ScanStats>> futures;
  for (int n = max_points; n >= 2; --n) {
    auto task = [n, seed, four_inv_samples]() {
      orbitscan::ScanStats stats;
      const orbitscan::UnitTable table = orbitscan::build_units(n);
      if (n <= 6) {
        orbitscan::scan_all_small(table, &stats);
      } else {
        orbitscan::scan_large(table, seed, four_inv_samples, &stats);
      }
      return stats;
    };
    futures.push_back(
        std::async(threads > 1 ? std::launch::async : std::launch::deferred, task));
  }
  orbitscan::ScanStats stats;
  for (auto& f : futures) {
    const orbitscan::ScanStats part = f.get();
    stats.sets_checked += part.sets_checked;
    stats.counterexamples += part.counterexamples;
  }
  return stats;
}

// ---------------------------------------------------------------------------
// invariant groups

namespace checks {

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline ConvexBody verification_square() {
  return ConvexBody::from_vertices(2, {vec2(-1, -1), vec2(1, -1), vec2(1, 1), vec2(-1, 1)});
}

inline ConvexBody verification_triangle() {
  return ConvexBody::from_vertices(2, {vec2(0, 0), vec2(1, 0), vec2(0, 1)});
}

inline Mat random_map(std::mt19937_64& rng, int size, double spread = 0.3) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m;
  do {
    m = Mat::Identity(size, size);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) m(i, j) += spread * gauss(rng);
    }
  } while (std::abs(m.determinant()) < 1e-2);
  return m;
}

inline ConvexBody random_polygon(std::mt19937_64& rng, int min_vertices = 5,
                                 int max_vertices = 10) {
  std::uniform_int_distribution<int> count(min_vertices, max_vertices);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int k = count(rng);
  std::vector<double> angles(k);
  for (double& a : angles) a = 2.0 * M_PI * unif(rng);
  std::sort(angles.begin(), angles.end());
  Mat shear = Mat::Identity(2, 2);
  shear(0, 0) = 0.6 + 1.2 * unif(rng);
  shear(1, 1) = 0.6 + 1.2 * unif(rng);
  shear(0, 1) = 0.8 * (unif(rng) - 0.5);
  Vec shift = vec2(unif(rng) - 0.5, unif(rng) - 0.5);
  std::vector<Vec> pts;
  for (double a : angles) {
    const double r = 0.5 + unif(rng);
    pts.push_back(shear * vec2(r * std::cos(a), r * std::sin(a)) + shift);
  }
  return ConvexBody::from_vertices(2, pts);
}

inline Vec random_interior(std::mt19937_64& rng, const ConvexBody& body) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (body.kind() == ConvexBody::Kind::Ellipsoid) {
    const AffineEllipsoid e = body.affine_form(AffineChart::standard(body.dim()));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u(body.dim());
    for (int i = 0; i < body.dim(); ++i) u[i] = gauss(rng);
    u *= 0.85 * std::pow(unif(rng), 1.0 / body.dim()) / u.norm();
    return e.center + e.shape * u;
  }
  Vec mean = Vec::Zero(body.dim());
  for (const Vec& v : body.vertices()) mean += v;
  mean /= static_cast<double>(body.vertices().size());
  const std::size_t idx = std::min(body.vertices().size() - 1,
                                   static_cast<std::size_t>(unif(rng) * body.vertices().size()));
  return mean + 0.85 * unif(rng) * (body.vertices()[idx] - mean);
}

inline void check_projective(std::vector<CheckResult>* out) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  bool invariance = true, chart_free = true;
  for (int trial = 0; trial < 200 && invariance && chart_free; ++trial) {
    Vec p(3), d(3);
    for (int i = 0; i < 3; ++i) {
      p[i] = unif(rng);
      d[i] = unif(rng);
    }
    p[2] += 2.0;
    if (d.norm() < 0.1) continue;
    const ProjectivePoint a(p - 1.7 * d), b(p + 2.1 * d), x(p - 0.3 * d), y(p + 0.4 * d);
    const double base = cross_ratio(a, b, x, y);
    const ProjectiveMap g = ProjectiveMap::from_matrix(random_map(rng, 3));
    if (std::abs(cross_ratio(g(a), g(b), g(x), g(y)) - base) >
        1e-9 * std::max(1.0, std::abs(base))) {
      invariance = false;
    }
    // direct affine evaluation in the standard chart when available
    try {
      const AffineChart std2 = AffineChart::standard(2);
      const Vec wa = std2.coords(a), wb = std2.coords(b), wx = std2.coords(x),
                wy = std2.coords(y);
      const double direct =
          ((wa - wx).norm() * (wb - wy).norm()) / ((wa - wy).norm() * (wb - wx).norm());
      if (std::abs(direct - base) > 1e-10 * std::max(1.0, base)) chart_free = false;
    } catch (const PointAtInfinity&) {
    }
  }
  out->push_back({"projective.cross_ratio_invariance", invariance, "200 random quadruples"});
  out->push_back({"projective.cross_ratio_chart_independence", chart_free,
                  "direct standard-chart evaluation"});

  bool idempotent = true;
  for (int trial = 0; trial < 50 && idempotent; ++trial) {
    const Mat raw = random_map(rng, 3);
    const ProjectiveMap once = ProjectiveMap::from_matrix(raw);
    const ProjectiveMap twice = ProjectiveMap::from_matrix(once.matrix());
    if ((once.matrix() - twice.matrix()).norm() > 1e-12) idempotent = false;
    const ProjectivePoint q(Vec(vec2(0.3, -0.4).homogeneous()));
    if (!once(q).approx_equal(ProjectiveMap::from_matrix(5.0 * raw)(q), 1e-10)) {
      idempotent = false;
    }
  }
  out->push_back({"projective.det_normalize_idempotent", idempotent, "50 random matrices"});
}

inline void check_body(std::vector<CheckResult>* out) {
  std::mt19937_64 rng(202);
  const ConvexBody disk = ConvexBody::unit_ball(2);
  std::uniform_real_distribution<double> unif(-0.6, 0.6);
  bool swap_ok = true, equivariant = true;
  for (int trial = 0; trial < 100 && swap_ok && equivariant; ++trial) {
    const ProjectivePoint x = ProjectivePoint::from_affine(vec2(unif(rng), unif(rng)));
    const ProjectivePoint y = ProjectivePoint::from_affine(vec2(unif(rng), unif(rng)));
    if (x.approx_equal(y, 1e-6)) continue;
    const ChordResult fwd = disk.chord_endpoints(x, y);
    const ChordResult back = disk.chord_endpoints(y, x);
    if (!fwd.a.approx_equal(back.b, 1e-10) || !fwd.b.approx_equal(back.a, 1e-10)) {
      swap_ok = false;
    }
    const double theta = 3.0 * unif(rng);
    Mat rot = Mat::Identity(3, 3);
    rot(0, 0) = std::cos(theta); rot(0, 1) = -std::sin(theta);
    rot(1, 0) = std::sin(theta); rot(1, 1) = std::cos(theta);
    const ProjectiveMap g = ProjectiveMap::from_matrix(rot);
    const ChordResult mapped = disk.chord_endpoints(g(x), g(y));
    if (!mapped.a.approx_equal(g(fwd.a), 1e-9) || !mapped.b.approx_equal(g(fwd.b), 1e-9)) {
      equivariant = false;
    }
  }
  out->push_back({"body.chord_swap_symmetry", swap_ok, "100 random chords"});
  out->push_back({"body.chord_equivariance", equivariant, "100 random rotations"});

  bool families_ok = true;
  FamilyParams ell;
  ell.boost = 0.3;
  ell.rotation = 0.7;
  for (const ProjectiveMap& g : make_family("ellipsoid", 2, ell).automorphism_generators) {
    families_ok = families_ok && is_automorphism(ConvexBody::unit_ball(2), g);
  }
  FamilyParams sim;
  sim.diagonal = {2.0, 1.0, 0.5};
  sim.permutations = true;
  const BodyFamily simplex = make_family("simplex", 2, sim);
  for (const ProjectiveMap& g : simplex.automorphism_generators) {
    families_ok = families_ok && is_automorphism(simplex.body, g);
  }
  FamilyParams poly;
  poly.sides = 6;
  poly.symmetries = {"rotation", "reflection"};
  const BodyFamily hexagon = make_family("polygon", 2, poly);
  for (const ProjectiveMap& g : hexagon.automorphism_generators) {
    families_ok = families_ok && is_automorphism(hexagon.body, g);
  }
  out->push_back({"body.family_generators_are_automorphisms", families_ok,
                  "ellipsoid, simplex, polygon families"});
}

inline void check_metric(std::vector<CheckResult>* out) {
  std::mt19937_64 rng(303);
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::unit_ball(2));
  bodies.push_back(verification_square());
  bodies.push_back(verification_triangle());
  bool axioms = true;
  for (const ConvexBody& body : bodies) {
    for (int trial = 0; trial < 300 && axioms; ++trial) {
      const ProjectivePoint x = body.chart().embed(random_interior(rng, body));
      const ProjectivePoint y = body.chart().embed(random_interior(rng, body));
      const ProjectivePoint z = body.chart().embed(random_interior(rng, body));
      const double dxy = distance(body, x, y).value;
      if (std::abs(dxy - distance(body, y, x).value) > 1e-10) axioms = false;
      if (distance(body, x, z).value + distance(body, z, y).value - dxy < -1e-9) {
        axioms = false;
      }
      if (distance(body, x, x).value != 0.0) axioms = false;
    }
  }
  out->push_back({"metric.axioms", axioms, "disk, square, triangle; 300 triples each"});

  bool invariance = true;
  for (int trial = 0; trial < 100 && invariance; ++trial) {
    const ConvexBody& body = bodies[trial % 2];
    const ProjectiveMap g = ProjectiveMap::from_matrix(random_map(rng, 3));
    const ProjectivePoint x = body.chart().embed(random_interior(rng, body));
    const ProjectivePoint y = body.chart().embed(random_interior(rng, body));
    const ConvexBody image = transform_body(body, g);
    if (std::abs(distance(body, x, y).value - distance(image, g(x), g(y)).value) > 1e-8) {
      invariance = false;
    }
  }
  out->push_back({"metric.projective_invariance", invariance, "100 random maps"});

  bool klein = true;
  std::uniform_real_distribution<double> unif(-0.95, 0.95);
  int checked = 0;
  while (checked < 1000 && klein) {
    const Vec u = vec2(unif(rng), unif(rng));
    const Vec v = vec2(unif(rng), unif(rng));
    if (u.norm() > 0.95 || v.norm() > 0.95) continue;
    ++checked;
    const double closed_form = std::acosh(std::max(
        1.0, (1.0 - u.dot(v)) /
                 std::sqrt((1.0 - u.squaredNorm()) * (1.0 - v.squaredNorm()))));
    const double lib = distance(bodies[0], ProjectivePoint::from_affine(u),
                                ProjectivePoint::from_affine(v)).value;
    if (std::abs(lib - closed_form) > 1e-10) klein = false;
  }
  out->push_back({"metric.klein_disk_closed_form", klein, "1000 random pairs"});

  bool conjugation = true;
  const BodyFamily family = make_family("ellipsoid", 2, FamilyParams{.boost = 0.7});
  for (int trial = 0; trial < 30 && conjugation; ++trial) {
    const ProjectiveMap h = ProjectiveMap::from_matrix(random_map(rng, 3));
    const ProjectiveMap g = family.automorphism_generators[trial % 2];
    const ProjectivePoint x = ProjectivePoint::from_affine(vec2(0.2, -0.1));
    const ConvexBody image = transform_body(bodies[0], h);
    if (std::abs(displacement(bodies[0], g, x) -
                 displacement(image, h * g * h.inverse(), h(x))) > 1e-8) {
      conjugation = false;
    }
  }
  out->push_back({"metric.displacement_conjugation_invariance", conjugation,
                  "30 random conjugations"});
}

inline void check_benzecri(std::vector<CheckResult>* out) {
  std::mt19937_64 rng(404);
  const AffineChart std2 = AffineChart::standard(2);

  bool matching = true;
  for (int trial = 0; trial < 30 && matching; ++trial) {
    const ConvexBody poly = random_polygon(rng);
    const MomentData base = moments(poly, std2);
    const AffineEllipsoid inertia = inertia_ellipsoid(poly, std2);
    const MomentData ell = moments(ellipsoid_body(inertia, std2), std2);
    if ((ell.second_moment - base.second_moment).norm() >
        1e-9 * std::max(1.0, base.second_moment.norm())) {
      matching = false;
    }
  }
  out->push_back({"benzecri.moment_matching", matching, "30 random polygons"});

  bool idempotent = true, equivariant = true, sandwich = true;
  for (int trial = 0; trial < 15 && idempotent && equivariant && sandwich; ++trial) {
    const ConvexBody poly = random_polygon(rng);
    const MarkedBody mb(poly, poly.chart().embed(random_interior(rng, poly)));
    const StandardizationResult base = standardize(mb);
    if (!base.certificate.valid()) idempotent = false;
    const MarkedBody std_pair = transform_marked(mb, base.g);
    const StandardizationResult again = standardize(std_pair);
    if ((again.g.matrix().transpose() * again.g.matrix() - Mat::Identity(3, 3)).norm() >
        1e-5) {
      idempotent = false;
    }
    const ProjectiveMap h = ProjectiveMap::from_matrix(random_map(rng, 3));
    const StandardizationResult moved = standardize(transform_marked(mb, h));
    const Mat u = moved.g.matrix() * h.matrix() * base.g.inverse().matrix();
    if ((u.transpose() * u - Mat::Identity(3, 3)).norm() > 1e-5) equivariant = false;
    const SandwichRadii radii = sandwich_radii(std_pair.body);
    if (radii.inner_r > 1.0 + 1e-9 || radii.outer_R < 1.0 - 1e-9) sandwich = false;
  }
  out->push_back({"benzecri.standardize_idempotence", idempotent, "15 random polygons"});
  out->push_back({"benzecri.so_n_equivariance", equivariant, "15 random conjugators"});
  out->push_back({"benzecri.sandwich_bracketing", sandwich, "r <= 1 <= R"});

  const ConvexBody triangle = verification_triangle();
  const MomentData exact = moments(triangle, std2);
  const MomentData mc = second_moment_monte_carlo(triangle, exact.centroid, std2, 1000000, 11);
  const bool mc_ok =
      (mc.second_moment - exact.second_moment).norm() <= 3e-3 * exact.second_moment.norm();
  out->push_back({"benzecri.monte_carlo_cross_check", mc_ok, "triangle, 10^6 samples"});
}

inline void check_group(std::vector<CheckResult>* out) {
  const orbitscan::ScanStats stats = orbit_lemma_scan(6);
  out->push_back({"group.orbit_lemma_exhaustive_small", stats.counterexamples == 0,
                  std::to_string(stats.sets_checked) + " generating sets, |E| <= 6"});

  bool growth = true;
  {
    const std::vector<std::vector<int>> gens = {{1, 2, 3, 4, 5, 6, 0}, {6, 0, 1, 2, 3, 4, 5}};
    const OrbitSpreadResult r = orbit_spread(gens, 7, 6, 0);
    for (std::size_t i = 1; i < r.layer_sizes.size(); ++i) {
      if (r.layer_sizes[i] <= r.layer_sizes[i - 1] && r.layer_sizes[i] != 7) growth = false;
    }
  }
  out->push_back({"group.orbit_strict_growth", growth, "Z/7 with step generators"});

  std::mt19937_64 rng(505);
  bool abelian = true;
  for (int trial = 0; trial < 5 && abelian; ++trial) {
    std::uniform_real_distribution<double> unif(0.1, 3.0);
    Mat r1 = Mat::Identity(3, 3), r2 = Mat::Identity(3, 3);
    const double t1 = unif(rng), t2 = unif(rng);
    r1(0, 0) = std::cos(t1); r1(0, 1) = -std::sin(t1); r1(1, 0) = std::sin(t1); r1(1, 1) = std::cos(t1);
    r2(0, 0) = std::cos(t2); r2(0, 1) = -std::sin(t2); r2(1, 0) = std::sin(t2); r2(1, 1) = std::cos(t2);
    GeneratorSet s;
    s.elements = {ProjectiveMap::from_matrix(r1), ProjectiveMap::from_matrix(r2)};
    const NilpotencyVerdict verdict = nilpotency_witness(s, 4);
    if (verdict.kind != VerdictKind::Nilpotent || verdict.nilpotency_class != 1) {
      abelian = false;
    }
  }
  out->push_back({"group.abelian_class_one", abelian, "5 random rotation pairs"});

  GeneratorSet sanov = GeneratorSet::symmetrized(
      {ProjectiveMap::from_matrix((Mat(2, 2) << 1, 2, 0, 1).finished()),
       ProjectiveMap::from_matrix((Mat(2, 2) << 1, 0, 2, 1).finished())});
  const NilpotencyVerdict verdict = nilpotency_witness(sanov, 6);
  bool witness_ok = verdict.kind == VerdictKind::NotNilpotent && verdict.exact_path;
  if (witness_ok) {
    std::vector<exact::IntMat> gens;
    for (const ProjectiveMap& g : sanov.elements) gens.push_back(*exact::from_double(g.matrix()));
    witness_ok = !exact::is_scalar_identity(
        exact::evaluate_word(gens, verdict.witness_word, 2));
  }
  out->push_back({"group.sanov_exact_witness", witness_ok, "class bound 6"});

  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  bool gauge_ok = true;
  for (int trial = 0; trial < 50 && gauge_ok; ++trial) {
    const ProjectiveMap g1 = ProjectiveMap::from_matrix(random_map(rng, 3));
    const ProjectiveMap g2 = ProjectiveMap::from_matrix(random_map(rng, 3));
    const ProjectiveMap h = ProjectiveMap::from_matrix(random_map(rng, 3));
    const double base = proximity_gauge(g1, g2);
    if (proximity_gauge(g2, g1) != base) gauge_ok = false;
    if (std::abs(proximity_gauge(h * g1, h * g2) - base) > 1e-10 * std::max(1.0, base)) {
      gauge_ok = false;
    }
    if (proximity_gauge(g1, g1) > 1e-12) gauge_ok = false;
  }
  out->push_back({"group.gauge_left_invariant", gauge_ok, "50 random triples"});
}

inline void check_scan(std::vector<CheckResult>* out) {
  const char* text = R"({
    "schema": "hilbertlab/v1",
    "name": "verify-scan",
    "family": {"tag": "ellipsoid", "n": 2, "parameters": {"boost": 2.0}},
    "epsilon_grid": [0.1, 0.5, 2.0, 4.0],
    "depth": 3,
    "seed": 9
  })";
  const Scenario scenario = scenario_from_string(text);
  const ScanReport once = run_scenario(scenario);
  const ScanReport twice = run_scenario(scenario);
  const bool deterministic =
      report_to_json(once).dump(2) == report_to_json(twice).dump(2);
  out->push_back({"scan.determinism", deterministic, "byte-identical reports"});

  bool monotone = true;
  for (std::size_t i = 1; i < once.per_epsilon.size(); ++i) {
    if (once.per_epsilon[i].subgroup_size < once.per_epsilon[i - 1].subgroup_size) {
      monotone = false;
    }
  }
  out->push_back({"scan.epsilon_monotonicity", monotone, "subgroup sizes are nondecreasing"});

  bool round_trip = false;
  try {
    const Json j = report_to_json(once);
    round_trip = report_to_json(report_from_json(j)) == j;
  } catch (const Error&) {
  }
  out->push_back({"scan.report_round_trip", round_trip, "JSON serialize/parse"});
}

}  // namespace checks

/// Runs the named invariant group ("projective", "body", "metric",
/// "benzecri", "group", "scan") or all of them.
inline std::vector<CheckResult> verify_suite(const std::string& selector) {
  std::vector<CheckResult> results;
  const bool all = selector == "all" || selector.empty();
  if (all || selector == "projective") checks::check_projective(&results);
  if (all || selector == "body") checks::check_body(&results);
  if (all || selector == "metric") checks::check_metric(&results);
  if (all || selector == "benzecri") checks::check_benzecri(&results);
  if (all || selector == "group") checks::check_group(&results);
  if (all || selector == "scan") checks::check_scan(&results);
  if (results.empty()) throw SchemaError("unknown verify selector: " + selector);
  return results;
}

}  // namespace hilbertlab
