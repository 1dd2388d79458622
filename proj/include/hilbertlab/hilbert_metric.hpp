#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hilbertlab/convex_body.hpp"

namespace hilbertlab {

/// A Hilbert distance together with the chord endpoints that produced it.
struct HilbertDistanceValue {
  double value;
  ProjectivePoint a;
  ProjectivePoint b;
};

namespace detail {

/// Hilbert distance between the chord points at parameters s and t, where
/// the boundary sits at t_b < s,t < t_a on a projective parametrization of
/// the chord. This is half the log of the cross-ratio written directly in
/// the line parameter, so it is exact for any chart the chord lives in.
inline double chord_distance(double t_b, double t_a, double s, double t) {
  if (s == t) return 0.0;
  const double ratio = ((t_a - s) * (t - t_b)) / ((t_a - t) * (s - t_b));
  return 0.5 * std::abs(std::log(ratio));
}

}  // namespace detail

/// d_Omega(x, y) = 1/2 ln [a:b:x:y] with a, b the boundary points of the
/// chord through x and y, ordered b, x, y, a.
inline HilbertDistanceValue distance(const ConvexBody& body, const ProjectivePoint& x,
                                     const ProjectivePoint& y) {
  if (body.contains(x) != Location::Interior || body.contains(y) != Location::Interior) {
    throw PointOutsideBody("distance: both points must be interior");
  }
  if (x.approx_equal(y, 1e-12)) {
    return HilbertDistanceValue{0.0, x, y};
  }
  const ChordResult chord = body.chord_endpoints(x, y);
  const double value = detail::chord_distance(chord.t_b, chord.t_a, 0.0, 1.0);
  return HilbertDistanceValue{value, chord.a, chord.b};
}

/// How far the automorphism g moves x in the Hilbert metric.
inline double displacement(const ConvexBody& body, const ProjectiveMap& g,
                           const ProjectivePoint& x) {
  if (!is_automorphism(body, g)) {
    throw NotAnAutomorphism("displacement: map does not preserve the body");
  }
  if (body.contains(x) != Location::Interior) {
    throw PointOutsideBody("displacement: basepoint must be interior");
  }
  return distance(body, x, g(x)).value;
}

namespace detail {

/// Chart in which ball sampling happens: polytopes use their storage chart,
/// ellipsoids the standard chart when bounded there, otherwise the polar
/// chart of the center (always bounded).
inline AffineChart sampling_chart(const ConvexBody& body, const ProjectivePoint& center) {
  if (body.kind() == ConvexBody::Kind::Polytope) return body.chart();
  const int n = body.dim();
  if (body.bounded_in(AffineChart::standard(n))) return AffineChart::standard(n);
  Vec xi = body.form() * center.coords();
  return AffineChart::from_covector(xi / xi.dot(center.coords()));
}

inline std::vector<Vec> sample_directions(int n, int k) {
  std::vector<Vec> dirs;
  dirs.reserve(k);
  if (n == 2) {
    for (int i = 0; i < k; ++i) {
      const double theta = 2.0 * M_PI * i / k;
      Vec u(2);
      u << std::cos(theta), std::sin(theta);
      dirs.push_back(u);
    }
    return dirs;
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (static_cast<unsigned long long>(k) << 8 | n));
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(dirs.size()) < k) {
    Vec u(n);
    for (int i = 0; i < n; ++i) u[i] = gauss(rng);
    const double norm = u.norm();
    if (norm > 1e-6) dirs.push_back(u / norm);
  }
  return dirs;
}

}  // namespace detail

/// k points at Hilbert distance r from the center, one per chord direction,
/// located by bisection on the chord parameter (log-scaled near the
/// boundary so large radii stay resolvable).
inline std::vector<ProjectivePoint> ball_boundary_samples(const ConvexBody& body,
                                                          const ProjectivePoint& center,
                                                          double r, int k) {
  if (!(r > 0.0) || k < 3) {
    throw DegenerateConfiguration("ball sampling needs r > 0 and k >= 3");
  }
  if (body.contains(center) != Location::Interior) {
    throw PointOutsideBody("ball sampling center must be interior");
  }
  const AffineChart chart = detail::sampling_chart(body, center);
  const Vec w0 = chart.coords(center);
  std::vector<ProjectivePoint> out;
  out.reserve(k);
  for (const Vec& u : detail::sample_directions(body.dim(), k)) {
    const auto [t_minus, t_plus] = body.ray_parameters(chart, w0, u);
    // bisection on log(delta), delta = t_plus - t: d is decreasing in delta
    double lo = std::log(t_plus) - 2.0 * r - 30.0;
    double hi = std::log(t_plus) - 1e-14;
    auto dist_at = [&](double log_delta) {
      const double t = t_plus - std::exp(log_delta);
      return detail::chord_distance(t_minus, t_plus, 0.0, t);
    };
    while (dist_at(lo) < r) lo -= 20.0;
    for (int iter = 0; iter < 40 && hi - lo > 1e-13; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (dist_at(mid) >= r) lo = mid;
      else hi = mid;
    }
    const double t = t_plus - std::exp(0.5 * (lo + hi));
    out.push_back(chart.embed(w0 + t * u));
  }
  return out;
}

}  // namespace hilbertlab
