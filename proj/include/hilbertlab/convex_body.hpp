#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hilbertlab/projective.hpp"

namespace hilbertlab {

enum class Location { Interior, Boundary, Exterior };

/// Closed halfspace { w : normal . w <= offset } in some affine chart,
/// with unit normal.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// Solid affine ellipsoid { center + shape u : |u| <= 1 }, shape symmetric
/// positive definite.
struct AffineEllipsoid {
  Vec center;
  Mat shape;
};

/// Chord of a convex body through two interior points x, y. The boundary
/// points are ordered b, x, y, a along the chord; t_a and t_b are the
/// parameters of a and b on a projective parametrization of the line
/// with x at 0 and y at 1 (so t_b < 0 < 1 < t_a).
struct ChordResult {
  ProjectivePoint a;
  ProjectivePoint b;
  double t_a = 0.0;
  double t_b = 0.0;
};

namespace detail {

constexpr double kBoundaryBand = 1e-10;

inline double points_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const Vec& p : pts) s = std::max(s, p.lpNorm<Eigen::Infinity>());
  return s;
}

inline std::vector<Vec> dedup_points(const std::vector<Vec>& pts, double tol) {
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool seen = false;
    for (const Vec& q : out) {
      if ((p - q).lpNorm<Eigen::Infinity>() <= tol) { seen = true; break; }
    }
    if (!seen) out.push_back(p);
  }
  return out;
}

/// Jarvis march; returns hull vertex indices in counterclockwise order.
inline std::vector<int> gift_wrap_2d(const std::vector<Vec>& pts) {
  const int m = static_cast<int>(pts.size());
  if (m < 3) throw DegenerateBody("polygon needs at least 3 distinct vertices");
  const double scale = points_scale(pts);
  const double eps = 1e-12 * scale * scale;

  int start = 0;
  for (int i = 1; i < m; ++i) {
    if (pts[i][0] < pts[start][0] ||
        (pts[i][0] == pts[start][0] && pts[i][1] < pts[start][1])) {
      start = i;
    }
  }
  std::vector<int> hull;
  int current = start;
  do {
    hull.push_back(current);
    int next = (current + 1) % m;
    for (int c = 0; c < m; ++c) {
      if (c == current) continue;
      const Vec u = pts[next] - pts[current];
      const Vec v = pts[c] - pts[current];
      const double cross = u[0] * v[1] - u[1] * v[0];
      if (cross < -eps ||
          (std::abs(cross) <= eps && v.squaredNorm() > u.squaredNorm())) {
        next = c;
      }
    }
    current = next;
    if (hull.size() > pts.size() + 1) {
      throw DegenerateBody("gift wrapping failed to close the hull");
    }
  } while (current != start);
  if (hull.size() < 3) throw DegenerateBody("polygon vertices are collinear");
  return hull;
}

/// Outward hyperplane through n affinely independent points with the
/// reference point on the <= side.
inline bool facet_plane(const std::vector<Vec>& pts, const std::vector<int>& vs,
                        const Vec& ref, Vec* normal, double* offset) {
  const int n = static_cast<int>(pts[vs[0]].size());
  Mat diffs(n - 1, n);
  for (int i = 1; i < n; ++i) diffs.row(i - 1) = (pts[vs[i]] - pts[vs[0]]).transpose();
  Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeFullV);
  Vec nrm = svd.matrixV().col(n - 1);
  const Vec& s = svd.singularValues();
  if (n >= 2 && s.size() >= n - 1 && s[0] > 0.0 && s[n - 2] / s[0] < 1e-10) {
    return false;  // ridge points are affinely dependent
  }
  double off = nrm.dot(pts[vs[0]]);
  if (nrm.dot(ref) > off) { nrm = -nrm; off = -off; }
  *normal = nrm;
  *offset = off;
  return true;
}

struct HullFacet {
  std::vector<int> vs;
  Vec normal;
  double offset = 0.0;
  bool alive = true;
};

/// A covector strictly positive on every generator of a salient cone
/// (perceptron iteration; the generators must not span a non-salient cone).
inline Vec salient_cone_functional(const std::vector<Vec>& generators) {
  std::vector<Vec> gens;
  gens.reserve(generators.size());
  Vec xi = Vec::Zero(generators.front().size());
  for (const Vec& g : generators) {
    gens.push_back(g / g.norm());
    xi += gens.back();
  }
  for (int iter = 0; iter < 100000; ++iter) {
    int worst = -1;
    double margin = 1e-6 * xi.norm();
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const double s = xi.dot(gens[j]);
      if (s < margin) {
        margin = s;
        worst = static_cast<int>(j);
      }
    }
    if (worst < 0) return xi;
    xi += gens[worst];
  }
  throw DegenerateBody("no chart bounds the closure (cone is not salient)");
}

/// Incremental (beneath-beyond) convex hull with simplicial facets,
/// for dimensions 3 and 4.
inline std::vector<HullFacet> incremental_hull(const std::vector<Vec>& pts, int n) {
  const int m = static_cast<int>(pts.size());
  const double scale = points_scale(pts);
  const double eps = 1e-10 * scale;

  // greedy affinely independent seed simplex
  std::vector<int> seed{0};
  Mat basis(n, 0);
  while (static_cast<int>(seed.size()) <= n) {
    int best = -1;
    double best_dist = eps;
    for (int i = 0; i < m; ++i) {
      Vec d = pts[i] - pts[seed[0]];
      if (basis.cols() > 0) {
        d -= basis * (basis.transpose() * d);  // basis kept orthonormal
      }
      if (d.norm() > best_dist) { best_dist = d.norm(); best = i; }
    }
    if (best < 0) throw DegenerateBody("vertex set is not full-dimensional");
    seed.push_back(best);
    Vec d = pts[best] - pts[seed[0]];
    if (basis.cols() > 0) d -= basis * (basis.transpose() * d);
    basis.conservativeResize(n, basis.cols() + 1);
    basis.col(basis.cols() - 1) = d / d.norm();
  }

  Vec ref = Vec::Zero(n);
  for (int idx : seed) ref += pts[idx];
  ref /= static_cast<double>(seed.size());

  std::vector<HullFacet> facets;
  for (int omit = 0; omit <= n; ++omit) {
    HullFacet f;
    for (int i = 0; i <= n; ++i) {
      if (i != omit) f.vs.push_back(seed[i]);
    }
    if (!facet_plane(pts, f.vs, ref, &f.normal, &f.offset)) {
      throw DegenerateBody("degenerate seed simplex");
    }
    facets.push_back(std::move(f));
  }

  for (int p = 0; p < m; ++p) {
    if (std::find(seed.begin(), seed.end(), p) != seed.end()) continue;
    std::vector<int> visible;
    for (int fi = 0; fi < static_cast<int>(facets.size()); ++fi) {
      if (facets[fi].alive && facets[fi].normal.dot(pts[p]) > facets[fi].offset + eps) {
        visible.push_back(fi);
      }
    }
    if (visible.empty()) continue;

    // horizon ridges appear in exactly one visible facet
    std::map<std::vector<int>, int> ridge_count;
    for (int fi : visible) {
      const auto& vs = facets[fi].vs;
      for (size_t omit = 0; omit < vs.size(); ++omit) {
        std::vector<int> ridge;
        for (size_t i = 0; i < vs.size(); ++i) {
          if (i != omit) ridge.push_back(vs[i]);
        }
        std::sort(ridge.begin(), ridge.end());
        ridge_count[ridge] += 1;
      }
    }
    for (int fi : visible) facets[fi].alive = false;
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      HullFacet f;
      f.vs = ridge;
      f.vs.push_back(p);
      if (!facet_plane(pts, f.vs, ref, &f.normal, &f.offset)) continue;
      facets.push_back(std::move(f));
    }
  }

  std::vector<HullFacet> alive;
  for (auto& f : facets) {
    if (f.alive) alive.push_back(std::move(f));
  }
  return alive;
}

}  // namespace detail

/// A properly convex open subset of projective n-space. Polytopes are
/// stored by vertices + irredundant facets in a chart where the body is
/// bounded, together with the simplicial boundary used for exact moment
/// integration. Ellipsoids are stored chart-free by the homogeneous form Q
/// of signature (n,1) with interior { [v] : v^T Q v < 0 }.
class ConvexBody {
 public:
  enum class Kind { Polytope, Ellipsoid };

  static ConvexBody from_vertices(int n, const std::vector<Vec>& pts,
                                  std::optional<AffineChart> chart = std::nullopt) {
    check_dimension(n);
    ConvexBody body(Kind::Polytope, n, chart ? *chart : AffineChart::standard(n));
    body.build_from_points(pts);
    return body;
  }

  static ConvexBody from_halfspaces(int n, std::vector<Halfspace> halves,
                                    std::optional<AffineChart> chart = std::nullopt) {
    check_dimension(n);
    ConvexBody body(Kind::Polytope, n, chart ? *chart : AffineChart::standard(n));
    body.build_from_halfspaces(std::move(halves));
    return body;
  }

  static ConvexBody ellipsoid(const Mat& q_raw) {
    const int n = static_cast<int>(q_raw.rows()) - 1;
    check_dimension(n);
    if (q_raw.rows() != q_raw.cols()) throw InvalidMatrix("ellipsoid form must be square");
    Mat q = 0.5 * (q_raw + q_raw.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(q);
    const Vec& ev = es.eigenvalues();
    const double tol = 1e-12 * ev.cwiseAbs().maxCoeff();
    int pos = 0, neg = 0;
    for (int i = 0; i <= n; ++i) {
      if (ev[i] > tol) ++pos;
      else if (ev[i] < -tol) ++neg;
    }
    if (pos == 1 && neg == n) { q = -q; std::swap(pos, neg); }
    if (pos != n || neg != 1) {
      throw DegenerateBody("ellipsoid form must have signature (n,1)");
    }
    ConvexBody body(Kind::Ellipsoid, n, AffineChart::standard(n));
    body.form_ = q * (std::sqrt(static_cast<double>(n + 1)) / q.norm());
    body.properly_convex_ = true;
    body.degenerate_ = false;
    return body;
  }

  /// Unit ball in the standard chart: q(v) = v_1^2 + ... + v_n^2 - v_{n+1}^2.
  static ConvexBody unit_ball(int n) {
    Mat q = Mat::Identity(n + 1, n + 1);
    q(n, n) = -1.0;
    return ellipsoid(q);
  }

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  const AffineChart& chart() const { return chart_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<std::vector<int>>& boundary_simplices() const { return boundary_simplices_; }
  const Mat& form() const { return form_; }
  bool degenerate() const { return degenerate_; }

  /// Classification with a boundary band of width 1e-10 in the coordinates
  /// of the chart where the body is stored.
  Location contains(const ProjectivePoint& p) const {
    if (p.dim() != n_) throw DegenerateConfiguration("contains: dimension mismatch");
    if (kind_ == Kind::Ellipsoid) {
      const double val = p.coords().dot(form_ * p.coords());
      const double band = detail::kBoundaryBand * form_.norm();
      if (val < -band) return Location::Interior;
      if (val > band) return Location::Exterior;
      return Location::Boundary;
    }
    if (!chart_.contains(p)) {
      return homogeneous_locate(p);
    }
    const Vec w = chart_.coords(p);
    double worst = -std::numeric_limits<double>::infinity();
    for (const Halfspace& h : facets_) {
      worst = std::max(worst, h.normal.dot(w) - h.offset);
    }
    if (worst < -detail::kBoundaryBand) return Location::Interior;
    if (worst > detail::kBoundaryBand) return Location::Exterior;
    return Location::Boundary;
  }

  /// Chord through interior points x and y, boundary points ordered b, x, y, a.
  ChordResult chord_endpoints(const ProjectivePoint& x, const ProjectivePoint& y) const {
    if (x.approx_equal(y, 1e-12)) {
      throw DegenerateConfiguration("chord_endpoints: x = y");
    }
    if (contains(x) != Location::Interior || contains(y) != Location::Interior) {
      throw PointOutsideBody("chord_endpoints: both points must be interior");
    }
    if (kind_ == Kind::Ellipsoid) return ellipsoid_chord(x, y);
    const Vec wx = chart_.coords(x);
    const Vec wy = chart_.coords(y);
    const auto [t_minus, t_plus] = clip_ray(wx, wy - wx);
    return ChordResult{chart_.embed(wx + t_plus * (wy - wx)),
                       chart_.embed(wx + t_minus * (wy - wx)), t_plus, t_minus};
  }

  /// Parameters (t_minus, t_plus) of the boundary along { w0 + t u } in
  /// the given chart, with w0 interior. For ellipsoids any chart works;
  /// polytopes use their storage chart.
  std::pair<double, double> ray_parameters(const AffineChart& chart, const Vec& w0,
                                           const Vec& u) const {
    if (kind_ == Kind::Polytope) return clip_ray(w0, u);
    const Mat qc = chart.inverse_matrix().transpose() * form_ * chart.inverse_matrix();
    const Mat a = qc.topLeftCorner(n_, n_);
    const Vec b = qc.topRightCorner(n_, 1);
    const double c = qc(n_, n_);
    const double qa = u.dot(a * u);
    const double qb = 2.0 * (u.dot(a * w0) + b.dot(u));
    const double qc0 = w0.dot(a * w0) + 2.0 * b.dot(w0) + c;
    const double disc = qb * qb - 4.0 * qa * qc0;
    if (!(qa > 0.0) || !(disc > 0.0)) {
      throw UnboundedInChart("ellipsoid chord does not stay in this chart");
    }
    const double root = std::sqrt(disc);
    // stable quadratic roots
    const double q = -0.5 * (qb + (qb >= 0.0 ? root : -root));
    double t1 = q / qa;
    double t2 = qc0 / q;
    if (t1 > t2) std::swap(t1, t2);
    return {t1, t2};
  }

  /// True iff some affine chart contains the closure: ellipsoids always
  /// (signature enforced at construction); polytopes when full-dimensional
  /// with trivial lineality.
  bool is_properly_convex() const {
    if (degenerate_) throw DegenerateBody("body has empty interior");
    if (kind_ == Kind::Ellipsoid) return true;
    return properly_convex_;
  }

  /// A point in the interior (affine coordinates of the storage chart for
  /// polytopes; the projective center for ellipsoids).
  ProjectivePoint interior_point() const {
    if (degenerate_) throw DegenerateBody("body has empty interior");
    if (kind_ == Kind::Polytope) return chart_.embed(interior_point_);
    Eigen::SelfAdjointEigenSolver<Mat> es(form_);
    int weakest = 0;
    es.eigenvalues().minCoeff(&weakest);
    return ProjectivePoint(es.eigenvectors().col(weakest));
  }

  /// Whether the closure of the body avoids the chart's hyperplane at
  /// infinity.
  bool bounded_in(const AffineChart& chart) const {
    if (kind_ == Kind::Ellipsoid) {
      const Vec xi = chart.infinity_covector();
      Eigen::LDLT<Mat> ldlt(form_);
      const Vec qinv_xi = ldlt.solve(xi);
      return xi.dot(qinv_xi) < -1e-12 * xi.squaredNorm();
    }
    if (degenerate_ || !properly_convex_) return false;
    const Vec xi = chart.infinity_covector();
    int sign = 0;
    for (const Vec& w : vertices_) {
      const Vec lift = chart_.lift(w);
      const double s = xi.dot(lift);
      if (std::abs(s) <= 1e-12 * lift.norm() * xi.norm()) return false;
      const int si = s > 0.0 ? 1 : -1;
      if (sign == 0) sign = si;
      else if (si != sign) return false;
    }
    return sign != 0;
  }

  /// Vertex coordinates in the given chart; throws when the body is not
  /// bounded there.
  std::vector<Vec> vertices_in(const AffineChart& chart) const {
    if (kind_ != Kind::Polytope) throw DegenerateConfiguration("vertices_in: polytope only");
    if (!bounded_in(chart)) throw UnboundedInChart("polytope not bounded in chart");
    std::vector<Vec> out;
    out.reserve(vertices_.size());
    for (const Vec& w : vertices_) {
      out.push_back(chart.coords(chart_.embed(w)));
    }
    return out;
  }

  /// Bounded affine form { center + shape u : |u| <= 1 } of an ellipsoid in
  /// a chart; throws UnboundedInChart otherwise.
  AffineEllipsoid affine_form(const AffineChart& chart) const {
    if (kind_ != Kind::Ellipsoid) throw DegenerateConfiguration("affine_form: ellipsoid only");
    const Mat qc = chart.inverse_matrix().transpose() * form_ * chart.inverse_matrix();
    const Mat a = qc.topLeftCorner(n_, n_);
    const Vec b = qc.topRightCorner(n_, 1);
    const double c = qc(n_, n_);
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff()) {
      throw UnboundedInChart("ellipsoid not bounded in chart");
    }
    const Vec center = -a.ldlt().solve(b);
    const double gamma = c + b.dot(center);
    if (!(gamma < 0.0)) throw DegenerateBody("ellipsoid affine form is empty");
    const Mat e = a / (-gamma);
    Eigen::SelfAdjointEigenSolver<Mat> es2(e);
    const Mat shape = es2.operatorInverseSqrt();
    return AffineEllipsoid{center, 0.5 * (shape + shape.transpose())};
  }

  /// Axis-aligned bounding box (lo, hi) in a chart where the body is bounded.
  std::pair<Vec, Vec> bounding_box(const AffineChart& chart) const {
    if (kind_ == Kind::Polytope) {
      const std::vector<Vec> vs = vertices_in(chart);
      Vec lo = vs.front(), hi = vs.front();
      for (const Vec& v : vs) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
      return {lo, hi};
    }
    const AffineEllipsoid e = affine_form(chart);
    const Mat sq = e.shape * e.shape;
    Vec half(n_);
    for (int i = 0; i < n_; ++i) half[i] = std::sqrt(std::max(0.0, sq(i, i)));
    return {e.center - half, e.center + half};
  }

  /// Homogeneous facet covectors l with l . v <= 0 on the canonical cone
  /// lifts of the body (polytopes only).
  std::vector<Vec> homogeneous_facets() const {
    std::vector<Vec> out;
    const int n = n_;
    for (const Halfspace& h : facets_) {
      Vec l(n + 1);
      l.head(n) = h.normal;
      l[n] = -h.offset;
      out.push_back(chart_.matrix().transpose() * l);
    }
    return out;
  }

 private:
  ConvexBody(Kind kind, int n, AffineChart chart)
      : kind_(kind), n_(n), chart_(std::move(chart)) {}

  static void check_dimension(int n) {
    if (n < 2) throw UnsupportedDimension("bodies require n >= 2");
    if (n > 4) throw UnsupportedDimension("desk-scale experiments live in n <= 4");
  }

  Location homogeneous_locate(const ProjectivePoint& p) const {
    // point at infinity of the storage chart; bounded bodies exclude it
    if (properly_convex_ && !vertices_.empty()) return Location::Exterior;
    const std::vector<Vec> ls = homogeneous_facets();
    for (int sign : {1, -1}) {
      double worst = -std::numeric_limits<double>::infinity();
      for (const Vec& l : ls) {
        worst = std::max(worst, sign * l.dot(p.coords()) / l.norm());
      }
      if (worst <= detail::kBoundaryBand) {
        return worst < -detail::kBoundaryBand ? Location::Interior : Location::Boundary;
      }
    }
    return Location::Exterior;
  }

  std::pair<double, double> clip_ray(const Vec& w0, const Vec& u) const {
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (const Halfspace& h : facets_) {
      const double alpha = h.normal.dot(u);
      const double beta = h.offset - h.normal.dot(w0);
      if (std::abs(alpha) <= 1e-15 * u.norm()) continue;
      const double t = beta / alpha;
      if (alpha > 0.0) t_hi = std::min(t_hi, t);
      else t_lo = std::max(t_lo, t);
    }
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) {
      throw UnboundedInChart("chord leaves the storage chart");
    }
    return {t_lo, t_hi};
  }

  ChordResult ellipsoid_chord(const ProjectivePoint& x, const ProjectivePoint& y) const {
    // hyperboloid-normalized representatives: q = -1 on the same cone
    // component, so the direction y - x is spacelike for distinct points
    Vec xv = x.coords() / std::sqrt(-x.coords().dot(form_ * x.coords()));
    Vec yv = y.coords() / std::sqrt(-y.coords().dot(form_ * y.coords()));
    if (xv.dot(form_ * yv) > 0.0) yv = -yv;
    const Vec u = yv - xv;
    const double qa = u.dot(form_ * u);
    const double qb = 2.0 * xv.dot(form_ * u);
    const double qc = xv.dot(form_ * xv);
    const double disc = qb * qb - 4.0 * qa * qc;
    if (!(qa > 0.0) || !(disc > 0.0)) {
      throw DegenerateConfiguration("ellipsoid chord is degenerate");
    }
    const double root = std::sqrt(disc);
    const double q = -0.5 * (qb + (qb >= 0.0 ? root : -root));
    double t1 = q / qa;
    double t2 = qc / q;
    if (t1 > t2) std::swap(t1, t2);
    return ChordResult{ProjectivePoint(xv + t2 * u), ProjectivePoint(xv + t1 * u), t2, t1};
  }

  void build_from_points(const std::vector<Vec>& raw) {
    for (const Vec& p : raw) {
      if (static_cast<int>(p.size()) != n_) {
        throw DegenerateConfiguration("vertex dimension mismatch");
      }
    }
    const double scale = detail::points_scale(raw);
    std::vector<Vec> pts = detail::dedup_points(raw, 1e-12 * scale);
    if (static_cast<int>(pts.size()) < n_ + 1) {
      degenerate_ = true;
      return;
    }
    if (n_ == 2) {
      std::vector<int> ring;
      try {
        ring = detail::gift_wrap_2d(pts);
      } catch (const DegenerateBody&) {
        degenerate_ = true;
        return;
      }
      std::vector<Vec> hull_pts;
      for (int idx : ring) hull_pts.push_back(pts[idx]);
      vertices_ = hull_pts;
      const int k = static_cast<int>(hull_pts.size());
      Vec ref = Vec::Zero(2);
      for (const Vec& v : hull_pts) ref += v;
      ref /= static_cast<double>(k);
      for (int i = 0; i < k; ++i) {
        boundary_simplices_.push_back({i, (i + 1) % k});
        Vec normal;
        double offset;
        std::vector<int> vs{i, (i + 1) % k};
        if (!detail::facet_plane(vertices_, vs, ref, &normal, &offset)) {
          degenerate_ = true;
          return;
        }
        facets_.push_back(Halfspace{normal, offset});
      }
      interior_point_ = ref;
    } else {
      std::vector<detail::HullFacet> hull;
      try {
        hull = detail::incremental_hull(pts, n_);
      } catch (const DegenerateBody&) {
        degenerate_ = true;
        return;
      }
      std::vector<int> used(pts.size(), -1);
      for (const auto& f : hull) {
        for (int v : f.vs) used[v] = 0;
      }
      int next = 0;
      for (size_t i = 0; i < pts.size(); ++i) {
        if (used[i] == 0) {
          used[i] = next++;
          vertices_.push_back(pts[i]);
        }
      }
      for (const auto& f : hull) {
        std::vector<int> simplex;
        for (int v : f.vs) simplex.push_back(used[v]);
        boundary_simplices_.push_back(simplex);
        bool dup = false;
        for (const Halfspace& h : facets_) {
          if ((h.normal - f.normal).norm() <= 1e-9 && std::abs(h.offset - f.offset) <= 1e-9) {
            dup = true;
            break;
          }
        }
        if (!dup) facets_.push_back(Halfspace{f.normal, f.offset});
      }
      Vec ref = Vec::Zero(n_);
      for (const Vec& v : vertices_) ref += v;
      ref /= static_cast<double>(vertices_.size());
      interior_point_ = ref;
    }
    properly_convex_ = true;
    degenerate_ = false;
    normalize_facets();
  }

  void normalize_facets() {
    for (Halfspace& h : facets_) {
      const double norm = h.normal.norm();
      h.normal /= norm;
      h.offset /= norm;
    }
  }

  void build_from_halfspaces(std::vector<Halfspace> halves) {
    if (halves.empty()) throw DegenerateBody("empty halfspace list");
    Mat normals(halves.size(), n_);
    for (size_t i = 0; i < halves.size(); ++i) {
      if (static_cast<int>(halves[i].normal.size()) != n_) {
        throw DegenerateConfiguration("halfspace dimension mismatch");
      }
      const double norm = halves[i].normal.norm();
      if (!(norm > 0.0)) throw DegenerateConfiguration("zero halfspace normal");
      halves[i].normal /= norm;
      halves[i].offset /= norm;
      normals.row(i) = halves[i].normal.transpose();
    }
    facets_ = halves;

    Eigen::JacobiSVD<Mat> svd(normals);
    const Vec& sv = svd.singularValues();
    const int rank = (sv.array() > 1e-10 * sv[0]).count();
    if (rank < n_) {
      // nontrivial lineality: the body contains a full affine line
      properly_convex_ = false;
      degenerate_ = !facet_probe_has_interior();
      return;
    }

    std::vector<Vec> verts;
    std::vector<Vec> rays;
    enumerate_vertices_and_rays(&verts, &rays);
    if (verts.empty()) {
      properly_convex_ = false;
      degenerate_ = true;
      return;
    }

    if (rays.empty()) {
      std::vector<Halfspace> given = std::move(facets_);
      facets_.clear();
      build_from_points(verts);
      if (degenerate_) facets_ = std::move(given);
      return;
    }

    // pointed unbounded polyhedron: rebase to a chart bounding the closure,
    // strictly positive on the lifted vertices and recession rays
    std::vector<Vec> cone_gens;
    for (const Vec& v : verts) cone_gens.push_back(chart_.lift(v));
    for (const Vec& d : rays) {
      Vec lift_dir(n_ + 1);
      lift_dir.head(n_) = d;
      lift_dir[n_] = 0.0;
      cone_gens.push_back(chart_.inverse_matrix() * lift_dir);
    }
    Vec xi;
    try {
      xi = detail::salient_cone_functional(cone_gens);
    } catch (const DegenerateBody&) {
      properly_convex_ = false;
      degenerate_ = false;
      return;
    }
    const AffineChart bounded = AffineChart::from_covector(xi);
    std::vector<Vec> mapped;
    for (const Vec& g : cone_gens) {
      mapped.push_back(bounded.coords(ProjectivePoint(g)));
    }
    chart_ = bounded;
    facets_.clear();
    build_from_points(mapped);
  }

  bool facet_probe_has_interior() const {
    Mat a(facets_.size(), n_);
    Vec b(facets_.size());
    for (size_t i = 0; i < facets_.size(); ++i) {
      a.row(i) = facets_[i].normal.transpose();
      b[i] = facets_[i].offset - 1.0;
    }
    const Vec w = a.colPivHouseholderQr().solve(b);
    for (size_t i = 0; i < facets_.size(); ++i) {
      if (facets_[i].normal.dot(w) - facets_[i].offset >= -1e-9) return false;
    }
    return true;
  }

  void enumerate_vertices_and_rays(std::vector<Vec>* verts, std::vector<Vec>* rays) const {
    const int m = static_cast<int>(facets_.size());
    double scale = 1.0;
    for (const Halfspace& h : facets_) scale = std::max(scale, std::abs(h.offset));
    const double tol = 1e-9 * scale;

    std::vector<int> combo(n_);
    std::function<void(int, int)> recurse = [&](int start, int depth) {
      if (depth == n_) {
        Mat a(n_, n_);
        Vec b(n_);
        for (int i = 0; i < n_; ++i) {
          a.row(i) = facets_[combo[i]].normal.transpose();
          b[i] = facets_[combo[i]].offset;
        }
        Eigen::FullPivLU<Mat> lu(a);
        if (!lu.isInvertible()) return;
        const Vec w = lu.solve(b);
        if (w.lpNorm<Eigen::Infinity>() > 1e12) return;
        for (const Halfspace& h : facets_) {
          if (h.normal.dot(w) - h.offset > tol) return;
        }
        for (const Vec& v : *verts) {
          if ((v - w).lpNorm<Eigen::Infinity>() <= 1e-8 * scale) return;
        }
        verts->push_back(w);
        return;
      }
      for (int i = start; i < m; ++i) {
        combo[depth] = i;
        recurse(i + 1, depth + 1);
      }
    };
    recurse(0, 0);

    // extreme rays from (n-1)-subsets of facet normals
    std::vector<int> rcombo(n_ - 1);
    std::function<void(int, int)> recurse_rays = [&](int start, int depth) {
      if (depth == n_ - 1) {
        Mat a(n_ - 1, n_);
        for (int i = 0; i < n_ - 1; ++i) a.row(i) = facets_[rcombo[i]].normal.transpose();
        Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
        const Vec& sv = svd.singularValues();
        if (n_ >= 2 && sv.size() >= n_ - 1 && sv[n_ - 2] <= 1e-10 * std::max(1.0, sv[0])) {
          return;  // normals dependent; nullspace not one-dimensional
        }
        Vec d = svd.matrixV().col(n_ - 1);
        for (int sign : {1, -1}) {
          const Vec dir = sign * d;
          bool recession = true;
          for (const Halfspace& h : facets_) {
            if (h.normal.dot(dir) > 1e-10) { recession = false; break; }
          }
          if (!recession) continue;
          bool dup = false;
          for (const Vec& r : *rays) {
            if ((r - dir).lpNorm<Eigen::Infinity>() <= 1e-8) { dup = true; break; }
          }
          if (!dup) rays->push_back(dir);
        }
        return;
      }
      for (int i = start; i < m; ++i) {
        rcombo[depth] = i;
        recurse_rays(i + 1, depth + 1);
      }
    };
    if (n_ >= 2) recurse_rays(0, 0);
  }

  Kind kind_;
  int n_;
  AffineChart chart_;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<std::vector<int>> boundary_simplices_;
  Vec interior_point_;
  Mat form_;
  bool properly_convex_ = false;
  bool degenerate_ = true;
};

inline Location contains(const ConvexBody& body, const ProjectivePoint& p) {
  return body.contains(p);
}

inline ChordResult chord_endpoints(const ConvexBody& body, const ProjectivePoint& x,
                                   const ProjectivePoint& y) {
  return body.chord_endpoints(x, y);
}

inline bool is_properly_convex(const ConvexBody& body) { return body.is_properly_convex(); }

/// A marked convex body (Omega, x) with x interior to Omega.
struct MarkedBody {
  ConvexBody body;
  ProjectivePoint basepoint;

  MarkedBody(ConvexBody b, ProjectivePoint x)
      : body(std::move(b)), basepoint(std::move(x)) {
    if (body.contains(basepoint) != Location::Interior) {
      throw PointOutsideBody("marked body basepoint must be interior");
    }
  }
};

/// g Omega = Omega, within tolerance: ellipsoids via g^T Q g proportional
/// to Q after Frobenius scale matching, polytopes via the image vertex set
/// matching the vertex set as projective points.
inline bool is_automorphism(const ConvexBody& body, const ProjectiveMap& g,
                            double tol = 1e-9) {
  if (g.dim() != body.dim()) throw InvalidMatrix("is_automorphism: dimension mismatch");
  if (body.kind() == ConvexBody::Kind::Ellipsoid) {
    const Mat s = g.matrix().transpose() * body.form() * g.matrix();
    const double lambda = (s.array() * body.form().array()).sum() / body.form().squaredNorm();
    return (s - lambda * body.form()).norm() <= tol * s.norm();
  }
  if (body.degenerate()) throw DegenerateBody("is_automorphism: degenerate body");
  const auto& verts = body.vertices();
  if (verts.empty()) throw DegenerateBody("is_automorphism: body has no vertex description");
  std::vector<ProjectivePoint> targets;
  targets.reserve(verts.size());
  for (const Vec& w : verts) targets.push_back(body.chart().embed(w));
  std::vector<bool> used(targets.size(), false);
  for (const Vec& w : verts) {
    const ProjectivePoint image = g(body.chart().embed(w));
    bool matched = false;
    for (size_t j = 0; j < targets.size(); ++j) {
      if (!used[j] && image.approx_equal(targets[j], tol)) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

/// Image of a body under a projective map, restored to a chart where the
/// image is bounded (the standard chart when possible).
inline ConvexBody transform_body(const ConvexBody& body, const ProjectiveMap& g) {
  if (body.kind() == ConvexBody::Kind::Ellipsoid) {
    const Mat ginv = g.inverse().matrix();
    return ConvexBody::ellipsoid(ginv.transpose() * body.form() * ginv);
  }
  if (body.degenerate() || !body.is_properly_convex()) {
    throw DegenerateBody("transform_body: polytope must be properly convex");
  }
  const int n = body.dim();
  std::vector<ProjectivePoint> images;
  for (const Vec& w : body.vertices()) {
    images.push_back(g(body.chart().embed(w)));
  }
  const ProjectivePoint p_img = g(body.interior_point());

  // facet covectors of the image, signed so the image interior is on <= 0
  const Mat ginv = g.inverse().matrix();
  std::vector<Vec> ls;
  for (const Vec& l : body.homogeneous_facets()) {
    Vec li = ginv.transpose() * l;
    if (li.dot(p_img.coords()) > 0.0) li = -li;
    ls.push_back(li / li.norm());
  }
  Vec xi = Vec::Zero(n + 1);
  for (const Vec& l : ls) xi -= l;

  const AffineChart std_chart = AffineChart::standard(n);
  bool standard_ok = true;
  int sign = 0;
  for (const ProjectivePoint& q : images) {
    const double s = q.coords()[n];
    if (std::abs(s) <= 1e-9) { standard_ok = false; break; }
    const double feas = xi.dot(q.coords());
    const int si = (s > 0.0) == (feas > 0.0) ? 1 : -1;
    if (sign == 0) sign = si;
    else if (si != sign) { standard_ok = false; break; }
  }
  const AffineChart target = standard_ok ? std_chart : AffineChart::from_covector(xi);
  std::vector<Vec> pts;
  pts.reserve(images.size());
  for (const ProjectivePoint& q : images) pts.push_back(target.coords(q));
  return ConvexBody::from_vertices(n, pts, target);
}

inline MarkedBody transform_marked(const MarkedBody& mb, const ProjectiveMap& g) {
  return MarkedBody(transform_body(mb.body, g), g(mb.basepoint));
}

/// A body together with known automorphism generators.
struct BodyFamily {
  ConvexBody body;
  std::vector<ProjectiveMap> automorphism_generators;
  std::string tag;
};

/// Parameters for the built-in families.
struct FamilyParams {
  double boost = 0.0;       // ellipsoid: hyperbolic boost parameter per axis
  double rotation = 0.0;    // ellipsoid: rotation angle in the (0,1) plane
  std::vector<double> diagonal;        // simplex: positive diagonal entries
  bool permutations = false;           // simplex: include coordinate permutations
  int sides = 0;                       // polygon: vertex count (regular polygon)
  std::vector<std::string> symmetries; // polygon: "rotation", "reflection"
};

namespace detail {

inline Mat boost_matrix(int n, int axis, double t) {
  Mat m = Mat::Identity(n + 1, n + 1);
  m(axis, axis) = std::cosh(t);
  m(axis, n) = std::sinh(t);
  m(n, axis) = std::sinh(t);
  m(n, n) = std::cosh(t);
  return m;
}

inline Mat plane_rotation(int size, int i, int j, double theta) {
  Mat m = Mat::Identity(size, size);
  m(i, i) = std::cos(theta);
  m(j, j) = std::cos(theta);
  m(i, j) = -std::sin(theta);
  m(j, i) = std::sin(theta);
  return m;
}

}  // namespace detail

inline BodyFamily make_family(const std::string& tag, int n, const FamilyParams& params) {
  if (n < 2) throw UnsupportedDimension("families require n >= 2");
  if (tag == "ellipsoid") {
    BodyFamily family{ConvexBody::unit_ball(n), {}, tag};
    if (params.boost != 0.0) {
      for (int axis = 0; axis < n; ++axis) {
        family.automorphism_generators.push_back(
            ProjectiveMap::from_matrix(detail::boost_matrix(n, axis, params.boost)));
      }
    }
    if (params.rotation != 0.0) {
      family.automorphism_generators.push_back(
          ProjectiveMap::from_matrix(detail::plane_rotation(n + 1, 0, 1, params.rotation)));
    }
    return family;
  }
  if (tag == "simplex") {
    // projective simplex { [v] : v_i > 0 }, bounded in the all-ones chart
    const AffineChart chart = AffineChart::from_covector(Vec::Ones(n + 1));
    std::vector<Vec> pts;
    for (int i = 0; i <= n; ++i) {
      Vec e = Vec::Zero(n + 1);
      e[i] = 1.0;
      pts.push_back(chart.coords(ProjectivePoint(e)));
    }
    BodyFamily family{ConvexBody::from_vertices(n, pts, chart), {}, tag};
    if (!params.diagonal.empty()) {
      if (static_cast<int>(params.diagonal.size()) != n + 1) {
        throw UnsupportedFamily("simplex diagonal needs n+1 entries");
      }
      Vec d(n + 1);
      for (int i = 0; i <= n; ++i) {
        if (!(params.diagonal[i] > 0.0)) {
          throw UnsupportedFamily("simplex diagonal entries must be positive");
        }
        d[i] = params.diagonal[i];
      }
      family.automorphism_generators.push_back(ProjectiveMap::from_matrix(Mat(d.asDiagonal())));
    }
    if (params.permutations) {
      Mat cycle = Mat::Zero(n + 1, n + 1);
      for (int i = 0; i <= n; ++i) cycle((i + 1) % (n + 1), i) = 1.0;
      Mat swap = Mat::Identity(n + 1, n + 1);
      swap(0, 0) = swap(1, 1) = 0.0;
      swap(0, 1) = swap(1, 0) = 1.0;
      family.automorphism_generators.push_back(ProjectiveMap::from_matrix(cycle));
      family.automorphism_generators.push_back(ProjectiveMap::from_matrix(swap));
    }
    return family;
  }
  if (tag == "polygon") {
    if (n != 2) throw UnsupportedFamily("polygon family is two-dimensional");
    const int k = params.sides >= 3 ? params.sides : 5;
    std::vector<Vec> pts;
    for (int i = 0; i < k; ++i) {
      const double theta = 2.0 * M_PI * i / k;
      Vec v(2);
      v << std::cos(theta), std::sin(theta);
      pts.push_back(v);
    }
    BodyFamily family{ConvexBody::from_vertices(2, pts), {}, tag};
    for (const std::string& sym : params.symmetries) {
      if (sym == "rotation") {
        family.automorphism_generators.push_back(
            ProjectiveMap::from_matrix(detail::plane_rotation(3, 0, 1, 2.0 * M_PI / k)));
      } else if (sym == "reflection") {
        Mat m = Mat::Identity(3, 3);
        m(1, 1) = -1.0;
        family.automorphism_generators.push_back(ProjectiveMap::from_matrix(m));
      } else {
        throw UnsupportedFamily("unknown polygon symmetry: " + sym);
      }
    }
    if (family.automorphism_generators.empty()) {
      family.automorphism_generators.push_back(ProjectiveMap::identity(2));
    }
    return family;
  }
  throw UnsupportedFamily("unknown family tag: " + tag);
}

}  // namespace hilbertlab
