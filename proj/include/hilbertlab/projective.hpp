#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hilbertlab/errors.hpp"

namespace hilbertlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A point of real projective n-space, stored as a homogeneous
/// (n+1)-vector normalized to unit Euclidean norm with the first
/// entry of magnitude above the normalization floor made positive.
class ProjectivePoint {
 public:
  static constexpr double kNormalizationFloor = 1e-12;

  explicit ProjectivePoint(const Vec& raw) : coords_(raw) {
    const double norm = coords_.norm();
    if (!(norm > 0.0) || !coords_.allFinite()) {
      throw DegenerateConfiguration("projective point needs a nonzero finite vector");
    }
    coords_ /= norm;
    for (Eigen::Index i = 0; i < coords_.size(); ++i) {
      if (std::abs(coords_[i]) > kNormalizationFloor) {
        if (coords_[i] < 0.0) coords_ = -coords_;
        break;
      }
    }
  }

  /// Lift of an affine point of the standard chart: (w, 1).
  static ProjectivePoint from_affine(const Vec& w) {
    Vec v(w.size() + 1);
    v.head(w.size()) = w;
    v[w.size()] = 1.0;
    return ProjectivePoint(v);
  }

  const Vec& coords() const { return coords_; }

  /// Projective dimension n (ambient space has n+1 homogeneous coordinates).
  int dim() const { return static_cast<int>(coords_.size()) - 1; }

  bool approx_equal(const ProjectivePoint& other, double tol = 1e-9) const {
    if (coords_.size() != other.coords_.size()) return false;
    return (coords_ - other.coords_).norm() <= tol ||
           (coords_ + other.coords_).norm() <= tol;
  }

 private:
  Vec coords_;
};

/// An affine chart of projective n-space, given by an invertible
/// (n+1)x(n+1) matrix C whose last row is the covector of the
/// hyperplane at infinity. A point [v] lands at the affine coordinates
/// (Cv)_1/(Cv)_{n+1}, ..., (Cv)_n/(Cv)_{n+1}.
class AffineChart {
 public:
  static AffineChart standard(int n) {
    return AffineChart(Mat::Identity(n + 1, n + 1));
  }

  /// Chart whose hyperplane at infinity is { v : v_axis = 0 }.
  static AffineChart coordinate(int n, int axis) {
    Mat c = Mat::Zero(n + 1, n + 1);
    int row = 0;
    for (int i = 0; i <= n; ++i) {
      if (i == axis) continue;
      c(row++, i) = 1.0;
    }
    c(n, axis) = 1.0;
    return AffineChart(c);
  }

  /// Chart with infinity covector xi; the first n coordinate rows are an
  /// orthonormal basis of the complement of xi.
  static AffineChart from_covector(const Vec& xi) {
    const int n = static_cast<int>(xi.size()) - 1;
    if (!(xi.norm() > 0.0) || !xi.allFinite()) {
      throw DegenerateConfiguration("chart covector must be nonzero and finite");
    }
    Eigen::HouseholderQR<Mat> qr(xi);
    Mat q = qr.householderQ();  // first column is xi / ||xi||
    Mat c(n + 1, n + 1);
    for (int i = 0; i < n; ++i) c.row(i) = q.col(i + 1).transpose();
    c.row(n) = xi.transpose();
    return AffineChart(c);
  }

  static AffineChart from_matrix(const Mat& c) { return AffineChart(c); }

  int dim() const { return static_cast<int>(matrix_.rows()) - 1; }
  const Mat& matrix() const { return matrix_; }
  const Mat& inverse_matrix() const { return inverse_; }
  Vec infinity_covector() const { return matrix_.row(dim()).transpose(); }

  /// |xi . v| for the unit-norm representative; zero means at infinity.
  double height(const ProjectivePoint& p) const {
    return std::abs(matrix_.row(dim()).dot(p.coords()));
  }

  bool contains(const ProjectivePoint& p, double tol = 1e-12) const {
    return height(p) > tol;
  }

  /// Affine coordinates of a representable point.
  Vec coords(const ProjectivePoint& p) const {
    const int n = dim();
    Vec u = matrix_ * p.coords();
    if (std::abs(u[n]) <= 1e-12 * u.norm()) {
      throw PointAtInfinity("point lies on the chart's hyperplane at infinity");
    }
    return u.head(n) / u[n];
  }

  /// Inverse embedding of affine coordinates.
  ProjectivePoint embed(const Vec& w) const {
    const int n = dim();
    Vec u(n + 1);
    u.head(n) = w;
    u[n] = 1.0;
    return ProjectivePoint(inverse_ * u);
  }

  /// Homogeneous representative on the positive side of the chart,
  /// scaled so the last chart coordinate is 1 (the canonical cone lift).
  Vec lift(const Vec& affine_coords) const {
    const int n = dim();
    Vec u(n + 1);
    u.head(n) = affine_coords;
    u[n] = 1.0;
    return inverse_ * u;
  }

 private:
  explicit AffineChart(const Mat& c) : matrix_(c) {
    if (c.rows() != c.cols() || c.rows() < 2) {
      throw DegenerateConfiguration("chart matrix must be square of size >= 2");
    }
    Eigen::FullPivLU<Mat> lu(c);
    if (!lu.isInvertible()) {
      throw DegenerateConfiguration("chart matrix must be invertible");
    }
    inverse_ = lu.inverse();
  }

  Mat matrix_;
  Mat inverse_;
};

/// An element of SL^\pm(n+1, R) acting on projective n-space: the stored
/// matrix has |det| = 1 and carries the sign of the original determinant.
class ProjectiveMap {
 public:
  /// det-normalizes a raw matrix: m / |det m|^{1/(n+1)} after projective
  /// rescaling; throws InvalidMatrix when the determinant vanishes.
  static ProjectiveMap from_matrix(const Mat& raw) {
    if (raw.rows() != raw.cols() || raw.rows() < 2) {
      throw InvalidMatrix("projective map matrix must be square of size >= 2");
    }
    if (!raw.allFinite()) throw InvalidMatrix("matrix has non-finite entries");
    const double scale = raw.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw InvalidMatrix("zero matrix");
    Mat m = raw / scale;
    const double det = m.determinant();
    if (std::abs(det) < 1e-14) {
      throw InvalidMatrix("matrix is numerically singular");
    }
    const int dim = static_cast<int>(raw.rows());
    m /= std::pow(std::abs(det), 1.0 / dim);
    return ProjectiveMap(m, det < 0.0 ? -1 : 1);
  }

  static ProjectiveMap identity(int n) {
    return ProjectiveMap(Mat::Identity(n + 1, n + 1), 1);
  }

  const Mat& matrix() const { return matrix_; }
  int det_sign() const { return det_sign_; }
  int dim() const { return static_cast<int>(matrix_.rows()) - 1; }

  ProjectiveMap inverse() const {
    return ProjectiveMap(matrix_.inverse(), det_sign_);
  }

  ProjectiveMap operator*(const ProjectiveMap& rhs) const {
    // renormalize to soak up rounding drift in |det|
    return from_matrix(matrix_ * rhs.matrix_);
  }

  ProjectivePoint operator()(const ProjectivePoint& p) const {
    return ProjectivePoint(matrix_ * p.coords());
  }

  bool approx_identity(double tol = 1e-9) const {
    return (matrix_ - Mat::Identity(matrix_.rows(), matrix_.cols())).norm() <= tol;
  }

 private:
  ProjectiveMap(const Mat& m, int det_sign) : matrix_(m), det_sign_(det_sign) {}

  Mat matrix_;
  int det_sign_;
};

inline ProjectivePoint apply_map(const ProjectiveMap& g, const ProjectivePoint& p) {
  return g(p);
}

namespace detail {

/// Third-to-first singular value ratio of the stacked coordinate matrix;
/// the quadruple is collinear when this is tiny (scale-free rank test).
inline double collinearity_defect(const ProjectivePoint& a, const ProjectivePoint& b,
                                  const ProjectivePoint& x, const ProjectivePoint& y) {
  const int cols = static_cast<int>(a.coords().size());
  Mat span(4, cols);
  span.row(0) = a.coords().transpose();
  span.row(1) = b.coords().transpose();
  span.row(2) = x.coords().transpose();
  span.row(3) = y.coords().transpose();
  Eigen::JacobiSVD<Mat> svd(span);
  const Vec& s = svd.singularValues();
  if (s[0] <= 0.0) return 0.0;
  return s[2] / s[0];
}

}  // namespace detail

/// Cross-ratio [a:b:x:y] = (|a-x| |b-y|) / (|a-y| |b-x|) of four collinear
/// points, evaluated in the coordinate chart that maximizes the smallest
/// height of the four points (best conditioning among coordinate charts).
inline double cross_ratio(const ProjectivePoint& a, const ProjectivePoint& b,
                          const ProjectivePoint& x, const ProjectivePoint& y) {
  const int n = a.dim();
  if (b.dim() != n || x.dim() != n || y.dim() != n) {
    throw DegenerateConfiguration("cross_ratio: dimension mismatch");
  }
  if (a.approx_equal(y) || b.approx_equal(x)) {
    throw DegenerateConfiguration("cross_ratio: a=y or b=x");
  }
  if (detail::collinearity_defect(a, b, x, y) > 1e-9) {
    throw CollinearityViolation("cross_ratio: points are not collinear");
  }

  int best_axis = -1;
  double best_score = -1.0;
  for (int axis = 0; axis <= n; ++axis) {
    double score = std::min(std::min(std::abs(a.coords()[axis]), std::abs(b.coords()[axis])),
                            std::min(std::abs(x.coords()[axis]), std::abs(y.coords()[axis])));
    if (score > best_score) {
      best_score = score;
      best_axis = axis;
    }
  }
  if (best_score <= 1e-12) {
    throw PointAtInfinity("cross_ratio: no coordinate chart contains all four points");
  }
  const AffineChart chart = AffineChart::coordinate(n, best_axis);
  const Vec wa = chart.coords(a), wb = chart.coords(b);
  const Vec wx = chart.coords(x), wy = chart.coords(y);
  const double num = (wa - wx).norm() * (wb - wy).norm();
  const double den = (wa - wy).norm() * (wb - wx).norm();
  if (!(den > 0.0)) {
    throw DegenerateConfiguration("cross_ratio: degenerate denominator");
  }
  return num / den;
}

inline ProjectiveMap det_normalize(const Mat& raw) { return ProjectiveMap::from_matrix(raw); }

inline Vec chart_coords(const AffineChart& chart, const ProjectivePoint& p) {
  return chart.coords(p);
}

}  // namespace hilbertlab
