#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hilbertlab/convex_body.hpp"
#include "hilbertlab/hilbert_metric.hpp"

namespace hilbertlab {

/// Left-invariant proximity gauge on SL^\pm: max(|g^-1 h - 1|_F, |h^-1 g - 1|_F).
/// Proper and left-invariant; vanishes exactly at matrix equality. Stands in
/// for an abstract left-invariant distance d_SL.
inline double proximity_gauge(const ProjectiveMap& g, const ProjectiveMap& h) {
  if (g.dim() != h.dim()) throw InvalidMatrix("proximity_gauge: dimension mismatch");
  const int size = g.dim() + 1;
  const Mat id = Mat::Identity(size, size);
  const double a = (g.inverse().matrix() * h.matrix() - id).norm();
  const double b = (h.inverse().matrix() * g.matrix() - id).norm();
  return std::max(a, b);
}

inline double gauge_to_identity(const ProjectiveMap& g) {
  return proximity_gauge(g, ProjectiveMap::identity(g.dim()));
}

/// g^-1 h^-1 g h, det-normalized.
inline ProjectiveMap commutator(const ProjectiveMap& g, const ProjectiveMap& h) {
  return g.inverse() * h.inverse() * g * h;
}

/// Symmetric finite generator list presenting a group.
struct GeneratorSet {
  std::vector<ProjectiveMap> elements;
  bool symmetric = false;

  bool check_symmetric(double tol = 1e-10) const {
    for (const ProjectiveMap& g : elements) {
      const ProjectiveMap inv = g.inverse();
      bool found = false;
      for (const ProjectiveMap& h : elements) {
        if (h.dim() == inv.dim() && proximity_gauge(h, inv) <= tol) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  /// Appends any missing inverses and dedups by gauge.
  static GeneratorSet symmetrized(const std::vector<ProjectiveMap>& gens,
                                  double tol = 1e-10) {
    GeneratorSet s;
    s.symmetric = true;
    auto push_unique = [&](const ProjectiveMap& g) {
      for (const ProjectiveMap& h : s.elements) {
        if (proximity_gauge(h, g) <= tol) return;
      }
      s.elements.push_back(g);
    };
    for (const ProjectiveMap& g : gens) {
      push_unique(g);
      push_unique(g.inverse());
    }
    return s;
  }
};

/// Word with signed 1-based letters: +k is S[k-1], -k is S[k-1]^{-1}.
using Word = std::vector<int>;

inline Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& letter : out) letter = -letter;
  return out;
}

inline ProjectiveMap evaluate_word(const std::vector<ProjectiveMap>& gens, const Word& w,
                                   int dim) {
  ProjectiveMap acc = ProjectiveMap::identity(dim);
  for (int letter : w) {
    const int idx = std::abs(letter) - 1;
    acc = acc * (letter > 0 ? gens[idx] : gens[idx].inverse());
  }
  return acc;
}

struct WordBallElement {
  ProjectiveMap map;
  Word word;  // shortest found (breadth-first); positive letters only
};

namespace detail {

/// Tolerance-aware matrix set keyed by quantized trace.
class MatrixDedup {
 public:
  explicit MatrixDedup(double tol) : tol_(tol) {}

  int find(const Mat& m, const Mat& m_inv) const {
    const long long key = quantize(m.trace());
    for (long long k = key - 1; k <= key + 1; ++k) {
      auto [lo, hi] = buckets_.equal_range(k);
      for (auto it = lo; it != hi; ++it) {
        const int idx = it->second;
        const int size = static_cast<int>(m.rows());
        const Mat id = Mat::Identity(size, size);
        const double a = (inverses_[idx] * m - id).norm();
        const double b = (m_inv * mats_[idx] - id).norm();
        if (std::max(a, b) < tol_) return idx;
      }
    }
    return -1;
  }

  int insert(const Mat& m, const Mat& m_inv) {
    const int idx = static_cast<int>(mats_.size());
    mats_.push_back(m);
    inverses_.push_back(m_inv);
    buckets_.emplace(quantize(m.trace()), idx);
    return idx;
  }

  std::size_t size() const { return mats_.size(); }

 private:
  static long long quantize(double t) { return std::llround(t * 1e6); }

  double tol_;
  std::vector<Mat> mats_;
  std::vector<Mat> inverses_;
  std::unordered_multimap<long long, int> buckets_;
};

}  // namespace detail

/// All products of at most m generators, deduplicated by gauge < 1e-9,
/// each with a shortest witness word; breadth-first, so the output order
/// is canonical. Includes the identity (empty word).
inline std::vector<WordBallElement> word_ball(const GeneratorSet& s, int m,
                                              std::size_t cap = 1000000) {
  if (s.elements.empty()) {
    throw DegenerateConfiguration("word_ball: empty generator set");
  }
  if (!s.symmetric) {
    throw DegenerateConfiguration("word_ball: generator set must be symmetric");
  }
  const int dim = s.elements.front().dim();
  for (const ProjectiveMap& g : s.elements) {
    if (g.dim() != dim) throw InvalidMatrix("word_ball: dimension mismatch");
  }

  std::vector<WordBallElement> out;
  detail::MatrixDedup seen(1e-9);
  const ProjectiveMap id = ProjectiveMap::identity(dim);
  out.push_back(WordBallElement{id, {}});
  seen.insert(id.matrix(), id.matrix());

  std::vector<int> frontier{0};
  for (int step = 1; step <= m && !frontier.empty(); ++step) {
    std::vector<int> next;
    for (int idx : frontier) {
      for (std::size_t j = 0; j < s.elements.size(); ++j) {
        const ProjectiveMap cand = out[idx].map * s.elements[j];
        const Mat cand_inv = cand.inverse().matrix();
        if (seen.find(cand.matrix(), cand_inv) >= 0) continue;
        if (out.size() >= cap) {
          throw BallCapExceeded("word_ball: element cap exceeded");
        }
        Word w = out[idx].word;
        w.push_back(static_cast<int>(j) + 1);
        next.push_back(seen.insert(cand.matrix(), cand_inv));
        out.push_back(WordBallElement{cand, std::move(w)});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

/// Generators of Gamma_eps(x): all elements of the depth-m word ball whose
/// displacement of the basepoint is at most eps. The ball of a symmetric
/// set is inverse-closed, so the result is symmetric.
inline GeneratorSet epsilon_subgroup_generators(const MarkedBody& mb, const GeneratorSet& s,
                                                double eps, int depth,
                                                std::size_t cap = 1000000) {
  for (const ProjectiveMap& g : s.elements) {
    if (!is_automorphism(mb.body, g)) {
      throw NotAnAutomorphism("epsilon_subgroup_generators: generator does not preserve the body");
    }
  }
  GeneratorSet out;
  out.symmetric = true;
  if (s.elements.empty()) {
    out.elements.push_back(ProjectiveMap::identity(mb.body.dim()));
    return out;
  }
  for (const WordBallElement& el : word_ball(s, depth, cap)) {
    const double disp = distance(mb.body, mb.basepoint, el.map(mb.basepoint)).value;
    // closed condition d <= eps, kept closed under rounding
    if (disp <= eps + 1e-12) out.elements.push_back(el.map);
  }
  return out;
}

// ---------------------------------------------------------------------------
// exact integer arithmetic (projective matrices up to scale)

namespace exact {

using Int = boost::multiprecision::cpp_int;

/// Square integer matrix, row-major; understood up to positive scale.
struct IntMat {
  int size = 0;
  std::vector<Int> a;

  Int& at(int i, int j) { return a[i * size + j]; }
  const Int& at(int i, int j) const { return a[i * size + j]; }

  static IntMat identity(int size) {
    IntMat m;
    m.size = size;
    m.a.assign(static_cast<std::size_t>(size) * size, 0);
    for (int i = 0; i < size; ++i) m.at(i, i) = 1;
    return m;
  }
};

inline IntMat mul(const IntMat& x, const IntMat& y) {
  IntMat z;
  z.size = x.size;
  z.a.assign(static_cast<std::size_t>(x.size) * x.size, 0);
  for (int i = 0; i < x.size; ++i) {
    for (int k = 0; k < x.size; ++k) {
      const Int& v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < x.size; ++j) z.at(i, j) += v * y.at(k, j);
    }
  }
  return z;
}

inline Int det(const IntMat& m) {
  if (m.size == 1) return m.at(0, 0);
  Int acc = 0;
  // Laplace expansion along the first row; sizes here are at most 5
  for (int j = 0; j < m.size; ++j) {
    if (m.at(0, j) == 0) continue;
    IntMat minor;
    minor.size = m.size - 1;
    minor.a.reserve(static_cast<std::size_t>(minor.size) * minor.size);
    for (int r = 1; r < m.size; ++r) {
      for (int c = 0; c < m.size; ++c) {
        if (c != j) minor.a.push_back(m.at(r, c));
      }
    }
    const Int cofactor = det(minor);
    acc += (j % 2 == 0 ? m.at(0, j) : -m.at(0, j)) * cofactor;
  }
  return acc;
}

/// Adjugate: adj(M) = det(M) M^{-1}; a projective inverse for integer
/// matrices regardless of the determinant value.
inline IntMat adjugate(const IntMat& m) {
  IntMat z;
  z.size = m.size;
  z.a.assign(m.a.size(), 0);
  for (int i = 0; i < m.size; ++i) {
    for (int j = 0; j < m.size; ++j) {
      IntMat minor;
      minor.size = m.size - 1;
      minor.a.reserve(static_cast<std::size_t>(minor.size) * minor.size);
      for (int r = 0; r < m.size; ++r) {
        if (r == i) continue;
        for (int c = 0; c < m.size; ++c) {
          if (c != j) minor.a.push_back(m.at(r, c));
        }
      }
      const Int cof = ((i + j) % 2 == 0 ? det(minor) : -det(minor));
      z.at(j, i) = cof;
    }
  }
  return z;
}

/// Divide by the content and fix the sign of the first nonzero entry; the
/// canonical representative of the projective class.
inline void normalize(IntMat& m) {
  Int g = 0;
  for (const Int& v : m.a) g = boost::multiprecision::gcd(g, v);
  if (g == 0) return;
  for (Int& v : m.a) v /= g;
  for (const Int& v : m.a) {
    if (v != 0) {
      if (v < 0) {
        for (Int& u : m.a) u = -u;
      }
      break;
    }
  }
}

inline bool equal_normalized(const IntMat& x, const IntMat& y) {
  return x.size == y.size && x.a == y.a;
}

inline bool is_scalar_identity(const IntMat& m) {
  for (int i = 0; i < m.size; ++i) {
    for (int j = 0; j < m.size; ++j) {
      if (i != j && m.at(i, j) != 0) return false;
    }
    if (m.at(i, i) != m.at(0, 0)) return false;
  }
  return m.at(0, 0) != 0;
}

/// [x, y] up to scale: adj(x) adj(y) x y, content-normalized.
inline IntMat commutator(const IntMat& x, const IntMat& y) {
  IntMat z = mul(mul(adjugate(x), adjugate(y)), mul(x, y));
  normalize(z);
  return z;
}

inline std::string canonical_key(const IntMat& m) {
  std::string key;
  for (const Int& v : m.a) {
    key += v.str();
    key += ';';
  }
  return key;
}

inline std::optional<IntMat> from_double(const Mat& m, double max_abs = 1e12) {
  IntMat z;
  z.size = static_cast<int>(m.rows());
  z.a.reserve(m.size());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (std::abs(v) > max_abs || v != std::nearbyint(v)) return std::nullopt;
      z.a.push_back(Int(static_cast<long long>(v)));
    }
  }
  normalize(z);
  return z;
}

inline IntMat evaluate_word(const std::vector<IntMat>& gens, const Word& w, int size) {
  IntMat acc = IntMat::identity(size);
  for (int letter : w) {
    const int idx = std::abs(letter) - 1;
    acc = mul(acc, letter > 0 ? gens[idx] : adjugate(gens[idx]));
    normalize(acc);
  }
  return acc;
}

}  // namespace exact

// ---------------------------------------------------------------------------
// nilpotency machinery

enum class VerdictKind { Nilpotent, NotNilpotent, Inconclusive };

struct NilpotencyVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  int nilpotency_class = 0;
  Word witness_word;
  std::string reason;
  bool exact_path = false;
};

namespace detail {

struct FloatLayerElement {
  ProjectiveMap map;
  Word word;
};

struct ExactLayerElement {
  exact::IntMat mat;
  Word word;
};

inline std::optional<std::vector<exact::IntMat>> exact_generators(const GeneratorSet& s) {
  std::vector<exact::IntMat> out;
  for (const ProjectiveMap& g : s.elements) {
    auto m = exact::from_double(g.matrix());
    if (!m) {
      // det-normalization may have divided an integer matrix by |det|^{1/dim};
      // try to undo it by scaling with the smallest nonzero entry magnitude
      const Mat& raw = g.matrix();
      double smallest = 0.0;
      for (int i = 0; i < raw.rows(); ++i) {
        for (int j = 0; j < raw.cols(); ++j) {
          const double v = std::abs(raw(i, j));
          if (v > 1e-12 && (smallest == 0.0 || v < smallest)) smallest = v;
        }
      }
      if (smallest > 0.0) m = exact::from_double(raw / smallest);
      if (!m) return std::nullopt;
      // verify the rescaling is exact, not a rounding accident
      Mat rounded(raw.rows(), raw.cols());
      for (int i = 0; i < raw.rows(); ++i) {
        for (int j = 0; j < raw.cols(); ++j) {
          rounded(i, j) = std::nearbyint(raw(i, j) / smallest);
        }
      }
      if ((raw / smallest - rounded).lpNorm<Eigen::Infinity>() > 1e-12) return std::nullopt;
    }
    out.push_back(*m);
  }
  return out;
}

}  // namespace detail

/// Lower-central-series descent: layer k+1 holds the commutators of the
/// generators with layer k. Nilpotent(c) when the first empty layer is
/// c+1; exact on integer generators, tolerance-plus-margin on floats
/// (elements with gauge inside [tol, 10 tol] make the verdict Inconclusive
/// rather than letting rounding fabricate nilpotency).
inline NilpotencyVerdict nilpotency_witness(const GeneratorSet& s, int class_bound,
                                            double tol = 1e-9,
                                            std::size_t layer_cap = 20000) {
  NilpotencyVerdict verdict;
  if (s.elements.empty()) {
    verdict.kind = VerdictKind::Nilpotent;
    verdict.nilpotency_class = 1;
    verdict.exact_path = true;
    return verdict;
  }
  const int dim = s.elements.front().dim();
  const auto exact_gens = detail::exact_generators(s);

  if (exact_gens) {
    verdict.exact_path = true;
    std::vector<detail::ExactLayerElement> layer;
    {
      std::unordered_set<std::string> seen;
      for (std::size_t i = 0; i < exact_gens->size(); ++i) {
        exact::IntMat m = (*exact_gens)[i];
        exact::normalize(m);
        if (exact::is_scalar_identity(m)) continue;
        if (!seen.insert(exact::canonical_key(m)).second) continue;
        layer.push_back({std::move(m), Word{static_cast<int>(i) + 1}});
      }
    }
    int last_nonempty = layer.empty() ? 0 : 1;
    for (int weight = 2; weight <= class_bound + 1 && !layer.empty(); ++weight) {
      std::vector<detail::ExactLayerElement> next;
      std::unordered_set<std::string> seen;
      for (std::size_t i = 0; i < exact_gens->size(); ++i) {
        for (const auto& el : layer) {
          exact::IntMat c = exact::commutator((*exact_gens)[i], el.mat);
          if (exact::is_scalar_identity(c)) continue;
          if (!seen.insert(exact::canonical_key(c)).second) continue;
          if (next.size() >= layer_cap) {
            throw BallCapExceeded("nilpotency_witness: layer cap exceeded");
          }
          Word w = inverse_word(Word{static_cast<int>(i) + 1});
          const Word inv_el = inverse_word(el.word);
          w.insert(w.end(), inv_el.begin(), inv_el.end());
          w.push_back(static_cast<int>(i) + 1);
          w.insert(w.end(), el.word.begin(), el.word.end());
          next.push_back({std::move(c), std::move(w)});
        }
      }
      layer = std::move(next);
      if (!layer.empty()) last_nonempty = weight;
    }
    if (layer.empty()) {
      verdict.kind = VerdictKind::Nilpotent;
      verdict.nilpotency_class = std::max(1, last_nonempty);
    } else {
      verdict.kind = VerdictKind::NotNilpotent;
      verdict.nilpotency_class = class_bound;
      verdict.witness_word = layer.front().word;
      verdict.reason = "nontrivial layer beyond the class bound";
    }
    return verdict;
  }

  // floating path
  bool margin_violated = false;
  bool diverged = false;
  std::vector<detail::FloatLayerElement> layer;
  {
    detail::MatrixDedup seen(tol);
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
      const double g0 = gauge_to_identity(s.elements[i]);
      if (g0 < tol) continue;
      if (g0 <= 10.0 * tol) margin_violated = true;
      const Mat inv = s.elements[i].inverse().matrix();
      if (seen.find(s.elements[i].matrix(), inv) >= 0) continue;
      seen.insert(s.elements[i].matrix(), inv);
      layer.push_back({s.elements[i], Word{static_cast<int>(i) + 1}});
    }
  }
  int last_nonempty = layer.empty() ? 0 : 1;
  for (int weight = 2; weight <= class_bound + 1 && !layer.empty(); ++weight) {
    std::vector<detail::FloatLayerElement> next;
    detail::MatrixDedup seen(tol);
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
      for (const auto& el : layer) {
        ProjectiveMap c = ProjectiveMap::identity(dim);
        try {
          c = commutator(s.elements[i], el.map);
        } catch (const InvalidMatrix&) {
          diverged = true;  // entries left the representable range
          continue;
        }
        const double g0 = gauge_to_identity(c);
        if (g0 > 1e12) {
          diverged = true;
          continue;
        }
        if (g0 < tol) continue;
        if (g0 <= 10.0 * tol) margin_violated = true;
        const Mat c_inv = c.inverse().matrix();
        if (seen.find(c.matrix(), c_inv) >= 0) continue;
        seen.insert(c.matrix(), c_inv);
        if (next.size() >= layer_cap) {
          throw BallCapExceeded("nilpotency_witness: layer cap exceeded");
        }
        Word w = inverse_word(Word{static_cast<int>(i) + 1});
        const Word inv_el = inverse_word(el.word);
        w.insert(w.end(), inv_el.begin(), inv_el.end());
        w.push_back(static_cast<int>(i) + 1);
        w.insert(w.end(), el.word.begin(), el.word.end());
        next.push_back({c, std::move(w)});
      }
    }
    layer = std::move(next);
    if (!layer.empty()) last_nonempty = weight;
  }
  if (!layer.empty() && !margin_violated) {
    verdict.kind = VerdictKind::NotNilpotent;
    verdict.nilpotency_class = class_bound;
    verdict.witness_word = layer.front().word;
    verdict.reason = "nontrivial layer beyond the class bound";
    return verdict;
  }
  if (margin_violated || diverged) {
    verdict.kind = VerdictKind::Inconclusive;
    verdict.reason = margin_violated
                         ? "separation margin between trivial and nontrivial layers violated"
                         : "commutator layers diverged beyond the floating range";
    return verdict;
  }
  verdict.kind = VerdictKind::Nilpotent;
  verdict.nilpotency_class = std::max(1, last_nonempty);
  return verdict;
}

struct DescentResult {
  bool contracting = false;
  double worst_ratio = 0.0;
  Word witness_word;
};

/// Numerical Zassenhaus test: successive commutator layers must shrink the
/// gauge to the identity by at least a factor of two for three consecutive
/// layers.
inline DescentResult zassenhaus_descent(const GeneratorSet& s, double tol = 1e-9) {
  DescentResult result;
  if (s.elements.empty()) {
    result.contracting = true;
    return result;
  }
  std::vector<detail::FloatLayerElement> layer;
  double prev_max = 0.0;
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    const double g0 = gauge_to_identity(s.elements[i]);
    if (g0 < tol) continue;
    layer.push_back({s.elements[i], Word{static_cast<int>(i) + 1}});
    prev_max = std::max(prev_max, g0);
  }
  if (layer.empty()) {
    result.contracting = true;  // vacuous: generators are the identity
    return result;
  }
  const std::size_t soft_cap = 8192;
  for (int k = 2; k <= 4; ++k) {
    std::vector<detail::FloatLayerElement> next;
    double cur_max = 0.0;
    Word cur_witness;
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
      for (const auto& el : layer) {
        if (next.size() >= soft_cap) break;
        ProjectiveMap c = ProjectiveMap::identity(s.elements.front().dim());
        try {
          c = commutator(s.elements[i], el.map);
        } catch (const InvalidMatrix&) {
          // exploding entries: as far from contracting as it gets
          result.contracting = false;
          result.worst_ratio = std::numeric_limits<double>::infinity();
          result.witness_word = el.word;
          return result;
        }
        const double g0 = gauge_to_identity(c);
        if (g0 < tol) continue;
        Word w = inverse_word(Word{static_cast<int>(i) + 1});
        const Word inv_el = inverse_word(el.word);
        w.insert(w.end(), inv_el.begin(), inv_el.end());
        w.push_back(static_cast<int>(i) + 1);
        w.insert(w.end(), el.word.begin(), el.word.end());
        if (g0 > cur_max) {
          cur_max = g0;
          cur_witness = w;
        }
        next.push_back({c, std::move(w)});
      }
    }
    if (next.empty()) {
      result.contracting = true;  // descent reached the identity
      return result;
    }
    const double ratio = cur_max / prev_max;
    result.worst_ratio = std::max(result.worst_ratio, ratio);
    if (ratio > 0.5) {
      result.contracting = false;
      result.witness_word = cur_witness;
      result.worst_ratio = ratio;
      return result;
    }
    prev_max = cur_max;
    layer = std::move(next);
  }
  result.contracting = true;
  return result;
}

// ---------------------------------------------------------------------------
// orbit lemma

struct OrbitSpreadResult {
  std::vector<Word> witness_words;  // positive 1-based generator indices
  std::vector<int> images;
  std::vector<int> layer_sizes;  // N_0 .. N_m
};

/// Breadth-first growth of S_*^n e: returns min(m+1, |E|) witnesses in S^m
/// sending e to distinct points, together with the N_n sequence.
inline OrbitSpreadResult orbit_spread(const std::vector<std::vector<int>>& generators,
                                      int num_points, int m, int e) {
  if (num_points <= 0 || e < 0 || e >= num_points) {
    throw DegenerateConfiguration("orbit_spread: base element out of range");
  }
  if (generators.empty() && num_points > 1) {
    throw NotGenerating("orbit_spread: empty generator set cannot act transitively");
  }
  for (const auto& p : generators) {
    if (static_cast<int>(p.size()) != num_points) {
      throw DegenerateConfiguration("orbit_spread: permutation size mismatch");
    }
    std::vector<bool> hit(num_points, false);
    for (int img : p) {
      if (img < 0 || img >= num_points || hit[img]) {
        throw DegenerateConfiguration("orbit_spread: not a permutation");
      }
      hit[img] = true;
    }
  }

  OrbitSpreadResult result;
  std::vector<int> order;  // discovery order of points
  std::vector<Word> words(num_points);
  order.push_back(e);
  words[e] = {};
  std::vector<int> frontier{e};
  result.layer_sizes.push_back(1);

  // grow layers up to m for the witnesses, then keep going for transitivity
  int level = 0;
  std::vector<int> extended = frontier;
  std::vector<bool> seen(num_points, false);
  seen[e] = true;
  while (!frontier.empty()) {
    ++level;
    std::vector<int> next;
    for (int point : frontier) {
      for (std::size_t j = 0; j < generators.size(); ++j) {
        const int img = generators[j][point];
        if (seen[img]) continue;
        seen[img] = true;
        if (level <= m) {
          words[img] = words[point];
          words[img].push_back(static_cast<int>(j) + 1);
          order.push_back(img);
        }
        next.push_back(img);
      }
    }
    frontier = std::move(next);
    if (level <= m) {
      result.layer_sizes.push_back(static_cast<int>(order.size()));
    }
  }
  while (static_cast<int>(result.layer_sizes.size()) <= m) {
    result.layer_sizes.push_back(static_cast<int>(order.size()));
  }
  for (bool b : seen) {
    if (!b) throw NotTransitive("orbit_spread: the action is not transitive on E");
  }

  const int want = std::min(m + 1, num_points);
  for (int i = 0; i < want && i < static_cast<int>(order.size()); ++i) {
    result.images.push_back(order[i]);
    result.witness_words.push_back(words[order[i]]);
  }
  return result;
}

}  // namespace hilbertlab
