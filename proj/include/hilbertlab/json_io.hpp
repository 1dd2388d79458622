#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hilbertlab/benzecri.hpp"
#include "hilbertlab/convex_body.hpp"
#include "hilbertlab/group_lab.hpp"

namespace hilbertlab {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw SchemaError("matrix must be an array of arrays");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.front().size());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) {
      throw SchemaError("matrix rows have inconsistent lengths");
    }
    for (int c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw SchemaError("matrix entries must be numbers");
      m(i, c) = j[i][c].get<double>();
    }
  }
  return m;
}

inline Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Vec vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("vector must be a nonempty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError("vector entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Json body_to_json(const ConvexBody& body) {
  Json j;
  if (body.kind() == ConvexBody::Kind::Ellipsoid) {
    j["type"] = "ellipsoid";
    j["Q"] = matrix_to_json(body.form());
    return j;
  }
  j["type"] = "hpolytope";
  j["chart"] = "standard";
  Json halves = Json::array();
  const bool standard_stored =
      (body.chart().matrix() - Mat::Identity(body.dim() + 1, body.dim() + 1)).norm() < 1e-14;
  if (standard_stored) {
    for (const Halfspace& h : body.facets()) {
      Json row = Json::array();
      for (int i = 0; i < body.dim(); ++i) row.push_back(h.normal[i]);
      row.push_back(h.offset);
      halves.push_back(std::move(row));
    }
  } else {
    // restated in the standard chart via the homogeneous facet covectors
    for (Vec l : body.homogeneous_facets()) {
      const ProjectivePoint p = body.interior_point();
      if (l.dot(p.coords()) > 0.0) l = -l;
      Json row = Json::array();
      for (int i = 0; i < body.dim(); ++i) row.push_back(l[i]);
      row.push_back(-l[body.dim()]);
      halves.push_back(std::move(row));
    }
  }
  j["halfspaces"] = std::move(halves);
  return j;
}

inline ConvexBody body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw SchemaError("body must be an object with a \"type\"");
  }
  const std::string type = j["type"].get<std::string>();
  if (j.contains("chart") && j["chart"] != "standard") {
    throw SchemaError("only the standard chart is supported in body files");
  }
  try {
    if (type == "ellipsoid") {
      if (!j.contains("Q")) throw SchemaError("ellipsoid body needs \"Q\"");
      return ConvexBody::ellipsoid(matrix_from_json(j["Q"]));
    }
    if (type == "hpolytope") {
      if (!j.contains("halfspaces")) throw SchemaError("hpolytope body needs \"halfspaces\"");
      std::vector<Halfspace> halves;
      for (const Json& row : j["halfspaces"]) {
        const Vec v = vector_from_json(row);
        if (v.size() < 3) throw SchemaError("halfspace row needs n coefficients plus offset");
        Halfspace h;
        h.normal = v.head(v.size() - 1);
        h.offset = v[v.size() - 1];
        halves.push_back(std::move(h));
      }
      return ConvexBody::from_halfspaces(static_cast<int>(halves.front().normal.size()),
                                         halves);
    }
    if (type == "vpolytope") {
      if (!j.contains("vertices")) throw SchemaError("vpolytope body needs \"vertices\"");
      std::vector<Vec> pts;
      for (const Json& row : j["vertices"]) pts.push_back(vector_from_json(row));
      if (pts.empty()) throw SchemaError("vpolytope needs vertices");
      return ConvexBody::from_vertices(static_cast<int>(pts.front().size()), pts);
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string("invalid body: ") + e.what());
  }
  throw SchemaError("unknown body type: " + type);
}

/// Basepoints: length n+1 arrays are homogeneous, length n arrays are
/// affine coordinates of the standard chart.
inline ProjectivePoint point_from_json(const Json& j, int n) {
  const Vec v = vector_from_json(j);
  if (v.size() == n + 1) return ProjectivePoint(v);
  if (v.size() == n) return ProjectivePoint::from_affine(v);
  throw SchemaError("point has the wrong number of coordinates");
}

inline Json generators_to_json(const GeneratorSet& s) {
  Json out = Json::array();
  for (const ProjectiveMap& g : s.elements) out.push_back(matrix_to_json(g.matrix()));
  return out;
}

inline GeneratorSet generators_from_json(const Json& j, bool symmetrize = true) {
  if (!j.is_array()) throw SchemaError("generators must be an array of matrices");
  std::vector<ProjectiveMap> gens;
  for (const Json& m : j) {
    try {
      gens.push_back(ProjectiveMap::from_matrix(matrix_from_json(m)));
    } catch (const InvalidMatrix& e) {
      throw SchemaError(std::string("invalid generator: ") + e.what());
    }
  }
  if (symmetrize) return GeneratorSet::symmetrized(gens);
  GeneratorSet s;
  s.elements = std::move(gens);
  return s;
}

inline Json word_to_json(const Word& w) {
  Json out = Json::array();
  for (int letter : w) out.push_back(letter);
  return out;
}

inline Word word_from_json(const Json& j) {
  Word w;
  for (const Json& v : j) w.push_back(v.get<int>());
  return w;
}

inline Json verdict_to_json(const NilpotencyVerdict& v) {
  Json j;
  switch (v.kind) {
    case VerdictKind::Nilpotent:
      j["kind"] = "Nilpotent";
      j["class"] = v.nilpotency_class;
      break;
    case VerdictKind::NotNilpotent:
      j["kind"] = "NotNilpotent";
      j["witness"] = word_to_json(v.witness_word);
      break;
    case VerdictKind::Inconclusive:
      j["kind"] = "Inconclusive";
      j["reason"] = v.reason;
      break;
  }
  j["path"] = v.exact_path ? "exact-integer" : "floating";
  return j;
}

inline NilpotencyVerdict verdict_from_json(const Json& j) {
  NilpotencyVerdict v;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "Nilpotent") {
    v.kind = VerdictKind::Nilpotent;
    v.nilpotency_class = j.at("class").get<int>();
  } else if (kind == "NotNilpotent") {
    v.kind = VerdictKind::NotNilpotent;
    v.witness_word = word_from_json(j.at("witness"));
  } else if (kind == "Inconclusive") {
    v.kind = VerdictKind::Inconclusive;
    v.reason = j.value("reason", "");
  } else {
    throw SchemaError("unknown verdict kind: " + kind);
  }
  v.exact_path = j.at("path").get<std::string>() == "exact-integer";
  return v;
}

inline Json certificate_to_json(const StandardPairCertificate& c) {
  Json j;
  j["valid"] = c.valid();
  j["bounded"] = c.bounded;
  j["centroid_residual"] = c.centroid_residual;
  j["basepoint_residual"] = c.basepoint_residual;
  j["inertia_residual"] = c.inertia_residual;
  j["tolerance"] = c.tolerance;
  return j;
}

/// Audit record of a standardization run.
inline Json standardization_to_json(const StandardizationResult& r) {
  Json j;
  j["map"] = matrix_to_json(r.g.matrix());
  j["det_sign"] = r.g.det_sign();
  j["chart_covector"] = vector_to_json(r.chart_covector);
  j["newton_iterations"] = r.newton_iterations;
  j["final_residual"] = r.final_residual;
  j["certificate"] = certificate_to_json(r.certificate);
  return j;
}

}  // namespace hilbertlab
