#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "hilbertlab/hilbert_metric.hpp"
#include "hilbertlab/json_io.hpp"

namespace hilbertlab {

constexpr const char* kSchemaTag = "hilbertlab/v1";

/// A reproducible experiment: a marked body, a symmetric generator set, an
/// epsilon grid and a word-ball depth.
struct Scenario {
  std::string name;
  std::optional<ConvexBody> body;
  std::optional<ProjectivePoint> basepoint;
  GeneratorSet generators;
  std::vector<double> epsilon_grid;
  int depth = 1;
  std::uint64_t seed = 0;
  int class_bound = 6;
  std::size_t ball_cap = 1000000;
  Json echo;
};

namespace detail {

inline FamilyParams family_params_from_json(const Json& j) {
  FamilyParams p;
  if (!j.is_object()) return p;
  if (j.contains("boost")) p.boost = j["boost"].get<double>();
  if (j.contains("rotation")) p.rotation = j["rotation"].get<double>();
  if (j.contains("diagonal")) {
    for (const Json& v : j["diagonal"]) p.diagonal.push_back(v.get<double>());
  }
  if (j.contains("permutations")) p.permutations = j["permutations"].get<bool>();
  if (j.contains("sides")) p.sides = j["sides"].get<int>();
  if (j.contains("symmetries")) {
    for (const Json& v : j["symmetries"]) p.symmetries.push_back(v.get<std::string>());
  }
  return p;
}

inline ProjectivePoint default_basepoint(const std::string& tag, const ConvexBody& body) {
  if (tag == "simplex") return ProjectivePoint(Vec::Ones(body.dim() + 1));
  return ProjectivePoint::from_affine(Vec::Zero(body.dim()));
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("scenario must be a JSON object");
  if (j.value("schema", "") != kSchemaTag) {
    throw SchemaError(std::string("scenario schema must be \"") + kSchemaTag + "\"");
  }
  Scenario s;
  s.echo = j;
  s.name = j.value("name", "scenario");

  std::string family_tag;
  if (j.contains("family")) {
    const Json& fam = j["family"];
    if (!fam.contains("tag") || !fam.contains("n")) {
      throw SchemaError("family needs \"tag\" and \"n\"");
    }
    family_tag = fam["tag"].get<std::string>();
    try {
      const BodyFamily family = make_family(
          family_tag, fam["n"].get<int>(),
          detail::family_params_from_json(fam.value("parameters", Json::object())));
      s.body = family.body;
      s.generators = GeneratorSet::symmetrized(family.automorphism_generators);
    } catch (const UnsupportedFamily& e) {
      throw SchemaError(std::string("bad family: ") + e.what());
    } catch (const UnsupportedDimension& e) {
      throw SchemaError(std::string("bad family: ") + e.what());
    }
  } else if (j.contains("body")) {
    s.body = body_from_json(j["body"]);
    if (!j.contains("generators")) throw SchemaError("explicit body needs \"generators\"");
  } else {
    throw SchemaError("scenario needs \"family\" or \"body\"");
  }
  if (j.contains("generators")) {
    s.generators = generators_from_json(j["generators"]);
  }

  if (j.contains("basepoint")) {
    s.basepoint = point_from_json(j["basepoint"], s.body->dim());
  } else if (!family_tag.empty()) {
    s.basepoint = detail::default_basepoint(family_tag, *s.body);
  } else {
    throw SchemaError("scenario needs a \"basepoint\"");
  }

  if (!j.contains("epsilon_grid") || !j["epsilon_grid"].is_array() ||
      j["epsilon_grid"].empty()) {
    throw SchemaError("scenario needs a nonempty \"epsilon_grid\"");
  }
  double prev = 0.0;
  for (const Json& v : j["epsilon_grid"]) {
    const double eps = v.get<double>();
    if (!(eps > prev)) {
      throw SchemaError("epsilon_grid must be strictly increasing and positive");
    }
    s.epsilon_grid.push_back(eps);
    prev = eps;
  }
  s.depth = j.value("depth", 1);
  if (s.depth < 1) throw SchemaError("depth must be at least 1");
  s.seed = j.value("seed", 0ULL);
  s.class_bound = j.value("class_bound", 6);
  s.ball_cap = j.value("ball_cap", static_cast<std::size_t>(1000000));
  return s;
}

inline Scenario scenario_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

struct EpsilonRow {
  double epsilon = 0.0;
  std::size_t subgroup_size = 0;
  double min_displacement = std::numeric_limits<double>::quiet_NaN();
  NilpotencyVerdict verdict;
  bool descent_contracting = false;
  double descent_ratio = 0.0;
};

struct PairRow {
  Word word;
  double displacement = 0.0;
  double gauge_to_identity = 0.0;
  double gauge_to_stabilizer = 0.0;
};

struct ScanReport {
  std::string name;
  std::uint64_t seed = 0;
  Json scenario_echo;
  std::vector<EpsilonRow> per_epsilon;
  std::vector<PairRow> pair_table;
};

/// Runs a scenario: grows the word ball once, measures displacement and
/// gauge per element, then reports the epsilon-subgroup contents, verdicts
/// and descent results for each epsilon of the grid.
inline ScanReport run_scenario(const Scenario& scenario) {
  const ConvexBody& body = *scenario.body;
  const ProjectivePoint& x = *scenario.basepoint;
  const MarkedBody mb(body, x);
  for (const ProjectiveMap& g : scenario.generators.elements) {
    if (!is_automorphism(body, g)) {
      throw NotAnAutomorphism("scenario generator does not preserve the body");
    }
  }

  std::vector<WordBallElement> ball;
  if (scenario.generators.elements.empty()) {
    ball.push_back(WordBallElement{ProjectiveMap::identity(body.dim()), {}});
  } else {
    ball = word_ball(scenario.generators, scenario.depth, scenario.ball_cap);
  }

  ScanReport report;
  report.name = scenario.name;
  report.seed = scenario.seed;
  report.scenario_echo = scenario.echo;

  std::vector<double> displacement_of(ball.size());
  const ProjectiveMap id = ProjectiveMap::identity(body.dim());
  std::vector<const ProjectiveMap*> stabilizer;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    displacement_of[i] = distance(body, x, ball[i].map(x)).value;
    if (displacement_of[i] <= 1e-9) stabilizer.push_back(&ball[i].map);
  }
  for (std::size_t i = 0; i < ball.size(); ++i) {
    PairRow row;
    row.word = ball[i].word;
    row.displacement = displacement_of[i];
    row.gauge_to_identity = proximity_gauge(ball[i].map, id);
    row.gauge_to_stabilizer = std::numeric_limits<double>::infinity();
    for (const ProjectiveMap* k : stabilizer) {
      row.gauge_to_stabilizer =
          std::min(row.gauge_to_stabilizer, proximity_gauge(ball[i].map, *k));
    }
    report.pair_table.push_back(std::move(row));
  }

  for (double eps : scenario.epsilon_grid) {
    EpsilonRow row;
    row.epsilon = eps;
    GeneratorSet subgroup;
    subgroup.symmetric = true;
    double min_disp = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (displacement_of[i] <= eps + 1e-12) {
        subgroup.elements.push_back(ball[i].map);
        if (displacement_of[i] > 1e-9) min_disp = std::min(min_disp, displacement_of[i]);
      }
    }
    row.subgroup_size = subgroup.elements.size();
    if (std::isfinite(min_disp)) row.min_displacement = min_disp;
    try {
      row.verdict = nilpotency_witness(subgroup, scenario.class_bound);
    } catch (const BallCapExceeded&) {
      row.verdict.kind = VerdictKind::Inconclusive;
      row.verdict.reason = "commutator layer cap exceeded";
    }
    const DescentResult descent = zassenhaus_descent(subgroup);
    row.descent_contracting = descent.contracting;
    row.descent_ratio = descent.worst_ratio;
    report.per_epsilon.push_back(std::move(row));
  }
  return report;
}

inline Json report_to_json(const ScanReport& report) {
  Json j;
  j["schema"] = kSchemaTag;
  j["name"] = report.name;
  j["seed"] = report.seed;
  j["scenario"] = report.scenario_echo;
  Json rows = Json::array();
  for (const EpsilonRow& row : report.per_epsilon) {
    Json r;
    r["epsilon"] = row.epsilon;
    r["subgroup_size"] = row.subgroup_size;
    if (std::isnan(row.min_displacement)) {
      r["min_displacement"] = nullptr;
    } else {
      r["min_displacement"] = row.min_displacement;
    }
    r["verdict"] = verdict_to_json(row.verdict);
    r["descent"] = Json{{"contracting", row.descent_contracting},
                        {"ratio", row.descent_ratio}};
    rows.push_back(std::move(r));
  }
  j["per_epsilon"] = std::move(rows);
  Json pairs = Json::array();
  for (const PairRow& row : report.pair_table) {
    Json r;
    r["word"] = word_to_json(row.word);
    r["displacement"] = row.displacement;
    r["gauge_to_identity"] = row.gauge_to_identity;
    if (std::isinf(row.gauge_to_stabilizer)) {
      r["gauge_to_stabilizer"] = nullptr;
    } else {
      r["gauge_to_stabilizer"] = row.gauge_to_stabilizer;
    }
    pairs.push_back(std::move(r));
  }
  j["displacement_gauge_table"] = std::move(pairs);
  return j;
}

inline ScanReport report_from_json(const Json& j) {
  if (j.value("schema", "") != kSchemaTag) throw SchemaError("report schema mismatch");
  ScanReport report;
  report.name = j.at("name").get<std::string>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.scenario_echo = j.at("scenario");
  for (const Json& r : j.at("per_epsilon")) {
    EpsilonRow row;
    row.epsilon = r.at("epsilon").get<double>();
    row.subgroup_size = r.at("subgroup_size").get<std::size_t>();
    row.min_displacement = r.at("min_displacement").is_null()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : r.at("min_displacement").get<double>();
    row.verdict = verdict_from_json(r.at("verdict"));
    row.descent_contracting = r.at("descent").at("contracting").get<bool>();
    row.descent_ratio = r.at("descent").at("ratio").get<double>();
    report.per_epsilon.push_back(std::move(row));
  }
  for (const Json& r : j.at("displacement_gauge_table")) {
    PairRow row;
    row.word = word_from_json(r.at("word"));
    row.displacement = r.at("displacement").get<double>();
    row.gauge_to_identity = r.at("gauge_to_identity").get<double>();
    row.gauge_to_stabilizer = r.at("gauge_to_stabilizer").is_null()
                                  ? std::numeric_limits<double>::infinity()
                                  : r.at("gauge_to_stabilizer").get<double>();
    report.pair_table.push_back(std::move(row));
  }
  return report;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

/// CSV columns: epsilon, subgroup_size, min_displacement, verdict, class,
/// witness_length.
inline std::string report_to_csv(const ScanReport& report,
                                 const std::string& config_label = "") {
  std::string out;
  if (config_label.empty()) {
    out = "epsilon,subgroup_size,min_displacement,verdict,class,witness_length\n";
  }
  for (const EpsilonRow& row : report.per_epsilon) {
    std::string line;
    if (!config_label.empty()) line += config_label + ",";
    line += detail::format_double(row.epsilon) + ",";
    line += std::to_string(row.subgroup_size) + ",";
    line += std::isnan(row.min_displacement) ? std::string()
                                             : detail::format_double(row.min_displacement);
    line += ",";
    switch (row.verdict.kind) {
      case VerdictKind::Nilpotent:
        line += "Nilpotent," + std::to_string(row.verdict.nilpotency_class) + ",";
        break;
      case VerdictKind::NotNilpotent:
        line += "NotNilpotent,," + std::to_string(row.verdict.witness_word.size());
        break;
      case VerdictKind::Inconclusive:
        line += "Inconclusive,,";
        break;
    }
    if (row.verdict.kind == VerdictKind::Nilpotent) line += "0";
    out += line + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// aggregated Margulis scan over a family parameter grid

struct ScanConfig {
  std::string family_tag;
  int n = 2;
  double parameter = 0.0;  // boost (ellipsoid) or log-diagonal spread (simplex)
};

struct AggregatedScan {
  std::vector<ScanConfig> configs;
  std::vector<ScanReport> reports;
  std::vector<double> epsilon_star;  // per config; 0 when no epsilon qualifies
  std::vector<bool> monotone_consistent;
};

inline Scenario family_scan_scenario(const ScanConfig& config,
                                     const std::vector<double>& epsilon_grid, int depth,
                                     std::uint64_t seed) {
  Json j;
  j["schema"] = kSchemaTag;
  j["name"] = config.family_tag + "@" + detail::format_double(config.parameter);
  Json fam;
  fam["tag"] = config.family_tag;
  fam["n"] = config.n;
  Json params = Json::object();
  if (config.family_tag == "ellipsoid") {
    params["boost"] = config.parameter;
  } else if (config.family_tag == "simplex") {
    Json diag = Json::array();
    for (int i = 0; i <= config.n; ++i) {
      const double t = config.n == 0 ? 0.0 : 1.0 - 2.0 * i / config.n;
      diag.push_back(std::exp(config.parameter * t));
    }
    params["diagonal"] = diag;
    params["permutations"] = false;
  } else {
    throw SchemaError("margulis scan supports the ellipsoid and simplex families");
  }
  fam["parameters"] = std::move(params);
  j["family"] = std::move(fam);
  Json grid = Json::array();
  for (double eps : epsilon_grid) grid.push_back(eps);
  j["epsilon_grid"] = std::move(grid);
  j["depth"] = depth;
  j["seed"] = seed;
  return scenario_from_json(j);
}

inline int scan_thread_count() {
  const char* env = std::getenv("HILBERTLAB_THREADS");
  if (env == nullptr) return 1;
  const int k = std::atoi(env);
  return k > 0 ? k : 1;
}

/// Runs the family scan over a parameter grid. epsilon_star is the largest
/// grid epsilon whose prefix of verdicts is entirely Nilpotent.
inline AggregatedScan margulis_scan(const std::string& family_tag, int n,
                                    const std::vector<double>& parameter_grid,
                                    const std::vector<double>& epsilon_grid, int depth,
                                    std::uint64_t seed = 0) {
  AggregatedScan out;
  for (double p : parameter_grid) {
    out.configs.push_back(ScanConfig{family_tag, n, p});
  }
  const int threads = scan_thread_count();
  out.reports.resize(out.configs.size(), ScanReport{});
  std::size_t next = 0;
  while (next < out.configs.size()) {
    const std::size_t batch =
        std::min(static_cast<std::size_t>(threads), out.configs.size() - next);
    std::vector<std::future<ScanReport>> futures;
    for (std::size_t i = 0; i < batch; ++i) {
      const Scenario scenario =
          family_scan_scenario(out.configs[next + i], epsilon_grid, depth, seed);
      futures.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred,
                                   [scenario]() { return run_scenario(scenario); }));
    }
    for (std::size_t i = 0; i < batch; ++i) out.reports[next + i] = futures[i].get();
    next += batch;
  }

  for (const ScanReport& report : out.reports) {
    double star = 0.0;
    bool prefix = true;
    bool seen_non_nilpotent = false;
    bool flipped_back = false;
    for (const EpsilonRow& row : report.per_epsilon) {
      const bool nil = row.verdict.kind == VerdictKind::Nilpotent;
      if (prefix && nil) star = row.epsilon;
      else prefix = false;
      if (row.verdict.kind == VerdictKind::NotNilpotent) seen_non_nilpotent = true;
      else if (seen_non_nilpotent && nil) flipped_back = true;
    }
    out.epsilon_star.push_back(star);
    out.monotone_consistent.push_back(!flipped_back);
  }
  return out;
}

inline std::string aggregated_to_csv(const AggregatedScan& scan) {
  std::string out =
      "config,epsilon,subgroup_size,min_displacement,verdict,class,witness_length\n";
  for (std::size_t i = 0; i < scan.reports.size(); ++i) {
    const std::string label = scan.configs[i].family_tag + "@" +
                              detail::format_double(scan.configs[i].parameter);
    out += report_to_csv(scan.reports[i], label);
  }
  return out;
}

inline Json aggregated_to_json(const AggregatedScan& scan) {
  Json j;
  j["schema"] = kSchemaTag;
  Json configs = Json::array();
  for (std::size_t i = 0; i < scan.configs.size(); ++i) {
    Json c;
    c["family"] = scan.configs[i].family_tag;
    c["n"] = scan.configs[i].n;
    c["parameter"] = scan.configs[i].parameter;
    c["epsilon_star"] = scan.epsilon_star[i];
    c["monotone_consistent"] = static_cast<bool>(scan.monotone_consistent[i]);
    c["report"] = report_to_json(scan.reports[i]);
    configs.push_back(std::move(c));
  }
  j["configs"] = std::move(configs);
  return j;
}

// ---------------------------------------------------------------------------
// displacement-versus-gauge experiment over built-in standard families

struct DisplacementGaugeSample {
  std::string family;
  double parameter = 0.0;
  double displacement = 0.0;
  double gauge_to_stabilizer = 0.0;
};

/// Samples automorphisms of standard pairs with displacement swept towards
/// zero and measures the gauge to the nearest known stabilizer element.
inline std::vector<DisplacementGaugeSample> displacement_gauge_experiment(
    std::uint64_t seed) {
  std::vector<DisplacementGaugeSample> samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // disk: stabilizer of the center is the orthogonal group
  {
    const int rot_samples = 4096;
    std::vector<Mat> stabilizer;
    for (int i = 0; i < rot_samples; ++i) {
      const double psi = 2.0 * M_PI * i / rot_samples;
      Mat r = Mat::Identity(3, 3);
      r(0, 0) = std::cos(psi); r(0, 1) = -std::sin(psi);
      r(1, 0) = std::sin(psi); r(1, 1) = std::cos(psi);
      stabilizer.push_back(r);
      Mat refl = r;
      refl.col(1) *= -1.0;
      stabilizer.push_back(refl);
    }
    for (int k = 0; k < 24; ++k) {
      const double t = 2.0 * std::pow(0.005 / 2.0, k / 23.0);
      const double phi = 2.0 * M_PI * unif(rng);
      Mat rot = Mat::Identity(3, 3);
      rot(0, 0) = std::cos(phi); rot(0, 1) = -std::sin(phi);
      rot(1, 0) = std::sin(phi); rot(1, 1) = std::cos(phi);
      const Mat gamma = detail::boost_matrix(2, 0, t) * rot;
      const ProjectiveMap g = ProjectiveMap::from_matrix(gamma);
      double gauge = std::numeric_limits<double>::infinity();
      for (const Mat& k_mat : stabilizer) {
        gauge = std::min(gauge, proximity_gauge(g, ProjectiveMap::from_matrix(k_mat)));
      }
      samples.push_back(DisplacementGaugeSample{"ellipsoid", t, t, gauge});
    }
  }

  // simplex: standardize once, conjugate diagonal flows and permutations
  {
    FamilyParams params;
    params.permutations = true;
    params.diagonal = {1.0, 1.0, 1.0};
    const BodyFamily family = make_family("simplex", 2, params);
    const ProjectivePoint centroid(Vec::Ones(3));
    const StandardizationResult standardization =
        standardize(MarkedBody(family.body, centroid));
    const Mat g0 = standardization.g.matrix();
    const Mat g0_inv = standardization.g.inverse().matrix();

    std::vector<Mat> perms;
    for (const std::vector<int>& p :
         std::vector<std::vector<int>>{{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                       {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}) {
      Mat m = Mat::Zero(3, 3);
      for (int i = 0; i < 3; ++i) m(p[i], i) = 1.0;
      perms.push_back(g0 * m * g0_inv);
    }
    const MarkedBody standard_pair =
        transform_marked(MarkedBody(family.body, centroid), standardization.g);
    for (int k = 0; k < 24; ++k) {
      const double u = 2.0 * std::pow(0.005 / 2.0, k / 23.0);
      Mat d = Mat::Zero(3, 3);
      d.diagonal() << std::exp(u), 1.0, std::exp(-u);
      const std::size_t pick = std::min<std::size_t>(5, static_cast<std::size_t>(unif(rng) * 6));
      const Mat gamma = g0 * d * g0_inv * perms[pick];
      const ProjectiveMap g = ProjectiveMap::from_matrix(gamma);
      const double disp = displacement(standard_pair.body, g, standard_pair.basepoint);
      double gauge = std::numeric_limits<double>::infinity();
      for (const Mat& k_mat : perms) {
        gauge = std::min(gauge, proximity_gauge(g, ProjectiveMap::from_matrix(k_mat)));
      }
      samples.push_back(DisplacementGaugeSample{"simplex", u, disp, gauge});
    }
  }
  return samples;
}

/// Monotone envelope: the largest stabilizer gauge among samples displaced
/// at most eps.
inline double gauge_envelope(const std::vector<DisplacementGaugeSample>& samples,
                             double eps) {
  double worst = 0.0;
  for (const DisplacementGaugeSample& s : samples) {
    if (s.displacement <= eps) worst = std::max(worst, s.gauge_to_stabilizer);
  }
  return worst;
}

inline Json displacement_gauge_to_json(const std::vector<DisplacementGaugeSample>& samples) {
  Json rows = Json::array();
  for (const DisplacementGaugeSample& s : samples) {
    Json r;
    r["family"] = s.family;
    r["parameter"] = s.parameter;
    r["displacement"] = s.displacement;
    r["gauge_to_stabilizer"] = s.gauge_to_stabilizer;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace hilbertlab
