// Command-line runner for Hilbert-geometry experiments: distance queries,
// Benzecri standardization, displacement measurements, Margulis scans,
// SVG rendering and the invariant verification suite.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "hilbertlab/json_io.hpp"
#include "hilbertlab/scenario.hpp"
#include "hilbertlab/svg.hpp"
#include "hilbertlab/verification.hpp"

namespace {

using namespace hilbertlab;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(what + " is not valid JSON: " + e.what());
  }
}

ConvexBody load_body(const std::string& path) {
  return body_from_json(parse_json(read_file(path), "body file"));
}

ProjectivePoint parse_point(const std::string& text, int n) {
  return point_from_json(parse_json(text, "point"), n);
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(std::stod(token));
  }
  return out;
}

int run_distance(const std::string& body_path, const std::string& x_text,
                 const std::string& y_text, const std::string& out_path) {
  const ConvexBody body = load_body(body_path);
  const ProjectivePoint x = parse_point(x_text, body.dim());
  const ProjectivePoint y = parse_point(y_text, body.dim());
  const HilbertDistanceValue d = distance(body, x, y);
  std::cout << d.value << "\n";
  if (!out_path.empty()) {
    Json j;
    j["value"] = d.value;
    j["chord_a"] = vector_to_json(d.a.coords());
    j["chord_b"] = vector_to_json(d.b.coords());
    write_file(out_path, j.dump(2) + "\n");
  }
  return 0;
}

int run_standardize(const std::string& body_path, const std::string& x_text,
                    const std::string& out_path) {
  const ConvexBody body = load_body(body_path);
  const ProjectivePoint x = parse_point(x_text, body.dim());
  const StandardizationResult result = standardize(MarkedBody(body, x));
  const Json audit = standardization_to_json(result);
  std::cout << (result.certificate.valid() ? "standard pair reached" : "certificate invalid")
            << " after " << result.newton_iterations << " Newton steps (residual "
            << result.final_residual << ")\n";
  if (!out_path.empty()) write_file(out_path, audit.dump(2) + "\n");
  else std::cout << audit.dump(2) << "\n";
  return result.certificate.valid() ? 0 : 1;
}

int run_displacement(const std::string& body_path, const std::string& x_text,
                     const std::string& map_path) {
  const ConvexBody body = load_body(body_path);
  const ProjectivePoint x = parse_point(x_text, body.dim());
  const Json j = parse_json(read_file(map_path), "map file");
  try {
    const ProjectiveMap g = ProjectiveMap::from_matrix(matrix_from_json(j));
    std::cout << displacement(body, g, x) << "\n";
  } catch (const InvalidMatrix& e) {
    throw SchemaError(std::string("invalid map: ") + e.what());
  }
  return 0;
}

int run_scan(const std::string& scenario_path, long long seed_override,
             const std::string& out_prefix) {
  Json j = parse_json(read_file(scenario_path), "scenario file");
  if (seed_override >= 0) j["seed"] = static_cast<std::uint64_t>(seed_override);

  if (j.contains("experiment")) {
    if (j["experiment"] != "displacement_gauge") {
      throw SchemaError("unknown experiment: " + j["experiment"].dump());
    }
    const std::uint64_t seed = j.value("seed", 0ULL);
    const auto samples = displacement_gauge_experiment(seed);
    Json out;
    out["schema"] = kSchemaTag;
    out["experiment"] = "displacement_gauge";
    out["seed"] = seed;
    out["samples"] = displacement_gauge_to_json(samples);
    std::string csv = "family,parameter,displacement,gauge_to_stabilizer\n";
    for (const DisplacementGaugeSample& s : samples) {
      csv += s.family + "," + detail::format_double(s.parameter) + "," +
             detail::format_double(s.displacement) + "," +
             detail::format_double(s.gauge_to_stabilizer) + "\n";
    }
    if (!out_prefix.empty()) {
      write_file(out_prefix + ".json", out.dump(2) + "\n");
      write_file(out_prefix + ".csv", csv);
    } else {
      std::cout << csv;
    }
    return 0;
  }

  if (j.contains("scan")) {
    const Json& sc = j["scan"];
    if (!sc.contains("family") || !sc.contains("parameter_grid")) {
      throw SchemaError("aggregated scan needs \"family\" and \"parameter_grid\"");
    }
    std::vector<double> params;
    for (const Json& v : sc["parameter_grid"]) params.push_back(v.get<double>());
    if (!j.contains("epsilon_grid")) throw SchemaError("scan needs an \"epsilon_grid\"");
    std::vector<double> eps;
    for (const Json& v : j["epsilon_grid"]) eps.push_back(v.get<double>());
    const AggregatedScan agg =
        margulis_scan(sc["family"].get<std::string>(), sc.value("n", 2), params, eps,
                      j.value("depth", 1), j.value("seed", 0ULL));
    if (!out_prefix.empty()) {
      write_file(out_prefix + ".json", aggregated_to_json(agg).dump(2) + "\n");
      write_file(out_prefix + ".csv", aggregated_to_csv(agg));
    } else {
      std::cout << aggregated_to_csv(agg);
    }
    for (std::size_t i = 0; i < agg.configs.size(); ++i) {
      std::cout << agg.configs[i].family_tag << "@" << agg.configs[i].parameter
                << ": epsilon* = " << agg.epsilon_star[i]
                << (agg.monotone_consistent[i] ? "" : " (verdicts not monotone!)") << "\n";
    }
    return 0;
  }

  const Scenario scenario = scenario_from_json(j);
  const ScanReport report = run_scenario(scenario);
  if (!out_prefix.empty()) {
    write_file(out_prefix + ".json", report_to_json(report).dump(2) + "\n");
    write_file(out_prefix + ".csv", report_to_csv(report));
  } else {
    std::cout << report_to_csv(report);
  }
  return 0;
}

int run_render(const std::string& body_path, const std::string& x_text,
               const std::string& radii_text, const std::string& out_path) {
  const ConvexBody body = load_body(body_path);
  const ProjectivePoint x = parse_point(x_text, body.dim());
  const std::string svg = render_svg(body, x, parse_radii(radii_text));
  write_file(out_path, svg);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_verify(const std::string& selector) {
  const std::vector<CheckResult> results = verify_suite(selector);
  bool all_passed = true;
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " (" << r.detail << ")\n";
    all_passed = all_passed && r.passed;
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hilbertlab: cross-ratio distances, Benzecri standardization and "
               "Margulis scans on properly convex bodies"};
  app.require_subcommand(1);

  std::string body_path, x_text = "[0,0]", y_text, map_path, scenario_path;
  std::string out_path, radii_text, selector = "all";
  long long seed_override = -1;

  CLI::App* distance_cmd = app.add_subcommand("distance", "Hilbert distance between two points");
  distance_cmd->add_option("--body", body_path, "body JSON file")->required();
  distance_cmd->add_option("--x", x_text, "first point (JSON array)")->required();
  distance_cmd->add_option("--y", y_text, "second point (JSON array)")->required();
  distance_cmd->add_option("--out", out_path, "write value and chord endpoints as JSON");

  CLI::App* standardize_cmd =
      app.add_subcommand("standardize", "Benzecri standardization of a marked body");
  standardize_cmd->add_option("--body", body_path, "body JSON file")->required();
  standardize_cmd->add_option("--x", x_text, "basepoint (JSON array)")->required();
  standardize_cmd->add_option("--out", out_path, "write the audit record JSON");

  CLI::App* displacement_cmd =
      app.add_subcommand("displacement", "Hilbert displacement of a point by an automorphism");
  displacement_cmd->add_option("--body", body_path, "body JSON file")->required();
  displacement_cmd->add_option("--x", x_text, "basepoint (JSON array)")->required();
  displacement_cmd->add_option("--map", map_path, "matrix JSON file")->required();

  CLI::App* scan_cmd = app.add_subcommand("scan", "epsilon-subgroup scan from a scenario file");
  scan_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  scan_cmd->add_option("--seed", seed_override, "override the scenario seed");
  scan_cmd->add_option("--out", out_path, "output prefix (.json and .csv are appended)");

  CLI::App* render_cmd = app.add_subcommand("render", "SVG of a body with Hilbert balls");
  render_cmd->add_option("--body", body_path, "body JSON file")->required();
  render_cmd->add_option("--x", x_text, "ball center (JSON array)")->required();
  render_cmd->add_option("--radii", radii_text, "comma-separated Hilbert radii");
  render_cmd->add_option("--out", out_path, "output SVG path")->required();

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the invariant verification suite");
  verify_cmd->add_option("selector", selector,
                         "projective|body|metric|benzecri|group|scan|all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (distance_cmd->parsed()) return run_distance(body_path, x_text, y_text, out_path);
    if (standardize_cmd->parsed()) return run_standardize(body_path, x_text, out_path);
    if (displacement_cmd->parsed()) return run_displacement(body_path, x_text, map_path);
    if (scan_cmd->parsed()) return run_scan(scenario_path, seed_override, out_path);
    if (render_cmd->parsed()) return run_render(body_path, x_text, radii_text, out_path);
    if (verify_cmd->parsed()) return run_verify(selector);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const NotAnAutomorphism& e) {
    std::cerr << "not an automorphism: " << e.what() << "\n";
    return 3;
  } catch (const BallCapExceeded& e) {
    std::cerr << "ball cap exceeded: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
