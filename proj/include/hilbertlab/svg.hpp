#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hilbertlab/hilbert_metric.hpp"

namespace hilbertlab {

namespace detail {

inline std::string svg_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct SvgFrame {
  Vec lo;
  double scale;
  double height;

  std::string map(const Vec& w) const {
    const double x = (w[0] - lo[0]) * scale;
    const double y = height - (w[1] - lo[1]) * scale;
    return svg_coord(x) + "," + svg_coord(y);
  }
};

inline std::string polyline_path(const SvgFrame& frame, const std::vector<Vec>& pts,
                                 bool closed) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i == 0 ? "M" : " L");
    d += frame.map(pts[i]);
  }
  if (closed) d += " Z";
  return d;
}

}  // namespace detail

/// Illustration SVG: body outline, basepoint, and Hilbert ball boundary
/// curves for the requested radii. Two-dimensional bodies only; fixed
/// 512x512 viewbox with a 5% margin.
inline std::string render_svg(const ConvexBody& body, const ProjectivePoint& basepoint,
                              const std::vector<double>& radii, int samples_per_ball = 96) {
  if (body.dim() != 2) throw UnsupportedDimension("render_svg draws plane bodies only");
  const AffineChart chart =
      body.kind() == ConvexBody::Kind::Polytope ? body.chart() : AffineChart::standard(2);
  if (body.contains(basepoint) != Location::Interior) {
    throw PointOutsideBody("render_svg: basepoint must be interior");
  }

  std::vector<Vec> outline;
  if (body.kind() == ConvexBody::Kind::Polytope) {
    outline = body.vertices();  // ring order from the hull
  } else {
    const AffineEllipsoid e = body.affine_form(chart);
    for (int i = 0; i < 256; ++i) {
      const double theta = 2.0 * M_PI * i / 256;
      Vec u(2);
      u << std::cos(theta), std::sin(theta);
      outline.push_back(e.center + e.shape * u);
    }
  }

  const auto [lo_raw, hi_raw] = body.bounding_box(chart);
  const double span = std::max(hi_raw[0] - lo_raw[0], hi_raw[1] - lo_raw[1]);
  const double margin = 0.05 * span / 0.9;
  detail::SvgFrame frame;
  frame.lo = lo_raw.array() - margin;
  frame.scale = 512.0 / (span / 0.9);
  frame.height = 512.0;

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 512 512\" "
      "width=\"512\" height=\"512\">\n";
  svg += "  <path d=\"" + detail::polyline_path(frame, outline, true) +
         "\" fill=\"none\" stroke=\"#202020\" stroke-width=\"2\"/>\n";

  for (double r : radii) {
    std::vector<Vec> curve;
    for (const ProjectivePoint& p : ball_boundary_samples(body, basepoint, r,
                                                          samples_per_ball)) {
      curve.push_back(chart.coords(p));
    }
    svg += "  <path d=\"" + detail::polyline_path(frame, curve, true) +
           "\" fill=\"none\" stroke=\"#2060c0\" stroke-width=\"1\"/>\n";
  }

  const Vec x = chart.coords(basepoint);
  svg += "  <circle cx=\"" + detail::svg_coord((x[0] - frame.lo[0]) * frame.scale) +
         "\" cy=\"" + detail::svg_coord(frame.height - (x[1] - frame.lo[1]) * frame.scale) +
         "\" r=\"3\" fill=\"#c03030\"/>\n";
  svg += "</svg>\n";
  return svg;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
}

}  // namespace hilbertlab
