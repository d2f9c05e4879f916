#pragma once

// SVG drawings of developments and the curves walked through them.

#include "geoloop/develop.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geoloop {

enum class Projection { Stereographic, Poincare, Plane };
const char* to_string(Projection p);
std::optional<Projection> parse_projection(const std::string& s);
/// The curvature each projection draws.
Curvature projection_curvature(Projection p);

struct SvgOptions {
  int width = 800;
  int samples = 24;  // points per geodesic side
  std::string title;
};

/// Face polygons, gluing edges, labelled vertex images and the pieces of
/// each walk. Throws InvalidArgument when the projection does not match the
/// development's curvature. Output depends only on the inputs.
std::string render_svg(const Development& d, Projection proj, const std::vector<CrossingReport>& walks,
                       const SvgOptions& opt = {});

}  // namespace geoloop
