#pragma once

// JSON documents: tetrahedron specs in, loop and trace reports out.

#include "geoloop/hyp_loops.hpp"
#include "geoloop/sph_loops.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace geoloop {

/// Malformed or non-conforming input document.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TetraSpec {
  nlohmann::json source;  // the document as read
  Curvature kappa = Curvature::Flat;
  TetraMetric metric;
  // Set when the document is well formed but names no tetrahedron
  // (e.g. a regular face angle out of range); metric is then unusable.
  std::optional<Violation> construction_error;
};

/// Strict parse: unknown or missing fields, non-finite or non-positive numbers
/// throw SchemaError.
TetraSpec parse_tetra_spec(const nlohmann::json& doc);
TetraSpec read_tetra_spec(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

/// Validation findings: construction failure or validate() violations.
std::vector<Violation> spec_violations(const TetraSpec& spec, const Tolerances& tol = {});
nlohmann::json violation_json(const Violation& v);

nlohmann::json edge_point_json(const EdgePoint& p);
nlohmann::json segments_json(const SurfaceCurve& c);
nlohmann::json signature_json(const CrossingSignature& s);
nlohmann::json numerics_json(const Tolerances& tol, double max_residual);

/// Report for one spherical candidate (status "exists" or "blocked").
nlohmann::json candidate_report(const TetraSpec& spec, const LoopCandidate& c, const Tolerances& tol = {});
/// Report for a (p,q) loop at a vertex; "blocked" when the walk failed.
nlohmann::json loop_report(const TetraSpec& spec, const LoopResult& r, const Tolerances& tol = {});
nlohmann::json error_report(const TetraSpec& spec, VertexId vertex, std::optional<std::pair<int, int>> type,
                            const std::string& message, const Tolerances& tol = {});
nlohmann::json trace_report(const SurfaceCurve& c, const Tolerances& tol = {});

struct ReportCheck {
  bool chained = true;     // consecutive segments share their crossing edge point
  bool counts_match = true;  // signature equals a recount of the crossings
  std::string status;
  std::vector<std::string> problems;
  bool ok() const { return chained && counts_match; }
};

/// Re-reads a loop report and re-checks its internal consistency.
ReportCheck verify_report(const nlohmann::json& report, double eps = 1e-9);

}  // namespace geoloop
