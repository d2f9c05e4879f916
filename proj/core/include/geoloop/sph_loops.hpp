#pragma once

// Simple geodesic loops on spherical tetrahedra. A simple loop at an apex
// crosses two edges of the opposite face that meet at a "middle" vertex, so
// each apex has three candidates, one per middle vertex. Each is decided by
// walking the great circle through the two apex images of the three-face
// strip around the middle vertex.

#include "geoloop/trace.hpp"

#include <string>
#include <vector>

namespace geoloop {

enum class CandidateStatus { Unresolved, Exists, Blocked };
const char* to_string(CandidateStatus s);

struct LoopCandidate {
  VertexId apex = 0;
  VertexId middle = 0;
  std::array<EdgeId, 2> edges{};  // middle-x then middle-y, both on the face opposite apex
  Development development;
  ModelPoint first_image;  // apex images, model coordinates
  ModelPoint last_image;
  double separation = 0.0;  // distance between the apex images

  CandidateStatus status = CandidateStatus::Unresolved;
  std::optional<SurfaceCurve> curve;  // Exists
  CrossingReport walk;                // the deciding walk
  std::string witness;                // Blocked: "vertex hit", "boundary exit", "start outside", "antipodal"
  std::optional<VertexId> witness_vertex;
  std::optional<EdgeId> witness_edge;
  double margin = 0.0;  // distance of the deciding walk from the nearest obstruction
};

std::vector<LoopCandidate> enumerate_candidates(const TetraMetric& t, VertexId apex, const Tolerances& tol = {});

/// Walks the great circle through the apex images: the minor arc, the major
/// arc, then the minor arc plus one full turn (possible when the cone angle at
/// the middle vertex exceeds 2pi). When the images coincide, the great circle
/// perpendicular to the apex-middle edge is used.
LoopCandidate resolve_candidate(LoopCandidate c, const Tolerances& tol = {});

/// True when all face angles and edges exceed pi/2.
bool three_loop_hypotheses(const TetraMetric& t);
/// True when every face angle lies in (pi/3, pi/2).
bool no_loop_hypotheses(const TetraMetric& t);

struct PoleCertificate {
  ModelPoint pole;       // model coordinates of the strip development
  double to_middle = 0;  // distance from the pole to the middle vertex image
  std::vector<double> to_others;  // distances to the other vertex images (apex excluded)
  double to_apex_first = 0;       // both pi/2 by construction
  double to_apex_last = 0;
  bool holds = false;  // to_middle < pi/2 and all to_others > pi/2
};

struct ConstructedLoop {
  SurfaceCurve curve;
  PoleCertificate certificate;
  CrossingReport walk;
};

/// The loop as the great circle of radius pi/2 about a pole on the far
/// bisector of the fan at the middle vertex. Requires three_loop_hypotheses.
ConstructedLoop construct_loop(const TetraMetric& t, VertexId apex, VertexId middle, const Tolerances& tol = {});

struct CensusRow {
  VertexId apex = 0;
  std::vector<LoopCandidate> candidates;
};

struct LoopCensus {
  std::string regime;  // "three loops", "no loops", "outside proven range"
  std::vector<CensusRow> rows;
  int exists() const;
};

LoopCensus loop_census(const TetraMetric& t, const Tolerances& tol = {});

/// Largest deviation between two curves with the same face sequence.
double curve_distance(const SurfaceCurve& a, const SurfaceCurve& b);

}  // namespace geoloop
