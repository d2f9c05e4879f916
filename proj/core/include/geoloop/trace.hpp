#pragma once

// Curves on the tetrahedron surface: per-face geodesic pieces joined across
// edges, traced by local unrolling.

#include "geoloop/develop.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geoloop {

struct EdgePoint {
  EdgeId edge = 0;
  double t = 0.0;  // fraction from edge_vertices(edge)[0]
};

struct SurfacePoint {
  enum class Incidence { Interior, Edge, Vertex };
  FaceId face = 0;
  ModelPoint position;  // canonical chart of `face`
  Incidence incidence = Incidence::Interior;
  EdgeId edge = -1;
  double param = 0.0;
  VertexId vertex = -1;

  static SurfacePoint interior(const TetraMetric& t, FaceId f, const ModelPoint& x);
  static SurfacePoint on_edge(const TetraMetric& t, FaceId f, EdgeId e, double param);
  static SurfacePoint at_vertex(const TetraMetric& t, FaceId f, VertexId v);
};

struct CurveSegment {
  FaceId face = 0;
  ModelPoint start;  // canonical chart of `face`
  ModelPoint end;
  double length = 0.0;
  std::optional<EdgePoint> enter;
  std::optional<EdgePoint> exit;
};

enum class StopReason { Closed, VertexHit, MaxLength, Endpoint };
const char* to_string(StopReason r);

struct SurfaceCurve {
  std::vector<CurveSegment> segments;
  SurfacePoint start;
  SurfacePoint end;
  bool closed = false;
  std::optional<VertexId> loop_vertex;
  StopReason stop = StopReason::Endpoint;
  std::optional<VertexId> hit_vertex;  // StopReason::VertexHit
  Vec3 start_direction = Vec3::Zero();  // chart of start.face
  double closure_error = 0.0;           // position + direction mismatch at closure

  double length() const;
  /// Edge crossings in order; a closed curve's return to its start edge counts once.
  std::vector<EdgePoint> crossings() const;
};

struct CrossingSignature {
  std::array<int, 6> counts{};
  std::optional<std::pair<int, int>> type;
  // True when counts follow the labelled convention: p on A1A3/A2A4, q on
  // A1A4/A2A3, p+q on A1A2/A3A4.
  bool aligned = false;
};

/// Start on edge e of face f at fraction `param`, heading `angle` away from the
/// edge direction (lower to higher vertex) into the face.
struct ShotStart {
  SurfacePoint point;
  Vec3 direction;
};
ShotStart edge_start(const TetraMetric& t, FaceId f, EdgeId e, double param, double angle);
/// Interior start with direction `angle` measured from the chart's first axis
/// carried to the point.
ShotStart interior_start(const TetraMetric& t, FaceId f, const ModelPoint& x, double angle);

SurfaceCurve shoot(const TetraMetric& t, const SurfacePoint& start, const Vec3& direction, double max_length,
                   const Tolerances& tol = {});
/// Shoots from a vertex: `direction` is a tangent at the vertex in the chart of
/// face f, which must contain the germ.
SurfaceCurve shoot_from_vertex(const TetraMetric& t, FaceId f, VertexId v, const Vec3& direction,
                               double max_length, const Tolerances& tol = {});

struct SimplicityReport {
  bool simple = true;
  std::optional<ModelPoint> witness;
  FaceId face = -1;
  int first = -1;  // segment indices
  int second = -1;
  std::string reason;
};
SimplicityReport is_simple(const SurfaceCurve& c, const Tolerances& tol = {});

CrossingSignature signature(const SurfaceCurve& c);
/// Type from crossing counts; a loop at vertex v uses the face opposite v.
std::optional<std::pair<int, int>> classify_counts(const std::array<int, 6>& counts, bool* aligned = nullptr);
std::optional<std::pair<int, int>> classify_loop(const std::array<int, 6>& counts, VertexId v);

/// Edge schedule of the type-(p,q) closed geodesic on the flat regular
/// tetrahedron.
CuttingSequence cutting_sequence(int p, int q, const Tolerances& tol = {});

/// Applies a vertex relabelling to a schedule: vertex v becomes perm[v].
CuttingSequence relabel_sequence(const CuttingSequence& s, const std::array<VertexId, 4>& perm);

/// Restarts a closed schedule at the crossing of its base edge nearest to
/// endpoint v of that edge.
CuttingSequence anchor_sequence(const CuttingSequence& s, VertexId v);

/// Largest deviation from straightness across the junctions of a curve.
double junction_residual(const TetraMetric& t, const SurfaceCurve& c);

/// Folds a walk through a development into a surface curve.
SurfaceCurve fold(const Development& d, const CrossingReport& r, const Tolerances& tol = {});

struct ClearanceEntry {
  VertexId vertex = 0;
  int image = 0;
  int placed = 0;  // face whose chart realized the minimum
  double d = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // sinh d - cos(half angle) sinh h
  double wrap_margin = 0.0;  // tanh d - cos(half angle) tanh h
  bool applicable = true;
};

/// Distance from every vertex image not identified with `loop_vertex` to the
/// developed curve (walk pieces), against the clearance bound.
std::vector<ClearanceEntry> clearance_check(const TetraMetric& t, const CrossingReport& walk, const Development& dev,
                                            std::optional<VertexId> loop_vertex, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Sweeps from a vertex

/// Directions at v are parametrized by the angle theta in [0, total angle),
/// turning through the incident faces in a fixed order.
struct FanDirection {
  FaceId face = 0;
  Vec3 direction;
};
FanDirection fan_direction(const TetraMetric& t, VertexId v, double theta);
/// Inverse of fan_direction for a germ at v inside face f.
double fan_angle(const TetraMetric& t, VertexId v, FaceId f, const Vec3& direction);

struct SweepReturn {
  double angle = 0.0;
  SurfaceCurve curve;  // closed, loop_vertex = v
  bool simple = false;
  CrossingSignature sig;
  double end_angle = 0.0;  // fan angle of the reversed arrival direction
};

struct SweepReport {
  VertexId vertex = 0;
  int directions = 0;
  double cap = 0.0;
  int events = 0;  // resolved returns before deduplication
  std::vector<SweepReturn> returns;
};

/// Shoots `directions` evenly spaced rays from v up to length `cap` and
/// resolves, by bisection between neighbouring rays, every direction whose
/// geodesic comes back into v.
SweepReport vertex_sweep(const TetraMetric& t, VertexId v, int directions, double cap, const Tolerances& tol = {});

/// Straight loop at v through the strip of faces entered by `edges` from face
/// f, joining the first and last images of v. On the sphere `hint` picks the
/// arc. nullopt when that segment leaves the strip or hits another vertex.
std::optional<SurfaceCurve> loop_along(const TetraMetric& t, VertexId v, FaceId f, const std::vector<EdgeId>& edges,
                                       std::optional<Vec3> hint = std::nullopt, const Tolerances& tol = {});

}  // namespace geoloop
