#pragma once

// Developments: sequences of tetrahedron faces laid out on the model surface by
// successive edge gluings, plus straight-segment walks through them.
//
// Every placed face k keeps its canonical chart; glue(k) maps chart k into
// chart k-1 and placement(k) = placement(k-1) * glue(k) maps it into the model.
// Long hyperbolic strips make placement() large, so the walkers only use the
// relative gluing maps.

#include "geoloop/tetra.hpp"

#include <optional>
#include <vector>

namespace geoloop {

/// The fixed combinatorics of the tetrahedron.
struct FaceAdjacency {
  std::array<std::array<EdgeId, 3>, 4> edges;       // face -> its edges
  std::array<std::array<FaceId, 3>, 4> neighbours;  // face -> face across edges[f][i]
  static FaceAdjacency tetrahedron();
};

/// Edge-crossing schedule of a (p,q) curve. edges[0] and edges.back() are both
/// the base edge; faces[i] lies between edges[i] and edges[i+1].
struct CuttingSequence {
  std::vector<EdgeId> edges;
  std::vector<FaceId> faces;
  int p = 0;
  int q = 0;
  std::array<VertexId, 4> relabel{0, 1, 2, 3};  // applied when the input had p > q
  double offset = 0.0;                          // start parameter on the base edge
  std::vector<double> params;                   // flat crossing parameter of each entry of edges
  int crossings() const { return static_cast<int>(edges.size()) - 1; }
};

struct PlacedFace {
  FaceId face = 0;
  Isometry2 placement;
  Isometry2 glue;  // chart k -> chart k-1; identity for k = 0
};

struct GluingEdge {
  EdgeId edge = 0;
  int from = 0;  // placed index k-1
  int to = 0;    // placed index k
  ModelPoint a;  // image of edge_vertices(edge)[0]
  ModelPoint b;
};

/// One point of the development that several face corners glue to.
struct VertexImage {
  VertexId vertex = 0;
  ModelPoint point;
  std::vector<int> faces;  // placed indices, increasing and contiguous
  double angle = 0.0;      // sum of the face angles at this image
};

class Development {
 public:
  const TetraMetric& metric() const { return metric_; }
  Curvature kappa() const { return metric_.kappa(); }
  int size() const { return static_cast<int>(faces_.size()); }
  const std::vector<PlacedFace>& faces() const { return faces_; }
  const PlacedFace& face(int k) const { return faces_.at(k); }
  const std::vector<GluingEdge>& gluings() const { return gluings_; }
  const std::vector<VertexImage>& images() const { return images_; }

  /// Index into images() of vertex v of placed face k.
  int image_index(int k, VertexId v) const;
  std::vector<ModelPoint> images_of(VertexId v) const;
  /// Vertex v of placed face k in its own chart and in the model.
  const ModelPoint& corner(int k, VertexId v) const;
  ModelPoint global(int k, VertexId v) const;
  /// Maps chart `from` into chart `to`.
  Isometry2 relative(int from, int to) const;

  bool overlapping() const { return overlapping_; }
  double max_residual() const { return max_residual_; }

 private:
  friend Development unroll(const TetraMetric&, FaceId, const std::vector<EdgeId>&, const Isometry2&,
                            const Tolerances&);
  TetraMetric metric_;
  std::vector<PlacedFace> faces_;
  std::vector<GluingEdge> gluings_;
  std::vector<VertexImage> images_;
  std::vector<std::array<int, 4>> image_of_;  // [placed][vertex], -1 if absent
  bool overlapping_ = false;
  double max_residual_ = 0.0;
};

/// Isometry taking the chart of face `to` onto the far side of edge e in the
/// chart of face `from`.
Isometry2 gluing_map(const TetraMetric& t, FaceId from, FaceId to, EdgeId e);

/// Lays out `first` and then crosses each edge of `crossed` in turn.
Development unroll(const TetraMetric& t, FaceId first, const std::vector<EdgeId>& crossed,
                   const Isometry2& base, const Tolerances& tol = {});
Development unroll(const TetraMetric& t, FaceId first, const std::vector<EdgeId>& crossed,
                   const Tolerances& tol = {});
/// D(p,q): faces[0..N-1] glued along edges[1..N-1]. With `closed`, the last
/// crossing is glued too, giving a second copy of the first face.
Development unroll(const TetraMetric& t, const CuttingSequence& seq, bool closed = false,
                   const Tolerances& tol = {});

/// Three-face strip around `middle`: face (apex, middle, x), the face opposite
/// the apex, face (apex, middle, y), with x < y. Crosses middle-x then middle-y.
Development vertex_pair_development(const TetraMetric& t, VertexId apex, VertexId middle,
                                    const Tolerances& tol = {});

/// Intrinsic convexity: every vertex image has total angle <= pi + eps_geom.
bool is_convex(const Development& d, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Walking

/// First exit of the geodesic s -> exp(q, w, s), s >= s_min, from face f
/// (chart coordinates). The ray must start inside the closed face.
struct FaceExit {
  double s = 0.0;
  EdgeId edge = -1;
  ModelPoint point;
  double edge_param = 0.0;          // in [0,1] from edge_vertices(edge)[0]
  std::optional<VertexId> vertex;  // exit within eps_vertex of this corner
  double vertex_distance = 0.0;    // distance from the exit to the nearest corner
};

FaceExit face_exit(const TetraMetric& t, FaceId f, const ModelPoint& q, const Vec3& w, double s_min,
                   const Tolerances& tol = {});

/// Where the germ of direction w at corner v of face f points.
struct Germ {
  enum Kind { Inside, Outside, AlongEdge } kind = Outside;
  VertexId toward = -1;  // AlongEdge: far end of the edge
};
Germ corner_germ(const TetraMetric& t, FaceId f, VertexId v, const Vec3& w, double eps);
bool germ_inside(const TetraMetric& t, FaceId f, VertexId v, const Vec3& w, double eps);

/// Fraction along edge e (from its lower vertex) of a point x in face f's chart.
double edge_parameter(const TetraMetric& t, FaceId f, EdgeId e, const ModelPoint& x);

enum class WalkOutcome { Success, VertexHit, BoundaryExit, StartOutside, EndOutside };
const char* to_string(WalkOutcome o);

struct WalkCrossing {
  int placed = 0;  // face being left
  EdgeId edge = 0;
  double param = 0.0;
  ModelPoint point;  // chart of `placed`
  double arclength = 0.0;
};

struct WalkPiece {
  int placed = 0;
  FaceId face = 0;
  ModelPoint start;  // chart coordinates
  ModelPoint end;
  double length = 0.0;
};

struct CrossingReport {
  WalkOutcome outcome = WalkOutcome::Success;
  std::vector<WalkCrossing> crossings;
  std::vector<WalkPiece> pieces;
  double length = 0.0;
  int placed = 0;  // face in which the walk stopped
  std::optional<int> vertex_image;
  std::optional<VertexId> vertex;
  std::optional<EdgeId> exit_edge;
  std::optional<ModelPoint> exit_point;  // chart of `placed`
  // Success: smallest distance from a crossing to the ends of its edge.
  // Failure: distance from the blocking point to the nearest corner.
  double margin = 0.0;
  bool ok() const { return outcome == WalkOutcome::Success; }
};

/// Endpoint of a walk: a point in the chart of a placed face.
struct WalkEnd {
  int placed = 0;
  ModelPoint point;
};

/// Walks a minimizing segment given in model coordinates.
CrossingReport walk_segment(const Development& d, const GeodesicSegment& s, const Tolerances& tol = {});
/// Walks exp(p, dir, t), 0 <= t <= length, given in model coordinates. The end
/// counts as reached at a vertex image if `end_image` is set.
CrossingReport walk_ray(const Development& d, const ModelPoint& p, const Vec3& dir, double length,
                        std::optional<int> end_image, const Tolerances& tol = {});
/// Walks the straight segment between two chart points using only local
/// charts. Endpoints at corners are matched to their vertex images.
CrossingReport walk_between(const Development& d, const WalkEnd& from, const WalkEnd& to,
                            const Tolerances& tol = {});

}  // namespace geoloop
