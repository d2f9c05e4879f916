#pragma once

// Intrinsic tetrahedron metrics: six edge lengths on a model of curvature
// +1, 0 or -1, with derived face angles, canonical face charts and per-vertex
// data. Vertices are 0..3 (printed A1..A4); face f is the face opposite vertex f.

#include "geoloop/kernel.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace geoloop {

using VertexId = int;
using EdgeId = int;
using FaceId = int;

namespace topo {

inline constexpr int kVertices = 4;
inline constexpr int kEdges = 6;
inline constexpr int kFaces = 4;

/// Edge e joins edge_vertices(e)[0] < edge_vertices(e)[1].
std::array<VertexId, 2> edge_vertices(EdgeId e);
EdgeId edge_between(VertexId a, VertexId b);
EdgeId opposite_edge(EdgeId e);
/// Vertices of face f in increasing order.
std::array<VertexId, 3> face_vertices(FaceId f);
std::array<EdgeId, 3> face_edges(FaceId f);
bool face_has_vertex(FaceId f, VertexId v);
bool face_has_edge(FaceId f, EdgeId e);
/// The other face bounded by e.
FaceId across(FaceId f, EdgeId e);
/// Vertex of f not on e.
VertexId apex_of(FaceId f, EdgeId e);
/// The three faces around v in cyclic order.
std::array<FaceId, 3> faces_around(VertexId v);

std::string vertex_name(VertexId v);
std::string edge_name(EdgeId e);
std::string face_name(FaceId f);
std::optional<VertexId> parse_vertex(const std::string& s);
std::optional<EdgeId> parse_edge(const std::string& s);
std::optional<FaceId> parse_face(const std::string& s);

}  // namespace topo

struct Violation {
  std::string code;
  std::string message;
  bool fatal = true;
  std::optional<FaceId> face;
  std::optional<VertexId> vertex;
};

struct VertexData {
  VertexId vertex = 0;
  double angle_sum = 0.0;   // total face angle at the vertex
  double half_angle = 0.0;  // angle_sum / 2
  double height = 0.0;      // min distance to the opposite edges of the incident faces
  std::optional<double> clearance_bound;  // arcsinh(cos(half) sinh(height)), hyperbolic with half < pi/2
  bool bound_applicable = false;
  // artanh(cos(half) tanh(height)): a straight chord closer than this to the
  // vertex meets its own turn around the cone inside the embedded disk.
  std::optional<double> wrap_bound;
};

class TetraMetric {
 public:
  TetraMetric() = default;
  /// Edge lengths indexed by EdgeId. Face angles are derived eagerly; faces
  /// that are not valid triangles get NaN angles (see validate()).
  TetraMetric(Curvature k, const std::array<double, 6>& edges);

  static TetraMetric regular_from_angle(Curvature k, double face_angle);
  static TetraMetric regular_from_edge(Curvature k, double edge);
  /// Disphenoid whose four congruent faces have angles (a, b, c); opposite
  /// edges are equal. Curved models only.
  static TetraMetric equifacial(Curvature k, double a, double b, double c);

  Curvature kappa() const { return kappa_; }
  double edge(EdgeId e) const { return edges_[e]; }
  double edge(VertexId a, VertexId b) const { return edges_[topo::edge_between(a, b)]; }
  const std::array<double, 6>& edges() const { return edges_; }

  /// Angle of face f at its vertex v.
  double face_angle(FaceId f, VertexId v) const;
  double angle_sum(VertexId v) const;
  bool faces_valid() const { return faces_valid_; }
  bool is_regular(double tol = 1e-12) const;

  /// Canonical chart of face f: first vertex at the base point, second along
  /// e1, third on the positive side. Indexed by position in face_vertices(f).
  const std::array<ModelPoint, 3>& chart(FaceId f) const { return charts_[f]; }
  const ModelPoint& chart_vertex(FaceId f, VertexId v) const;

  /// Relabels vertices: vertex v of the result is vertex perm[v] of this.
  TetraMetric relabeled(const std::array<VertexId, 4>& perm) const;

 private:
  Curvature kappa_ = Curvature::Flat;
  std::array<double, 6> edges_{};
  std::array<std::array<double, 4>, 4> angles_{};  // [face][vertex]
  std::array<std::array<ModelPoint, 3>, 4> charts_{};
  bool faces_valid_ = false;
};

std::vector<Violation> validate(const TetraMetric& t, const Tolerances& tol = {});
bool is_valid(const std::vector<Violation>& violations);

VertexData vertex_data(const TetraMetric& t, VertexId v, const Tolerances& tol = {});

}  // namespace geoloop
