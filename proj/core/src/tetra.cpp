#include "geoloop/tetra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoloop {

namespace topo {

namespace {
constexpr std::array<std::array<VertexId, 2>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
}

std::array<VertexId, 2> edge_vertices(EdgeId e) {
  if (e < 0 || e >= kEdges) throw GeometryError(ErrorKind::InvalidArgument, "edge id out of range");
  return kEdgeVertices[e];
}

EdgeId edge_between(VertexId a, VertexId b) {
  if (a == b || a < 0 || b < 0 || a >= kVertices || b >= kVertices)
    throw GeometryError(ErrorKind::InvalidArgument, "no edge between these vertices");
  if (a > b) std::swap(a, b);
  for (EdgeId e = 0; e < kEdges; ++e)
    if (kEdgeVertices[e][0] == a && kEdgeVertices[e][1] == b) return e;
  return -1;
}

EdgeId opposite_edge(EdgeId e) { return kEdges - 1 - e; }

std::array<VertexId, 3> face_vertices(FaceId f) {
  if (f < 0 || f >= kFaces) throw GeometryError(ErrorKind::InvalidArgument, "face id out of range");
  std::array<VertexId, 3> out{};
  int n = 0;
  for (VertexId v = 0; v < kVertices; ++v)
    if (v != f) out[n++] = v;
  return out;
}

std::array<EdgeId, 3> face_edges(FaceId f) {
  const auto v = face_vertices(f);
  return {edge_between(v[0], v[1]), edge_between(v[0], v[2]), edge_between(v[1], v[2])};
}

bool face_has_vertex(FaceId f, VertexId v) { return v != f; }

bool face_has_edge(FaceId f, EdgeId e) {
  const auto ev = edge_vertices(e);
  return ev[0] != f && ev[1] != f;
}

FaceId across(FaceId f, EdgeId e) {
  if (!face_has_edge(f, e)) throw GeometryError(ErrorKind::InvalidArgument, "edge not on face");
  const auto ev = edge_vertices(e);
  for (VertexId v = 0; v < kVertices; ++v)
    if (v != f && v != ev[0] && v != ev[1]) return v;
  return -1;
}

VertexId apex_of(FaceId f, EdgeId e) {
  // The vertex of f off e is the one the neighboring face is opposite to.
  return across(f, e);
}

std::array<FaceId, 3> faces_around(VertexId v) {
  std::array<FaceId, 3> out{};
  int n = 0;
  for (FaceId f = 0; f < kFaces; ++f)
    if (f != v) out[n++] = f;
  return out;
}

std::string vertex_name(VertexId v) { return "A" + std::to_string(v + 1); }

std::string edge_name(EdgeId e) {
  const auto ev = edge_vertices(e);
  return vertex_name(ev[0]) + vertex_name(ev[1]);
}

std::string face_name(FaceId f) {
  const auto fv = face_vertices(f);
  return vertex_name(fv[0]) + vertex_name(fv[1]) + vertex_name(fv[2]);
}

std::optional<VertexId> parse_vertex(const std::string& s) {
  for (VertexId v = 0; v < kVertices; ++v)
    if (s == vertex_name(v)) return v;
  return std::nullopt;
}

std::optional<EdgeId> parse_edge(const std::string& s) {
  for (EdgeId e = 0; e < kEdges; ++e) {
    const auto ev = edge_vertices(e);
    if (s == edge_name(e) || s == vertex_name(ev[1]) + vertex_name(ev[0])) return e;
  }
  return std::nullopt;
}

std::optional<FaceId> parse_face(const std::string& s) {
  for (FaceId f = 0; f < kFaces; ++f)
    if (s == face_name(f)) return f;
  return std::nullopt;
}

}  // namespace topo

namespace {
constexpr double kPi = std::numbers::pi;

Violation violation(std::string code, std::string message, bool fatal = true) {
  Violation v;
  v.code = std::move(code);
  v.message = std::move(message);
  v.fatal = fatal;
  return v;
}
}

TetraMetric::TetraMetric(Curvature k, const std::array<double, 6>& edges) : kappa_(k), edges_(edges) {
  faces_valid_ = true;
  for (auto& row : angles_) row.fill(std::numeric_limits<double>::quiet_NaN());
  for (FaceId f = 0; f < topo::kFaces; ++f) {
    const auto fv = topo::face_vertices(f);
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      const VertexId v = fv[i];
      const VertexId a = fv[(i + 1) % 3];
      const VertexId b = fv[(i + 2) % 3];
      const double opp = edge(a, b);
      const double s1 = edge(v, a);
      const double s2 = edge(v, b);
      if (!valid_triangle(opp, s1, s2, k)) {
        ok = false;
        break;
      }
      angles_[f][v] = solve_angle_from_sides(opp, s1, s2, k);
    }
    if (!ok) {
      faces_valid_ = false;
      continue;
    }
    // Canonical chart.
    const ModelPoint o = ModelPoint::base(k);
    const Vec3 e1(1, 0, 0);
    const double a0 = angles_[f][fv[0]];
    const Vec3 dir2(std::cos(a0), std::sin(a0), 0.0);
    charts_[f] = {o, exp_point(o, e1, edge(fv[0], fv[1])), exp_point(o, dir2, edge(fv[0], fv[2]))};
  }
}

TetraMetric TetraMetric::regular_from_angle(Curvature k, double face_angle) {
  switch (k) {
    case Curvature::Spherical:
      if (!(face_angle > kPi / 3 && face_angle < kPi))
        throw GeometryError(ErrorKind::NoRegularTetrahedron, "no regular tetrahedron with this face angle");
      break;
    case Curvature::Hyperbolic:
      if (!(face_angle > 0.0 && face_angle < kPi / 3))
        throw GeometryError(ErrorKind::NoRegularTetrahedron, "no regular tetrahedron with this face angle");
      break;
    case Curvature::Flat:
      if (std::abs(face_angle - kPi / 3) > 1e-12)
        throw GeometryError(ErrorKind::NoRegularTetrahedron, "no regular tetrahedron with this face angle");
      return regular_from_edge(k, 1.0);
  }
  const double a = solve_side_from_angles(face_angle, face_angle, face_angle, k);
  return regular_from_edge(k, a);
}

TetraMetric TetraMetric::regular_from_edge(Curvature k, double edge) {
  std::array<double, 6> e;
  e.fill(edge);
  return {k, e};
}

TetraMetric TetraMetric::equifacial(Curvature k, double a, double b, double c) {
  // Side opposite angle a is shared by edges A1A2 and A3A4, etc.
  const double la = solve_side_from_angles(a, b, c, k);
  const double lb = solve_side_from_angles(b, c, a, k);
  const double lc = solve_side_from_angles(c, a, b, k);
  std::array<double, 6> e{};
  e[topo::edge_between(0, 1)] = la;
  e[topo::edge_between(2, 3)] = la;
  e[topo::edge_between(0, 2)] = lb;
  e[topo::edge_between(1, 3)] = lb;
  e[topo::edge_between(0, 3)] = lc;
  e[topo::edge_between(1, 2)] = lc;
  return {k, e};
}

double TetraMetric::face_angle(FaceId f, VertexId v) const {
  if (!topo::face_has_vertex(f, v)) throw GeometryError(ErrorKind::InvalidArgument, "vertex not on face");
  return angles_[f][v];
}

double TetraMetric::angle_sum(VertexId v) const {
  double s = 0.0;
  for (FaceId f : topo::faces_around(v)) s += angles_[f][v];
  return s;
}

bool TetraMetric::is_regular(double tol) const {
  const auto [lo, hi] = std::minmax_element(edges_.begin(), edges_.end());
  return *hi - *lo <= tol * std::max(1.0, *hi);
}

const ModelPoint& TetraMetric::chart_vertex(FaceId f, VertexId v) const {
  const auto fv = topo::face_vertices(f);
  for (int i = 0; i < 3; ++i)
    if (fv[i] == v) return charts_[f][i];
  throw GeometryError(ErrorKind::InvalidArgument, "vertex not on face");
}

TetraMetric TetraMetric::relabeled(const std::array<VertexId, 4>& perm) const {
  std::array<double, 6> e{};
  for (EdgeId id = 0; id < topo::kEdges; ++id) {
    const auto ev = topo::edge_vertices(id);
    e[id] = edge(perm[ev[0]], perm[ev[1]]);
  }
  return {kappa_, e};
}

std::vector<Violation> validate(const TetraMetric& t, const Tolerances& tol) {
  std::vector<Violation> out;
  const Curvature k = t.kappa();
  for (EdgeId e = 0; e < topo::kEdges; ++e) {
    if (!(t.edge(e) > 0.0) || !std::isfinite(t.edge(e)))
      out.push_back(violation("non-positive edge", "edge " + topo::edge_name(e) + " must be finite and positive"));
  }
  if (!out.empty()) return out;

  for (FaceId f = 0; f < topo::kFaces; ++f) {
    const auto fv = topo::face_vertices(f);
    const double a = t.edge(fv[1], fv[2]);
    const double b = t.edge(fv[0], fv[2]);
    const double c = t.edge(fv[0], fv[1]);
    if (!valid_triangle(a, b, c, k)) {
      const std::string code = std::string("invalid ") + to_string(k) + " face";
      Violation v = violation(code, "face " + topo::face_name(f) + " is not a valid triangle");
      v.face = f;
      out.push_back(v);
    }
  }
  if (!out.empty()) return out;

  for (VertexId v = 0; v < topo::kVertices; ++v) {
    const double sum = t.angle_sum(v);
    if (sum >= 2.0 * kPi - tol.eps_geom) {
      // The metric is still a valid cone metric; it only fails convex
      // realizability in the ambient space.
      Violation w = violation("cone angle not below 2pi",
                            "total angle at " + topo::vertex_name(v) + " is " + std::to_string(sum), false);
      w.vertex = v;
      out.push_back(w);
    }
  }

  if (k != Curvature::Flat) {
    for (FaceId f = 0; f < topo::kFaces; ++f) {
      const auto fv = topo::face_vertices(f);
      for (int i = 0; i < 3; ++i) {
        const VertexId v = fv[i];
        const VertexId a = fv[(i + 1) % 3];
        const VertexId b = fv[(i + 2) % 3];
        double side = 0.0;
        try {
          side = solve_side_from_angles(t.face_angle(f, v), t.face_angle(f, a), t.face_angle(f, b), k);
        } catch (const GeometryError&) {
          side = std::numeric_limits<double>::quiet_NaN();
        }
        if (!(std::abs(side - t.edge(a, b)) <= tol.eps_trig * std::max(1.0, t.edge(a, b)))) {
          Violation w = violation("angle round-trip", "face " + topo::face_name(f) + " angles do not reproduce its sides");
          w.face = f;
          out.push_back(w);
          break;
        }
      }
    }
  }
  return out;
}

bool is_valid(const std::vector<Violation>& violations) {
  return std::none_of(violations.begin(), violations.end(), [](const Violation& v) { return v.fatal; });
}

VertexData vertex_data(const TetraMetric& t, VertexId v, const Tolerances& tol) {
  VertexData d;
  d.vertex = v;
  d.angle_sum = t.angle_sum(v);
  d.half_angle = 0.5 * d.angle_sum;
  d.height = std::numeric_limits<double>::infinity();
  for (FaceId f : topo::faces_around(v)) {
    const auto fv = topo::face_vertices(f);
    std::array<VertexId, 2> others{};
    int n = 0;
    for (VertexId w : fv)
      if (w != v) others[n++] = w;
    const GeodesicSegment opp = make_segment(t.chart_vertex(f, others[0]), t.chart_vertex(f, others[1]), tol);
    d.height = std::min(d.height, point_segment_distance(t.chart_vertex(f, v), opp, tol).distance);
  }
  if (t.kappa() == Curvature::Hyperbolic && d.half_angle < kPi / 2) {
    d.bound_applicable = true;
    d.clearance_bound = std::asinh(std::cos(d.half_angle) * std::sinh(d.height));
    d.wrap_bound = std::atanh(std::cos(d.half_angle) * std::tanh(d.height));
  }
  return d;
}

}  // namespace geoloop
