#include "geoloop/develop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace geoloop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 tangent_lift(Curvature k, const Vec3& w) {
  return k == Curvature::Flat ? Vec3(w.x(), w.y(), 0.0) : w;
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

// Centroid-like interior point of a triangle.
ModelPoint inner_point(const std::array<ModelPoint, 3>& tri) {
  const Curvature k = tri[0].kappa();
  const Vec3 s = tri[0].lift() + tri[1].lift() + tri[2].lift();
  return from_lift(k, s);
}

bool strictly_inside(const std::array<ModelPoint, 3>& tri, const ModelPoint& x, double eps) {
  const double o = orient(tri[0], tri[1], tri[2]);
  const double s = o > 0 ? 1.0 : -1.0;
  const Vec3 xl = x.lift();
  for (int i = 0; i < 3; ++i) {
    const Vec3 m = tri[i].lift().cross(tri[(i + 1) % 3].lift());
    if (s * m.dot(xl) <= eps * m.norm() * xl.norm()) return false;
  }
  return true;
}

bool interiors_overlap(const std::array<ModelPoint, 3>& t1, const std::array<ModelPoint, 3>& t2,
                       const Tolerances& tol) {
  for (int i = 0; i < 3; ++i) {
    if (strictly_inside(t1, t2[i], 1e-9) || strictly_inside(t2, t1[i], 1e-9)) return true;
  }
  if (strictly_inside(t1, inner_point(t2), 1e-9) || strictly_inside(t2, inner_point(t1), 1e-9)) return true;
  for (int i = 0; i < 3; ++i) {
    const GeodesicSegment a{t1[i], t1[(i + 1) % 3], dist(t1[i], t1[(i + 1) % 3])};
    for (int j = 0; j < 3; ++j) {
      const GeodesicSegment b{t2[j], t2[(j + 1) % 3], dist(t2[j], t2[(j + 1) % 3])};
      try {
        if (intersect_segments(a, b, tol)) return true;
      } catch (const GeometryError&) {
        // Shared or collinear edges do not by themselves overlap interiors.
      }
    }
  }
  return false;
}

// Model point from a homogeneous vector, or nullopt when it is too far out to
// be represented accurately.
std::optional<ModelPoint> near_point(Curvature k, const Vec3& h) {
  if (k == Curvature::Hyperbolic) {
    const double q = -form(k, h, h);
    if (!(q > 1e-8 * h.squaredNorm())) return std::nullopt;
  }
  if (k == Curvature::Flat && std::abs(h.z()) < 1e-12) return std::nullopt;
  return from_lift(k, h);
}

}  // namespace

FaceAdjacency FaceAdjacency::tetrahedron() {
  FaceAdjacency a{};
  for (FaceId f = 0; f < topo::kFaces; ++f) {
    a.edges[f] = topo::face_edges(f);
    for (int i = 0; i < 3; ++i) a.neighbours[f][i] = topo::across(f, a.edges[f][i]);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Development accessors

int Development::image_index(int k, VertexId v) const {
  const int i = image_of_.at(k).at(v);
  if (i < 0) throw GeometryError(ErrorKind::InvalidArgument, "vertex not on placed face");
  return i;
}

std::vector<ModelPoint> Development::images_of(VertexId v) const {
  std::vector<ModelPoint> out;
  for (const auto& im : images_)
    if (im.vertex == v) out.push_back(im.point);
  return out;
}

const ModelPoint& Development::corner(int k, VertexId v) const {
  return metric_.chart_vertex(faces_.at(k).face, v);
}

ModelPoint Development::global(int k, VertexId v) const { return faces_.at(k).placement.apply(corner(k, v)); }

Isometry2 Development::relative(int from, int to) const {
  if (from == to) return Isometry2::identity(kappa());
  if (from < to) return relative(to, from).inverse();
  Isometry2 r = faces_.at(to + 1).glue;
  for (int k = to + 2; k <= from; ++k) r = r * faces_[k].glue;
  return r;
}

// ---------------------------------------------------------------------------
// Construction

Isometry2 gluing_map(const TetraMetric& t, FaceId from, FaceId to, EdgeId e) {
  if (!topo::face_has_edge(from, e) || topo::across(from, e) != to)
    throw GeometryError(ErrorKind::NotGluingSchedule, "faces do not meet along this edge");
  const auto ev = topo::edge_vertices(e);
  const ModelPoint& p0 = t.chart_vertex(from, ev[0]);
  const ModelPoint& q0 = t.chart_vertex(from, ev[1]);
  const ModelPoint& p1 = t.chart_vertex(to, ev[0]);
  const ModelPoint& q1 = t.chart_vertex(to, ev[1]);
  const Isometry2 frame0 = Isometry2::frame(p0, log_dir(p0, q0));
  const Isometry2 frame1 = Isometry2::frame(p1, log_dir(p1, q1));
  // The apex of `from` is vertex `to` and vice versa.
  const double side0 = orient(p0, q0, t.chart_vertex(from, to));
  const double side1 = orient(p1, q1, t.chart_vertex(to, from));
  Isometry2 g = frame0 * frame1.inverse();
  if ((side0 > 0) == (side1 > 0)) g = frame0 * Isometry2::base_reflection(t.kappa()) * frame1.inverse();
  return g;
}

Development unroll(const TetraMetric& t, FaceId first, const std::vector<EdgeId>& crossed, const Isometry2& base,
                   const Tolerances& tol) {
  if (!t.faces_valid()) throw GeometryError(ErrorKind::NoSuchTriangle, "tetrahedron has an invalid face");
  if (first < 0 || first >= topo::kFaces) throw GeometryError(ErrorKind::NotGluingSchedule, "not a gluing schedule");
  if (base.kappa() != t.kappa()) throw GeometryError(ErrorKind::MixedCurvature, "mixed curvature");
  Development d;
  d.metric_ = t;
  d.faces_.push_back({first, base, Isometry2::identity(t.kappa())});
  FaceId cur = first;
  for (EdgeId e : crossed) {
    if (e < 0 || e >= topo::kEdges || !topo::face_has_edge(cur, e))
      throw GeometryError(ErrorKind::NotGluingSchedule, "not a gluing schedule");
    const FaceId next = topo::across(cur, e);
    const Isometry2 g = gluing_map(t, cur, next, e);
    const PlacedFace& prev = d.faces_.back();
    PlacedFace pf{next, prev.placement * g, g};
    const auto ev = topo::edge_vertices(e);
    for (VertexId v : ev) {
      const double r = dist(g.apply(t.chart_vertex(next, v)), t.chart_vertex(cur, v));
      d.max_residual_ = std::max(d.max_residual_, r);
    }
    const int k = static_cast<int>(d.faces_.size());
    d.gluings_.push_back({e, k - 1, k, prev.placement.apply(t.chart_vertex(cur, ev[0])),
                          prev.placement.apply(t.chart_vertex(cur, ev[1]))});
    d.faces_.push_back(pf);
    cur = next;
  }
  if (d.max_residual_ > tol.eps_geom)
    throw GeometryError(ErrorKind::NotGluingSchedule, "gluing residual exceeds tolerance");

  // Vertex images: union corners glued along each crossed edge.
  const int n = d.size();
  std::vector<int> parent(4 * n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const GluingEdge& g : d.gluings_) {
    for (VertexId v : topo::edge_vertices(g.edge)) {
      const int a = find_root(parent, 4 * g.from + v);
      const int b = find_root(parent, 4 * g.to + v);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  d.image_of_.assign(n, {-1, -1, -1, -1});
  std::vector<int> root_image(4 * n, -1);
  for (int k = 0; k < n; ++k) {
    for (VertexId v : topo::face_vertices(d.faces_[k].face)) {
      const int r = find_root(parent, 4 * k + v);
      if (root_image[r] < 0) {
        root_image[r] = static_cast<int>(d.images_.size());
        d.images_.push_back({v, d.global(k, v), {}, 0.0});
      }
      VertexImage& im = d.images_[root_image[r]];
      im.faces.push_back(k);
      im.angle += t.face_angle(d.faces_[k].face, v);
      d.image_of_[k][v] = root_image[r];
    }
  }

  // Overlap flag from pairwise tests in relative charts.
  for (int i = 0; i < n && !d.overlapping_; ++i) {
    const FaceId fi = d.faces_[i].face;
    const auto& tri_i = t.chart(fi);
    const auto fe_i = topo::face_edges(fi);
    double diam_i = 0.0;
    for (EdgeId e : fe_i) diam_i = std::max(diam_i, t.edge(e));
    Isometry2 rel = Isometry2::identity(t.kappa());
    for (int j = i + 1; j < n; ++j) {
      rel = rel * d.faces_[j].glue;
      if (j == i + 1) continue;
      const FaceId fj = d.faces_[j].face;
      std::array<ModelPoint, 3> tri_j;
      bool far = false;
      for (int c = 0; c < 3; ++c) {
        auto p = near_point(t.kappa(), rel.apply_projective(t.chart(fj)[c].lift()));
        if (!p) {
          far = true;
          break;
        }
        tri_j[c] = *p;
      }
      if (far) continue;
      double diam_j = 0.0;
      for (EdgeId e : topo::face_edges(fj)) diam_j = std::max(diam_j, t.edge(e));
      if (dist(tri_i[0], tri_j[0]) > diam_i + diam_j + tol.eps_geom) continue;
      if (interiors_overlap(tri_i, tri_j, tol)) {
        d.overlapping_ = true;
        break;
      }
    }
  }
  return d;
}

Development unroll(const TetraMetric& t, FaceId first, const std::vector<EdgeId>& crossed, const Tolerances& tol) {
  return unroll(t, first, crossed, Isometry2::identity(t.kappa()), tol);
}

Development unroll(const TetraMetric& t, const CuttingSequence& seq, bool closed, const Tolerances& tol) {
  if (seq.edges.size() < 2 || seq.faces.size() + 1 != seq.edges.size())
    throw GeometryError(ErrorKind::NotGluingSchedule, "not a gluing schedule");
  if (seq.edges.front() != seq.edges.back())
    throw GeometryError(ErrorKind::NotGluingSchedule, "schedule must start and end on the base edge");
  std::vector<EdgeId> crossed(seq.edges.begin() + 1, seq.edges.end() - (closed ? 0 : 1));
  Development d = unroll(t, seq.faces.front(), crossed, tol);
  for (std::size_t i = 0; i < seq.faces.size(); ++i) {
    if (d.face(static_cast<int>(i)).face != seq.faces[i])
      throw GeometryError(ErrorKind::NotGluingSchedule, "face list disagrees with the crossed edges");
  }
  return d;
}

Development vertex_pair_development(const TetraMetric& t, VertexId apex, VertexId middle, const Tolerances& tol) {
  if (apex < 0 || apex >= topo::kVertices || middle < 0 || middle >= topo::kVertices || apex == middle)
    throw GeometryError(ErrorKind::InvalidArgument, "apex and middle must be distinct vertices");
  std::array<VertexId, 2> xy{};
  int n = 0;
  for (VertexId v = 0; v < topo::kVertices; ++v)
    if (v != apex && v != middle) xy[n++] = v;
  // Face (apex, middle, x) is the face opposite y.
  const FaceId first = xy[1];
  return unroll(t, first, {topo::edge_between(middle, xy[0]), topo::edge_between(middle, xy[1])}, tol);
}

bool is_convex(const Development& d, const Tolerances& tol) {
  if (d.overlapping()) throw GeometryError(ErrorKind::ConvexityUndefined, "convexity undefined");
  return std::all_of(d.images().begin(), d.images().end(),
                     [&](const VertexImage& im) { return im.angle <= kPi + tol.eps_geom; });
}

// ---------------------------------------------------------------------------
// Walking

double edge_parameter(const TetraMetric& t, FaceId f, EdgeId e, const ModelPoint& x) {
  const auto ev = topo::edge_vertices(e);
  return std::clamp(dist(t.chart_vertex(f, ev[0]), x) / t.edge(e), 0.0, 1.0);
}

Germ corner_germ(const TetraMetric& t, FaceId f, VertexId v, const Vec3& w, double eps) {
  const ModelPoint& x = t.chart_vertex(f, v);
  const Vec3 wl = tangent_lift(t.kappa(), w);
  std::array<VertexId, 2> others{};
  int n = 0;
  for (VertexId u : topo::face_vertices(f))
    if (u != v) others[n++] = u;
  std::array<double, 2> side{};
  for (int i = 0; i < 2; ++i) {
    const ModelPoint& y = t.chart_vertex(f, others[i]);
    const ModelPoint& z = t.chart_vertex(f, others[1 - i]);
    const Vec3 m = x.lift().cross(y.lift());
    const double s = orient(x, y, z) > 0 ? 1.0 : -1.0;
    side[i] = s * m.dot(wl) / (m.norm() * wl.norm());
  }
  Germ g;
  if (side[0] > eps && side[1] > eps) {
    g.kind = Germ::Inside;
    return g;
  }
  for (int i = 0; i < 2; ++i) {
    if (std::abs(side[i]) <= eps && side[1 - i] > eps) {
      // Along the edge toward others[i] rather than away from the face.
      const Vec3 toward = log_dir(x, t.chart_vertex(f, others[i]));
      if (form(t.kappa(), toward, tangent_lift(t.kappa(), w)) > 0.0) {
        g.kind = Germ::AlongEdge;
        g.toward = others[i];
      }
    }
  }
  return g;
}

bool germ_inside(const TetraMetric& t, FaceId f, VertexId v, const Vec3& w, double eps) {
  return corner_germ(t, f, v, w, eps).kind == Germ::Inside;
}

FaceExit face_exit(const TetraMetric& t, FaceId f, const ModelPoint& q, const Vec3& w, double s_min,
                   const Tolerances& tol) {
  const Curvature k = t.kappa();
  const auto fv = topo::face_vertices(f);
  const Vec3 ql = q.lift();
  const Vec3 wl = tangent_lift(k, w);
  const double slack = 1e-12;
  FaceExit best;
  best.s = kInf;
  for (int i = 0; i < 3; ++i) {
    const VertexId a = fv[i];
    const VertexId b = fv[(i + 1) % 3];
    const VertexId c = fv[(i + 2) % 3];
    const ModelPoint& u = t.chart_vertex(f, a);
    const ModelPoint& v = t.chart_vertex(f, b);
    const double sgn = orient(u, v, t.chart_vertex(f, c)) > 0 ? 1.0 : -1.0;
    const double A = sgn * det3(u.lift(), v.lift(), ql);
    const double B = sgn * det3(u.lift(), v.lift(), wl);
    double s = kInf;
    switch (k) {
      case Curvature::Flat:
        if (B < 0.0) s = -A / B;
        break;
      case Curvature::Hyperbolic:
        if (B < 0.0 && -B > std::abs(A)) s = std::atanh(-A / B);
        break;
      case Curvature::Spherical: {
        const double base = std::atan2(B, A) + 0.5 * kPi;
        const double turns = std::ceil((s_min - slack - base) / (2.0 * kPi));
        s = base + 2.0 * kPi * turns;
        break;
      }
    }
    if (s < s_min - slack) continue;  // already behind the ray start
    if (s < best.s) {
      best.s = std::max(s, s_min);
      best.edge = topo::edge_between(a, b);
    }
  }
  if (!std::isfinite(best.s)) throw GeometryError(ErrorKind::InvalidArgument, "ray does not leave the face");
  best.point = exp_point(q, w, best.s, tol);
  best.edge_param = edge_parameter(t, f, best.edge, best.point);
  best.vertex_distance = kInf;
  for (VertexId v : fv) {
    const double dv = dist(best.point, t.chart_vertex(f, v));
    if (dv < best.vertex_distance) {
      best.vertex_distance = dv;
      if (dv <= tol.eps_vertex) best.vertex = v;
    }
  }
  return best;
}

const char* to_string(WalkOutcome o) {
  switch (o) {
    case WalkOutcome::Success: return "success";
    case WalkOutcome::VertexHit: return "vertex hit";
    case WalkOutcome::BoundaryExit: return "boundary exit";
    case WalkOutcome::StartOutside: return "start outside";
    case WalkOutcome::EndOutside: return "end outside";
  }
  return "?";
}

namespace {

bool inside_closed(const TetraMetric& t, FaceId f, const ModelPoint& x, double eps) {
  const auto& tri = t.chart(f);
  const double o = orient(tri[0], tri[1], tri[2]) > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 m = tri[i].lift().cross(tri[(i + 1) % 3].lift());
    if (o * m.dot(x.lift()) < -eps * m.norm() * x.lift().norm()) return false;
  }
  return true;
}

// Shared walker. Mode "global" draws the ray in each chart from one model-space
// ray; mode "local" re-aims at the target from every entry point.
class Walker {
 public:
  Walker(const Development& d, const Tolerances& tol) : d_(d), t_(d.metric()), tol_(tol) {}

  // Global ray.
  CrossingReport run_global(const ModelPoint& p, const Vec3& dir, double length, std::optional<int> start_image,
                            std::optional<int> end_image) {
    global_ = true;
    p_ = p;
    v_ = dir;
    length_ = length;
    end_image_ = end_image;
    end_face_ = d_.size() - 1;
    return run(start_image, 0, p);
  }

  // Local mode between chart points.
  CrossingReport run_local(const WalkEnd& from, const WalkEnd& to) {
    global_ = false;
    const auto start_image = corner_image(from);
    end_image_ = corner_image(to);
    end_face_ = to.placed;
    if (end_image_) end_face_ = d_.images()[*end_image_].faces.back();
    const int start_face = start_image ? d_.images()[*start_image].faces.front() : from.placed;
    if (end_face_ < start_face) throw GeometryError(ErrorKind::InvalidArgument, "walk must run forward");
    target_.assign(end_face_ + 1, Vec3::Zero());
    target_[end_face_] = to.point.lift();
    for (int k = end_face_; k >= 0; --k) {
      if (k < end_face_) target_[k] = d_.face(k + 1).glue.apply_projective(target_[k + 1]);
      if (end_image_ && in_image(*end_image_, k)) {
        target_[k] = d_.corner(k, d_.images()[*end_image_].vertex).lift();
      }
      target_[k] /= target_[k].norm();
    }
    end_point_ = to.point;
    return run(start_image, from.placed, from.point);
  }

 private:
  std::optional<int> corner_image(const WalkEnd& e) const {
    for (VertexId v : topo::face_vertices(d_.face(e.placed).face)) {
      if (dist(d_.corner(e.placed, v), e.point) <= tol_.eps_vertex) return d_.image_index(e.placed, v);
    }
    return std::nullopt;
  }

  bool in_image(int image, int k) const {
    const auto& f = d_.images()[image].faces;
    return std::find(f.begin(), f.end(), k) != f.end();
  }

  // Ray in chart k: point q, direction w, parameter offset.
  void aim(int k, const ModelPoint& entry, double t_entry, ModelPoint& q, Vec3& w, double& tau, double& s0) {
    if (global_) {
      const Isometry2 inv = d_.face(k).placement.inverse();
      q = inv.apply(p_);
      w = tangent_unit(q, inv.apply_tangent(v_));
      tau = 0.0;
      s0 = t_entry;
    } else {
      q = entry;
      w = log_dir_projective(entry, target_[k]);
      tau = t_entry;
      s0 = 0.0;
    }
  }

  CrossingReport run(std::optional<int> start_image, int start_placed, const ModelPoint& start_point) {
    CrossingReport rep;
    int k = start_placed;
    ModelPoint entry = start_point;
    double t_entry = 0.0;
    ModelPoint q;
    Vec3 w;
    double tau = 0.0;
    double s0 = 0.0;

    if (start_image) {
      const VertexImage& im = d_.images()[*start_image];
      bool found = false;
      for (int kk : im.faces) {
        entry = d_.corner(kk, im.vertex);
        aim(kk, entry, 0.0, q, w, tau, s0);
        if (global_) {
          // Start exactly at the corner.
          q = entry;
          w = tangent_unit(q, w);
        }
        const Germ g = corner_germ(t_, d_.face(kk).face, im.vertex, w, 1e-12);
        if (g.kind == Germ::Inside) {
          k = kk;
          found = true;
          break;
        }
        if (g.kind == Germ::AlongEdge) {
          // Runs along an edge straight into its other end.
          const ModelPoint& c = d_.corner(kk, g.toward);
          rep.outcome = WalkOutcome::VertexHit;
          rep.placed = kk;
          rep.vertex = g.toward;
          rep.vertex_image = d_.image_index(kk, g.toward);
          rep.exit_point = c;
          rep.pieces.push_back({kk, d_.face(kk).face, entry, c, dist(entry, c)});
          rep.length = rep.pieces.back().length;
          if (end_image_ && *rep.vertex_image == *end_image_) rep.outcome = WalkOutcome::Success;
          return rep;
        }
      }
      if (!found) {
        rep.outcome = WalkOutcome::StartOutside;
        rep.placed = im.faces.front();
        rep.vertex = im.vertex;
        rep.vertex_image = *start_image;
        return rep;
      }
    } else {
      if (global_) {
        k = -1;
        for (int kk = 0; kk < d_.size(); ++kk) {
          const ModelPoint c = d_.face(kk).placement.inverse().apply(start_point);
          if (inside_closed(t_, d_.face(kk).face, c, tol_.eps_geom)) {
            k = kk;
            entry = c;
            break;
          }
        }
        if (k < 0) {
          rep.outcome = WalkOutcome::StartOutside;
          return rep;
        }
      } else if (!inside_closed(t_, d_.face(k).face, entry, tol_.eps_geom)) {
        rep.outcome = WalkOutcome::StartOutside;
        rep.placed = k;
        return rep;
      }
      aim(k, entry, 0.0, q, w, tau, s0);
    }

    rep.margin = kInf;
    while (true) {
      const FaceId f = d_.face(k).face;
      FaceExit ex = face_exit(t_, f, q, w, s0, tol_);
      const double t_exit = tau + ex.s;

      // End reached?
      if (end_image_ && in_image(*end_image_, k)) {
        const VertexId tv = d_.images()[*end_image_].vertex;
        if (ex.vertex && *ex.vertex == tv) {
          const ModelPoint c = d_.corner(k, tv);
          rep.pieces.push_back({k, f, entry, c, dist(entry, c)});
          rep.length = t_exit;
          rep.placed = k;
          rep.outcome = WalkOutcome::Success;
          if (!std::isfinite(rep.margin)) rep.margin = 0.0;
          return rep;
        }
      }
      if (!end_image_) {
        double t_end = kInf;
        if (global_) {
          t_end = length_;
        } else if (k == end_face_) {
          t_end = tau + dist(q, end_point_);
        }
        if (t_end <= t_exit + tol_.eps_geom) {
          rep.placed = k;
          rep.length = t_end;
          if (global_ && k != end_face_) {
            rep.outcome = WalkOutcome::EndOutside;
            return rep;
          }
          const ModelPoint e = global_ ? exp_point(q, w, t_end - tau, tol_) : end_point_;
          rep.pieces.push_back({k, f, entry, e, dist(entry, e)});
          rep.outcome = WalkOutcome::Success;
          if (!std::isfinite(rep.margin)) rep.margin = 0.0;
          return rep;
        }
      } else if (global_ && t_exit > length_ + 1e-6) {
        rep.outcome = WalkOutcome::EndOutside;
        rep.placed = k;
        rep.length = t_exit;
        return rep;
      }

      rep.pieces.push_back({k, f, entry, ex.point, dist(entry, ex.point)});
      if (ex.vertex) {
        rep.outcome = WalkOutcome::VertexHit;
        rep.placed = k;
        rep.vertex = *ex.vertex;
        rep.vertex_image = d_.image_index(k, *ex.vertex);
        rep.exit_point = ex.point;
        rep.margin = ex.vertex_distance;
        rep.length = t_exit;
        return rep;
      }
      const bool scheduled = k + 1 < d_.size() && d_.gluings()[k].edge == ex.edge && k + 1 <= end_face_;
      if (!scheduled) {
        rep.outcome = WalkOutcome::BoundaryExit;
        rep.placed = k;
        rep.exit_edge = ex.edge;
        rep.exit_point = ex.point;
        rep.margin = ex.vertex_distance;
        rep.length = t_exit;
        return rep;
      }
      rep.crossings.push_back({k, ex.edge, ex.edge_param, ex.point, t_exit});
      rep.margin = std::min(rep.margin, std::min(ex.edge_param, 1.0 - ex.edge_param) * t_.edge(ex.edge));
      entry = d_.face(k + 1).glue.inverse().apply(ex.point);
      ++k;
      t_entry = t_exit;
      aim(k, entry, t_entry, q, w, tau, s0);
    }
  }

  const Development& d_;
  const TetraMetric& t_;
  Tolerances tol_;
  bool global_ = true;
  ModelPoint p_;
  Vec3 v_;
  double length_ = 0.0;
  std::optional<int> end_image_;
  int end_face_ = 0;
  std::vector<Vec3> target_;
  ModelPoint end_point_;
};

std::optional<int> image_near(const Development& d, const ModelPoint& p, double eps) {
  for (std::size_t i = 0; i < d.images().size(); ++i)
    if (dist(d.images()[i].point, p) <= eps) return static_cast<int>(i);
  return std::nullopt;
}

}  // namespace

CrossingReport walk_ray(const Development& d, const ModelPoint& p, const Vec3& dir, double length,
                        std::optional<int> end_image, const Tolerances& tol) {
  if (!(length > 0.0)) throw GeometryError(ErrorKind::InvalidArgument, "walk length must be positive");
  Walker w(d, tol);
  return w.run_global(p, tangent_unit(p, dir), length, image_near(d, p, tol.eps_vertex), end_image);
}

CrossingReport walk_segment(const Development& d, const GeodesicSegment& s, const Tolerances& tol) {
  if (!(s.length > 0.0)) {
    CrossingReport rep;
    rep.placed = 0;
    return rep;
  }
  const Vec3 dir = log_dir(s.start, s.end, tol);
  Walker w(d, tol);
  return w.run_global(s.start, dir, s.length, image_near(d, s.start, tol.eps_vertex),
                      image_near(d, s.end, tol.eps_vertex));
}

CrossingReport walk_between(const Development& d, const WalkEnd& from, const WalkEnd& to, const Tolerances& tol) {
  Walker w(d, tol);
  return w.run_local(from, to);
}

}  // namespace geoloop
