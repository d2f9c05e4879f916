#include "geoloop/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "parallel.hpp"

namespace geoloop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tangent_gap(Curvature k, const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  return std::sqrt(std::max(0.0, form(k, d, d)));
}

std::optional<ModelPoint> near_point(Curvature k, const Vec3& h) {
  if (k == Curvature::Hyperbolic) {
    const double q = -form(k, h, h);
    if (!(q > 1e-8 * h.squaredNorm())) return std::nullopt;
  }
  if (k == Curvature::Flat && std::abs(h.z()) < 1e-12) return std::nullopt;
  return from_lift(k, h);
}

// Gluing maps for every (face, edge) pair, built once per trace.
class GlueCache {
 public:
  explicit GlueCache(const TetraMetric& t) : t_(t) {}
  const Isometry2& get(FaceId f, EdgeId e) {
    auto key = std::make_pair(f, e);
    auto it = maps_.find(key);
    if (it == maps_.end()) it = maps_.emplace(key, gluing_map(t_, f, topo::across(f, e), e)).first;
    return it->second;
  }
  const Isometry2& inverse(FaceId f, EdgeId e) {
    auto key = std::make_pair(f, e);
    auto it = inverses_.find(key);
    if (it == inverses_.end()) it = inverses_.emplace(key, get(f, e).inverse()).first;
    return it->second;
  }

 private:
  const TetraMetric& t_;
  std::map<std::pair<FaceId, EdgeId>, Isometry2> maps_;
  std::map<std::pair<FaceId, EdgeId>, Isometry2> inverses_;
};

struct TraceState {
  FaceId face;
  ModelPoint q;
  Vec3 w;
  double tau = 0.0;
  std::optional<EdgePoint> enter;
};

SurfaceCurve run_trace(const TetraMetric& t, SurfacePoint start, TraceState s, double max_length,
                       const Tolerances& tol) {
  if (!(max_length > 0.0)) throw GeometryError(ErrorKind::InvalidArgument, "max length must be positive");
  const Curvature k = t.kappa();
  GlueCache glue(t);
  SurfaceCurve c;
  c.start = start;
  c.start_direction = s.w;
  const bool vertex_start = start.incidence == SurfacePoint::Incidence::Vertex;
  const std::size_t cap = 100000;

  while (c.segments.size() < cap) {
    const FaceExit ex = face_exit(t, s.face, s.q, s.w, 0.0, tol);

    // Closure through an interior start point.
    if (!vertex_start && !c.segments.empty() && s.face == start.face &&
        start.incidence == SurfacePoint::Incidence::Interior) {
      const double d = dist(s.q, start.position);
      if (d > 0.0 && d <= ex.s) {
        const double miss = d * std::abs(signed_angle(s.q, s.w, log_dir(s.q, start.position, tol)));
        const double turn = tangent_gap(k, tangent_unit(start.position, transport_dir(s.q, s.w, d)), c.start_direction);
        if (miss <= tol.eps_close && turn <= tol.eps_close) {
          c.segments.push_back({s.face, s.q, start.position, d, s.enter, std::nullopt});
          c.closed = true;
          c.stop = StopReason::Closed;
          c.closure_error = miss + turn;
          c.end = start;
          return c;
        }
      }
    }

    if (s.tau + ex.s >= max_length) {
      const ModelPoint e = exp_point(s.q, s.w, max_length - s.tau, tol);
      c.segments.push_back({s.face, s.q, e, dist(s.q, e), s.enter, std::nullopt});
      c.stop = StopReason::MaxLength;
      c.end = SurfacePoint::interior(t, s.face, e);
      return c;
    }
    if (ex.vertex) {
      const ModelPoint& v = t.chart_vertex(s.face, *ex.vertex);
      c.segments.push_back({s.face, s.q, v, dist(s.q, v), s.enter, std::nullopt});
      c.stop = StopReason::VertexHit;
      c.hit_vertex = *ex.vertex;
      c.end = SurfacePoint::at_vertex(t, s.face, *ex.vertex);
      if (vertex_start && *ex.vertex == start.vertex) {
        c.closed = true;
        c.loop_vertex = start.vertex;
      }
      return c;
    }
    const EdgePoint out{ex.edge, ex.edge_param};
    c.segments.push_back({s.face, s.q, ex.point, ex.s, s.enter, out});

    const FaceId g = topo::across(s.face, ex.edge);
    const Isometry2& inv = glue.inverse(s.face, ex.edge);
    TraceState next{g, inv.apply(ex.point), Vec3::Zero(), s.tau + ex.s, out};
    next.w = tangent_unit(next.q, inv.apply_tangent(transport_dir(s.q, s.w, ex.s)));

    if (!vertex_start && g == start.face && start.incidence == SurfacePoint::Incidence::Edge &&
        ex.edge == start.edge) {
      const double miss = dist(next.q, start.position);
      const double turn = tangent_gap(k, next.w, c.start_direction);
      if (miss <= tol.eps_close && turn <= tol.eps_close) {
        c.closed = true;
        c.stop = StopReason::Closed;
        c.closure_error = miss + turn;
        c.end = start;
        return c;
      }
    }
    s = next;
  }
  throw GeometryError(ErrorKind::InvalidArgument, "trace exceeded the segment cap");
}

}  // namespace

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Closed: return "closed";
    case StopReason::VertexHit: return "vertex hit";
    case StopReason::MaxLength: return "max length";
    case StopReason::Endpoint: return "endpoint";
  }
  return "?";
}

SurfacePoint SurfacePoint::interior(const TetraMetric&, FaceId f, const ModelPoint& x) {
  SurfacePoint p;
  p.face = f;
  p.position = x;
  return p;
}

SurfacePoint SurfacePoint::on_edge(const TetraMetric& t, FaceId f, EdgeId e, double param) {
  if (!topo::face_has_edge(f, e)) throw GeometryError(ErrorKind::InvalidArgument, "edge not on face");
  if (!(param > 0.0 && param < 1.0)) throw GeometryError(ErrorKind::InvalidArgument, "edge parameter must lie in (0,1)");
  const auto ev = topo::edge_vertices(e);
  const ModelPoint& u = t.chart_vertex(f, ev[0]);
  const ModelPoint& v = t.chart_vertex(f, ev[1]);
  SurfacePoint p;
  p.face = f;
  p.position = exp_point(u, log_dir(u, v), param * t.edge(e));
  p.incidence = Incidence::Edge;
  p.edge = e;
  p.param = param;
  return p;
}

SurfacePoint SurfacePoint::at_vertex(const TetraMetric& t, FaceId f, VertexId v) {
  SurfacePoint p;
  p.face = f;
  p.position = t.chart_vertex(f, v);
  p.incidence = Incidence::Vertex;
  p.vertex = v;
  return p;
}

double SurfaceCurve::length() const {
  double s = 0.0;
  for (const auto& seg : segments) s += seg.length;
  return s;
}

std::vector<EdgePoint> SurfaceCurve::crossings() const {
  std::vector<EdgePoint> out;
  for (const auto& seg : segments)
    if (seg.exit) out.push_back(*seg.exit);
  return out;
}

ShotStart edge_start(const TetraMetric& t, FaceId f, EdgeId e, double param, double angle) {
  if (!(angle > 0.0 && angle < std::numbers::pi))
    throw GeometryError(ErrorKind::InvalidArgument, "start angle must point into the face");
  const SurfacePoint p = SurfacePoint::on_edge(t, f, e, param);
  const auto ev = topo::edge_vertices(e);
  const ModelPoint& u = t.chart_vertex(f, ev[0]);
  const ModelPoint& v = t.chart_vertex(f, ev[1]);
  const VertexId apex = topo::across(f, e);
  const double side = orient(u, v, t.chart_vertex(f, apex)) > 0 ? 1.0 : -1.0;
  const Vec3 along = log_dir(p.position, v);
  return {p, rotate_tangent(p.position, along, side * angle)};
}

ShotStart interior_start(const TetraMetric& t, FaceId f, const ModelPoint& x, double angle) {
  const SurfacePoint p = SurfacePoint::interior(t, f, x);
  return {p, rotate_tangent(x, tangent_unit(x, Vec3(1.0, 0.0, 0.0)), angle)};
}

SurfaceCurve shoot(const TetraMetric& t, const SurfacePoint& start, const Vec3& direction, double max_length,
                   const Tolerances& tol) {
  if (start.incidence == SurfacePoint::Incidence::Vertex)
    return shoot_from_vertex(t, start.face, start.vertex, direction, max_length, tol);
  TraceState s{start.face, start.position, tangent_unit(start.position, direction), 0.0, std::nullopt};
  if (start.incidence == SurfacePoint::Incidence::Edge) s.enter = EdgePoint{start.edge, start.param};
  return run_trace(t, start, s, max_length, tol);
}

SurfaceCurve shoot_from_vertex(const TetraMetric& t, FaceId f, VertexId v, const Vec3& direction, double max_length,
                               const Tolerances& tol) {
  const SurfacePoint start = SurfacePoint::at_vertex(t, f, v);
  const Vec3 w = tangent_unit(start.position, direction);
  const Germ g = corner_germ(t, f, v, w, 1e-12);
  if (g.kind == Germ::AlongEdge) {
    SurfaceCurve c;
    c.start = start;
    c.start_direction = w;
    const ModelPoint& e = t.chart_vertex(f, g.toward);
    c.segments.push_back({f, start.position, e, dist(start.position, e), std::nullopt, std::nullopt});
    c.stop = StopReason::VertexHit;
    c.hit_vertex = g.toward;
    c.end = SurfacePoint::at_vertex(t, f, g.toward);
    return c;
  }
  if (g.kind != Germ::Inside) throw GeometryError(ErrorKind::InvalidArgument, "direction does not enter the face");
  return run_trace(t, start, {f, start.position, w, 0.0, std::nullopt}, max_length, tol);
}

SimplicityReport is_simple(const SurfaceCurve& c, const Tolerances& tol) {
  SimplicityReport rep;
  const int n = static_cast<int>(c.segments.size());
  auto consecutive = [&](int i, int j) { return j == i + 1 || (c.closed && i == 0 && j == n - 1); };
  for (int i = 0; i < n; ++i) {
    const CurveSegment& a = c.segments[i];
    if (!(a.length > tol.eps_geom)) continue;
    for (int j = i + 1; j < n; ++j) {
      const CurveSegment& b = c.segments[j];
      if (b.face != a.face || consecutive(i, j) || !(b.length > tol.eps_geom)) continue;
      try {
        const auto x = intersect_segments({a.start, a.end, a.length}, {b.start, b.end, b.length}, tol);
        if (x) {
          rep = {false, *x, a.face, i, j, "crossing"};
          return rep;
        }
      } catch (const GeometryError&) {
        rep = {false, a.start, a.face, i, j, "collinear overlap"};
        return rep;
      }
    }
  }
  // Two passes through the same edge point.
  std::vector<std::pair<EdgePoint, int>> xs;
  for (int i = 0; i < n; ++i)
    if (c.segments[i].exit) xs.push_back({*c.segments[i].exit, i});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (xs[i].first.edge == xs[j].first.edge && std::abs(xs[i].first.t - xs[j].first.t) <= 1e-9) {
        const CurveSegment& s = c.segments[xs[i].second];
        rep = {false, s.end, s.face, xs[i].second, xs[j].second, "repeated edge point"};
        return rep;
      }
    }
  }
  return rep;
}

namespace {

std::optional<std::pair<int, int>> classify_triple(int a, int b, int s, bool* aligned) {
  if (aligned) *aligned = false;
  if (a < 0 || b < 0) return std::nullopt;
  if (s == a + b && std::gcd(a, b) == 1) {
    if (aligned) *aligned = true;
    return std::make_pair(a, b);
  }
  std::array<int, 3> v{a, b, s};
  std::sort(v.begin(), v.end());
  if (v[0] + v[1] == v[2] && std::gcd(v[0], v[1]) == 1) return std::make_pair(v[0], v[1]);
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<int, int>> classify_counts(const std::array<int, 6>& c, bool* aligned) {
  if (aligned) *aligned = false;
  if (c[0] != c[5] || c[1] != c[4] || c[2] != c[3]) return std::nullopt;
  return classify_triple(c[1], c[2], c[0], aligned);
}

std::optional<std::pair<int, int>> classify_loop(const std::array<int, 6>& c, VertexId v) {
  // The opposite face holds exactly one edge of each opposite pair.
  int a = -1, b = -1, s = -1;
  for (EdgeId e : topo::face_edges(v)) {
    if (e == 1 || e == 4) a = c[e];
    if (e == 2 || e == 3) b = c[e];
    if (e == 0 || e == 5) s = c[e];
  }
  return classify_triple(a, b, s, nullptr);
}

CrossingSignature signature(const SurfaceCurve& c) {
  if (!c.closed) throw GeometryError(ErrorKind::InvalidArgument, "signature needs a closed curve");
  CrossingSignature sig;
  for (const EdgePoint& x : c.crossings()) ++sig.counts[x.edge];
  if (c.loop_vertex) {
    sig.type = classify_loop(sig.counts, *c.loop_vertex);
    // Aligned when the face-edge counts already sit in labelled order.
    int a = -1, b = -1;
    for (EdgeId e : topo::face_edges(*c.loop_vertex)) {
      if (e == 1 || e == 4) a = sig.counts[e];
      if (e == 2 || e == 3) b = sig.counts[e];
    }
    sig.aligned = sig.type && sig.type->first == a && sig.type->second == b;
  } else {
    sig.type = classify_counts(sig.counts, &sig.aligned);
  }
  return sig;
}

CuttingSequence cutting_sequence(int p, int q, const Tolerances& tol) {
  if (p < 0 || q < 0 || (p == 0 && q == 0) || std::gcd(p, q) != 1)
    throw GeometryError(ErrorKind::NotCoprime, "not coprime");
  if (p > q) {
    CuttingSequence s = relabel_sequence(cutting_sequence(q, p, tol), {0, 1, 3, 2});
    s.p = p;
    s.q = q;
    return s;
  }
  const TetraMetric flat = TetraMetric::regular_from_edge(Curvature::Flat, 1.0);
  const double delta = 1.0 / (4.0 * (p + q + 1));
  const FaceId f0 = 3;
  const EdgeId base = 0;
  const SurfacePoint start = SurfacePoint::on_edge(flat, f0, base, 0.5 + delta);
  const Vec3 dir(0.5 * (q - p), 0.5 * std::sqrt(3.0) * (p + q), 0.0);
  const double closed_length = 2.0 * dir.norm();
  const SurfaceCurve c = shoot(flat, start, dir, closed_length + 0.5, tol);
  const int n = 4 * (p + q);
  if (c.stop != StopReason::Closed || static_cast<int>(c.crossings().size()) != n)
    throw GeometryError(ErrorKind::LoopConstructionFailed, "flat shot did not close with the expected schedule");
  CuttingSequence s;
  s.p = p;
  s.q = q;
  s.offset = 0.5 + delta;
  s.edges.push_back(base);
  s.params.push_back(s.offset);
  for (const EdgePoint& x : c.crossings()) {
    s.edges.push_back(x.edge);
    s.params.push_back(x.t);
  }
  for (const CurveSegment& seg : c.segments) s.faces.push_back(seg.face);
  if (s.edges.back() != base) throw GeometryError(ErrorKind::LoopConstructionFailed, "flat shot did not return to the base edge");
  return s;
}

CuttingSequence relabel_sequence(const CuttingSequence& s, const std::array<VertexId, 4>& perm) {
  CuttingSequence out = s;
  for (std::size_t i = 0; i < out.edges.size(); ++i) {
    const auto ev = topo::edge_vertices(out.edges[i]);
    out.edges[i] = topo::edge_between(perm[ev[0]], perm[ev[1]]);
    if (i < out.params.size() && perm[ev[0]] > perm[ev[1]]) out.params[i] = 1.0 - out.params[i];
  }
  for (FaceId& f : out.faces) f = perm[f];
  for (VertexId v = 0; v < 4; ++v) out.relabel[v] = perm[s.relabel[v]];
  return out;
}

CuttingSequence anchor_sequence(const CuttingSequence& s, VertexId v) {
  const int n = s.crossings();
  const EdgeId base = s.edges.front();
  const auto ev = topo::edge_vertices(base);
  if (v != ev[0] && v != ev[1]) throw GeometryError(ErrorKind::InvalidArgument, "vertex is not on the base edge");
  if (static_cast<int>(s.params.size()) != n + 1)
    throw GeometryError(ErrorKind::InvalidArgument, "schedule carries no crossing parameters");
  int best = 0;
  double nearest = 2.0;
  for (int i = 0; i < n; ++i) {
    if (s.edges[i] != base) continue;
    const double d = v == ev[0] ? s.params[i] : 1.0 - s.params[i];
    if (d < nearest) {
      nearest = d;
      best = i;
    }
  }
  CuttingSequence out = s;
  out.edges.clear();
  out.faces.clear();
  out.params.clear();
  for (int k = 0; k <= n; ++k) {
    out.edges.push_back(s.edges[(best + k) % n]);
    out.params.push_back(s.params[(best + k) % n]);
  }
  for (int k = 0; k < n; ++k) out.faces.push_back(s.faces[(best + k) % n]);
  out.offset = out.params.front();
  return out;
}

double junction_residual(const TetraMetric& t, const SurfaceCurve& c) {
  const Curvature k = t.kappa();
  const int n = static_cast<int>(c.segments.size());
  double worst = 0.0;
  const int last = (c.closed && !c.loop_vertex) ? n : n - 1;
  for (int i = 0; i < last; ++i) {
    const CurveSegment& a = c.segments[i];
    const CurveSegment& b = c.segments[(i + 1) % n];
    if (!a.exit) continue;
    const Isometry2 g = gluing_map(t, a.face, b.face, a.exit->edge);
    const ModelPoint bs = g.apply(b.start);
    const ModelPoint be = g.apply(b.end);
    double r = dist(bs, a.end);
    if (a.length > 1e-9 && b.length > 1e-9) {
      const Vec3 u = -log_dir(a.end, a.start);
      const Vec3 v = log_dir(a.end, be);
      r += tangent_gap(k, u, v);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

SurfaceCurve fold(const Development& d, const CrossingReport& r, const Tolerances& tol) {
  const TetraMetric& t = d.metric();
  SurfaceCurve c;
  std::optional<EdgePoint> enter;
  std::size_t xi = 0;
  for (const WalkPiece& p : r.pieces) {
    CurveSegment seg{p.face, p.start, p.end, p.length, enter, std::nullopt};
    if (xi < r.crossings.size() && r.crossings[xi].placed == p.placed) {
      seg.exit = EdgePoint{r.crossings[xi].edge, r.crossings[xi].param};
      ++xi;
    }
    enter = seg.exit;
    c.segments.push_back(seg);
  }
  auto classify = [&](FaceId f, const ModelPoint& x) {
    for (VertexId v : topo::face_vertices(f))
      if (dist(t.chart_vertex(f, v), x) <= tol.eps_vertex) return SurfacePoint::at_vertex(t, f, v);
    return SurfacePoint::interior(t, f, x);
  };
  if (!c.segments.empty()) {
    c.start = classify(c.segments.front().face, c.segments.front().start);
    c.end = classify(c.segments.back().face, c.segments.back().end);
    if (c.segments.front().length > 0.0)
      c.start_direction = log_dir(c.segments.front().start, c.segments.front().end);
  }
  c.stop = r.ok() ? StopReason::Endpoint : StopReason::VertexHit;
  return c;
}

std::vector<ClearanceEntry> clearance_check(const TetraMetric& t, const CrossingReport& walk, const Development& dev,
                                            std::optional<VertexId> loop_vertex, const Tolerances& tol) {
  const Curvature k = t.kappa();
  std::array<std::optional<VertexData>, 4> data;
  std::vector<ClearanceEntry> out;
  for (std::size_t ii = 0; ii < dev.images().size(); ++ii) {
    const VertexImage& im = dev.images()[ii];
    if (loop_vertex && im.vertex == *loop_vertex) continue;
    if (!data[im.vertex]) data[im.vertex] = vertex_data(t, im.vertex, tol);
    const VertexData& vd = *data[im.vertex];
    ClearanceEntry e;
    e.vertex = im.vertex;
    e.image = static_cast<int>(ii);
    e.d = kInf;
    for (int kf : im.faces) {
      const ModelPoint& v = dev.corner(kf, im.vertex);
      for (const WalkPiece& p : walk.pieces) {
        if (!(p.length > 0.0)) continue;
        const Isometry2 rel = dev.relative(p.placed, kf);
        const auto a = near_point(k, rel.apply_projective(p.start.lift()));
        const auto b = near_point(k, rel.apply_projective(p.end.lift()));
        if (!a || !b) continue;
        const double dd = point_segment_distance(v, {*a, *b, dist(*a, *b)}, tol).distance;
        if (dd < e.d) {
          e.d = dd;
          e.placed = kf;
        }
      }
    }
    e.applicable = k == Curvature::Hyperbolic && vd.bound_applicable;
    if (e.applicable) {
      e.bound = *vd.clearance_bound;
      e.margin = std::sinh(e.d) - std::cos(vd.half_angle) * std::sinh(vd.height);
      e.wrap_margin = std::tanh(e.d) - std::cos(vd.half_angle) * std::tanh(vd.height);
    } else {
      e.bound = std::numeric_limits<double>::quiet_NaN();
      e.margin = std::numeric_limits<double>::quiet_NaN();
      e.wrap_margin = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

struct Sector {
  FaceId face;
  VertexId from;  // edge v-from opens the sector
  VertexId to;
  double start;
  double width;
};

std::array<Sector, 3> fan_sectors(const TetraMetric& t, VertexId v) {
  std::array<VertexId, 3> o{};
  int n = 0;
  for (VertexId w = 0; w < 4; ++w)
    if (w != v) o[n++] = w;
  // Face opposite the third vertex holds the first two.
  std::array<Sector, 3> s{};
  double at = 0.0;
  for (int i = 0; i < 3; ++i) {
    const VertexId a = o[i], b = o[(i + 1) % 3], c = o[(i + 2) % 3];
    s[i] = {c, a, b, at, t.face_angle(c, v)};
    at += s[i].width;
  }
  return s;
}

Vec3 sector_direction(const TetraMetric& t, VertexId v, const Sector& s, double phi) {
  const ModelPoint& x = t.chart_vertex(s.face, v);
  const ModelPoint& a = t.chart_vertex(s.face, s.from);
  const ModelPoint& b = t.chart_vertex(s.face, s.to);
  const double sign = orient(x, a, b) > 0.0 ? 1.0 : -1.0;
  return rotate_tangent(x, log_dir(x, a), sign * phi);
}

// Crossed edges, then -(1+w) for a stop at vertex w.
using ShotKey = std::vector<int>;

ShotKey key_of(const SurfaceCurve& c) {
  ShotKey k;
  for (const EdgePoint& x : c.crossings()) k.push_back(x.edge);
  if (c.stop == StopReason::VertexHit && c.hit_vertex) k.push_back(-1 - *c.hit_vertex);
  return k;
}

// Vertex at which two shots part ways, if they part at a vertex.
std::optional<VertexId> parting_vertex(const ShotKey& a, const ShotKey& b, std::size_t* at) {
  std::size_t j = 0;
  while (j < a.size() && j < b.size() && a[j] == b[j]) ++j;
  if (at) *at = j;
  if (j >= a.size() || j >= b.size()) return std::nullopt;
  if (a[j] < 0) return -1 - a[j];
  if (b[j] < 0) return -1 - b[j];
  const auto ea = topo::edge_vertices(a[j]);
  const auto eb = topo::edge_vertices(b[j]);
  for (VertexId x : ea)
    if (x == eb[0] || x == eb[1]) return x;
  return std::nullopt;
}

}  // namespace

FanDirection fan_direction(const TetraMetric& t, VertexId v, double theta) {
  const auto sectors = fan_sectors(t, v);
  const double total = sectors[2].start + sectors[2].width;
  theta = std::fmod(theta, total);
  if (theta < 0.0) theta += total;
  for (const Sector& s : sectors) {
    if (theta <= s.start + s.width || &s == &sectors[2]) {
      return {s.face, sector_direction(t, v, s, theta - s.start)};
    }
  }
  return {};
}

double fan_angle(const TetraMetric& t, VertexId v, FaceId f, const Vec3& direction) {
  for (const Sector& s : fan_sectors(t, v)) {
    if (s.face != f) continue;
    const ModelPoint& x = t.chart_vertex(f, v);
    const double phi = std::abs(signed_angle(x, log_dir(x, t.chart_vertex(f, s.from)), tangent_unit(x, direction)));
    return s.start + phi;
  }
  throw GeometryError(ErrorKind::InvalidArgument, "vertex not on face");
}

std::optional<SurfaceCurve> loop_along(const TetraMetric& t, VertexId v, FaceId f, const std::vector<EdgeId>& edges,
                                       std::optional<Vec3> hint, const Tolerances& tol) {
  if (!topo::face_has_vertex(f, v)) return std::nullopt;
  const Development dev = unroll(t, f, edges, tol);
  const int last = dev.size() - 1;
  if (!topo::face_has_vertex(dev.face(last).face, v)) return std::nullopt;
  const int a = dev.image_index(0, v);
  const int b = dev.image_index(last, v);
  if (a == b) return std::nullopt;
  CrossingReport walk;
  if (t.kappa() == Curvature::Spherical) {
    const ModelPoint p = dev.global(0, v);
    const ModelPoint q = dev.global(last, v);
    const double m = dist(p, q);
    if (m <= tol.eps_antipodal || std::numbers::pi - m <= tol.eps_antipodal) return std::nullopt;
    Vec3 dir = log_dir(p, q, tol);
    double len = m;
    if (hint) {
      const Vec3 h = tangent_unit(p, dev.face(0).placement.apply_tangent(*hint));
      if (h.dot(dir) < 0.0) {
        dir = -dir;
        len = 2.0 * std::numbers::pi - m;
      }
    }
    walk = walk_ray(dev, p, dir, len, b, tol);
  } else {
    walk = walk_between(dev, {0, dev.corner(0, v)}, {last, dev.corner(last, v)}, tol);
  }
  if (!walk.ok()) return std::nullopt;
  SurfaceCurve c = fold(dev, walk, tol);
  if (c.segments.empty()) return std::nullopt;
  c.start = SurfacePoint::at_vertex(t, c.segments.front().face, v);
  c.end = SurfacePoint::at_vertex(t, c.segments.back().face, v);
  c.closed = true;
  c.loop_vertex = v;
  c.stop = StopReason::Closed;
  return c;
}

SweepReport vertex_sweep(const TetraMetric& t, VertexId v, int directions, double cap, const Tolerances& tol) {
  if (directions < 1) throw GeometryError(ErrorKind::InvalidArgument, "need at least one direction");
  if (!(cap > 0.0)) throw GeometryError(ErrorKind::InvalidArgument, "length cap must be positive");
  const auto sectors = fan_sectors(t, v);
  const double total = sectors[2].start + sectors[2].width;
  auto shot = [&](double theta) {
    const FanDirection d = fan_direction(t, v, theta);
    return shoot_from_vertex(t, d.face, v, d.direction, cap, tol);
  };

  std::vector<double> theta(directions + 1);
  std::vector<ShotKey> keys(directions + 1);
  std::vector<std::optional<SurfaceCurve>> direct(directions + 1);
  detail::parallel_for(directions, [&](int i) {
    theta[i] = (i + 0.5) * total / directions;
    const SurfaceCurve c = shot(theta[i]);
    keys[i] = key_of(c);
    if (c.closed) direct[i] = c;
  });
  theta[directions] = theta[0] + total;
  keys[directions] = keys[0];

  // Bisect every neighbouring pair down to the vertex events behind it.
  std::vector<std::vector<SurfaceCurve>> found(directions);
  detail::parallel_for(directions, [&](int i) {
    struct Job {
      double a, b;
      ShotKey ka, kb;
    };
    std::vector<Job> stack;
    stack.push_back(Job{theta[i], theta[i + 1], keys[i], keys[i + 1]});
    int budget = 4000;
    while (!stack.empty() && budget-- > 0) {
      Job j = std::move(stack.back());
      stack.pop_back();
      const auto w = parting_vertex(j.ka, j.kb, nullptr);
      if (j.ka == j.kb) continue;
      const double width = j.b - j.a;
      const double floor = (w && *w == v) ? 1e-14 : 1e-9;
      if (width <= floor * std::max(1.0, total)) {
        if (w && *w == v) {
          const SurfaceCurve c = shot(0.5 * (j.a + j.b));
          if (c.closed) found[i].push_back(c);
        }
        continue;
      }
      const double mid = 0.5 * (j.a + j.b);
      ShotKey km = key_of(shot(mid));
      stack.push_back(Job{mid, j.b, km, std::move(j.kb)});
      stack.push_back(Job{j.a, mid, std::move(j.ka), std::move(km)});
    }
  });

  SweepReport rep;
  rep.vertex = v;
  rep.directions = directions;
  rep.cap = cap;
  std::vector<SurfaceCurve> raw;
  for (int i = 0; i < directions; ++i) {
    if (direct[i]) raw.push_back(*direct[i]);
    for (auto& c : found[i]) raw.push_back(std::move(c));
  }
  rep.events = static_cast<int>(raw.size());

  for (SurfaceCurve& c : raw) {
    // Replace the near-hit shot by the exact straight loop through its strip.
    std::vector<EdgeId> edges;
    for (const EdgePoint& x : c.crossings()) edges.push_back(x.edge);
    if (auto exact = loop_along(t, v, c.segments.front().face, edges, c.start_direction, tol)) c = std::move(*exact);
    SweepReturn r;
    const CurveSegment& first = c.segments.front();
    const CurveSegment& last = c.segments.back();
    r.angle = fan_angle(t, v, first.face, log_dir(first.start, first.end, tol));
    r.end_angle = fan_angle(t, v, last.face, log_dir(last.end, last.start, tol));
    r.simple = is_simple(c, tol).simple;
    r.sig = signature(c);
    r.curve = std::move(c);
    bool dup = false;
    for (const SweepReturn& o : rep.returns) {
      if (std::abs(o.angle - r.angle) <= 1e-6 && o.curve.crossings().size() == r.curve.crossings().size()) {
        dup = true;
        break;
      }
    }
    if (!dup) rep.returns.push_back(std::move(r));
  }
  std::sort(rep.returns.begin(), rep.returns.end(),
            [](const SweepReturn& a, const SweepReturn& b) { return a.angle < b.angle; });
  return rep;
}

}  // namespace geoloop
