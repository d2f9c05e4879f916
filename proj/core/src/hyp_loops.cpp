#include "geoloop/hyp_loops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace geoloop {

namespace {

constexpr double kPi = std::numbers::pi;

void require_hyperbolic(const TetraMetric& t) {
  if (t.kappa() != Curvature::Hyperbolic) throw GeometryError(ErrorKind::HyperbolicOnly, "hyperbolic only");
}

// Even permutation sending A1 to v.
std::array<VertexId, 4> anchor_perm(VertexId v) {
  switch (v) {
    case 0: return {0, 1, 2, 3};
    case 1: return {1, 0, 3, 2};
    case 2: return {2, 3, 0, 1};
    case 3: return {3, 2, 1, 0};
  }
  throw GeometryError(ErrorKind::InvalidArgument, "vertex id out of range");
}

// Half-turn about the midpoint of the base edge, in the chart of the first face.
Isometry2 edge_half_turn(const TetraMetric& t, FaceId f, EdgeId e) {
  const auto ev = topo::edge_vertices(e);
  const ModelPoint& a = t.chart_vertex(f, ev[0]);
  const ModelPoint& b = t.chart_vertex(f, ev[1]);
  const ModelPoint mid = exp_point(a, log_dir(a, b), 0.5 * t.edge(e));
  const Isometry2 fr = Isometry2::frame(mid, log_dir(mid, b));
  Mat3 r = Mat3::Identity();
  r(0, 0) = -1.0;
  r(1, 1) = -1.0;
  return fr * Isometry2(t.kappa(), r) * fr.inverse();
}

Vec3 future_null(Vec3 v) {
  v.normalize();
  return v.z() < 0.0 ? Vec3(-v) : v;
}

// Carries homogeneous vectors through the chain of gluings chart by chart.
class Chain {
 public:
  Chain(const Development& d, std::optional<Isometry2> tail) : d_(d), tail_(std::move(tail)) {}

  // h = G_1 ... G_N (tail)
  Vec3 forward(Vec3 x) const {
    if (tail_) x = tail_->apply_projective(x);
    for (int k = d_.size() - 1; k >= 1; --k) x = d_.face(k).glue.apply_projective(x);
    return x;
  }
  Vec3 backward(Vec3 x) const {
    for (int k = 1; k < d_.size(); ++k) x = d_.face(k).glue.inverse().apply_projective(x);
    if (tail_) x = tail_->inverse().apply_projective(x);
    return x;
  }

 private:
  const Development& d_;
  std::optional<Isometry2> tail_;
};

template <class Step>
Vec3 power_iterate(Step step) {
  Vec3 x = Vec3(0.31, 0.17, 1.0).normalized();
  for (int i = 0; i < 500; ++i) {
    const Vec3 y = future_null(step(x));
    const double change = (y - x).norm();
    x = y;
    if (change < 1e-16) break;
  }
  return x;
}

LoopResult attempt(const TetraMetric& t, int p, int q, VertexId v, const Tolerances& tol) {
  LoopResult r;
  r.p = p;
  r.q = q;
  r.vertex = v;
  r.sequence = loop_sequence(p, q, v, tol);
  r.development = unroll(t, r.sequence, false, tol);
  const Development& dev = r.development;
  const int last = dev.size() - 1;
  const int first_image = dev.image_index(0, v);
  const int last_image = dev.image_index(last, v);
  if (first_image < 0 || last_image < 0 || first_image == last_image)
    throw GeometryError(ErrorKind::LoopConstructionFailed, "strip does not hold two images of the vertex");

  for (const GluingEdge& g : dev.gluings()) {
    const auto ev = topo::edge_vertices(g.edge);
    const bool at_v = ev[0] == v || ev[1] == v;
    if (at_v) {
      const int im = dev.image_index(g.from, v);
      if (im == first_image || im == last_image) continue;
    }
    r.expected_schedule.push_back(g.edge);
  }
  try {
    r.convex = is_convex(dev, tol);
  } catch (const GeometryError&) {
    r.convex = false;
  }

  r.walk = walk_between(dev, {0, dev.corner(0, v)}, {last, dev.corner(last, v)}, tol);
  if (!r.walk.ok()) return r;
  r.loop = fold(dev, r.walk, tol);
  r.loop.start = SurfacePoint::at_vertex(t, r.loop.segments.front().face, v);
  r.loop.end = SurfacePoint::at_vertex(t, r.loop.segments.back().face, v);
  r.loop.closed = true;
  r.loop.loop_vertex = v;
  r.loop.stop = StopReason::Closed;
  r.sig = signature(r.loop);
  r.clearance = clearance_check(t, r.walk, dev, v, tol);
  std::vector<EdgeId> crossed;
  for (const WalkCrossing& x : r.walk.crossings) crossed.push_back(x.edge);
  r.coherent = crossed == r.expected_schedule;
  return r;
}

}  // namespace

const char* to_string(HolonomyKind k) {
  switch (k) {
    case HolonomyKind::Hyperbolic: return "hyperbolic";
    case HolonomyKind::Parabolic: return "parabolic";
    case HolonomyKind::Elliptic: return "elliptic";
    case HolonomyKind::Reversing: return "orientation reversing";
  }
  return "?";
}

HolonomyKind classify_isometry(const Isometry2& g, double eps_class, double* trace) {
  return classify_isometry(g, g.determinant() > 0.0, eps_class, trace);
}

HolonomyKind classify_isometry(const Isometry2& g, bool preserving, double eps_class, double* trace) {
  const double tr = g.matrix().trace();
  if (trace) *trace = tr;
  if (!preserving) return HolonomyKind::Reversing;
  const double gap = tr - 3.0;
  if (gap > eps_class * std::max(1.0, std::abs(tr))) return HolonomyKind::Hyperbolic;
  if (std::abs(gap) <= eps_class * std::max(1.0, std::abs(tr))) return HolonomyKind::Parabolic;
  return HolonomyKind::Elliptic;
}

CuttingSequence loop_sequence(int p, int q, VertexId vertex, const Tolerances& tol) {
  const std::array<VertexId, 4> perm = anchor_perm(vertex);
  return relabel_sequence(anchor_sequence(cutting_sequence(p, q, tol), 0), perm);
}

Holonomy holonomy(const TetraMetric& t, const CuttingSequence& seq, bool flipped, const Tolerances& tol) {
  require_hyperbolic(t);
  Holonomy h;
  h.sequence = seq;
  if (seq.edges.size() < 2) {
    h.isometry = Isometry2::identity(t.kappa());
    h.kind = classify_isometry(h.isometry, tol.eps_class, &h.trace);
    throw GeometryError(ErrorKind::NoAxis, std::string("no axis: holonomy is ") + to_string(h.kind));
  }
  h.development = unroll(t, seq, true, tol);
  const int n = h.development.size() - 1;
  std::optional<Isometry2> tail;
  if (flipped) tail = edge_half_turn(t, seq.faces.front(), seq.edges.front());
  h.isometry = h.development.relative(n, 0);
  if (tail) h.isometry = h.isometry * *tail;
  // The product's own determinant is lost to cancellation on long strips.
  bool preserving = !tail || tail->determinant() > 0.0;
  for (int i = 1; i <= n; ++i) preserving = preserving == (h.development.face(i).glue.determinant() > 0.0);
  h.kind = classify_isometry(h.isometry, preserving, tol.eps_class, &h.trace);
  if (h.kind != HolonomyKind::Hyperbolic)
    throw GeometryError(ErrorKind::NoAxis, std::string("no axis: holonomy is ") + to_string(h.kind));
  h.translation_length = std::acosh(0.5 * (h.trace - 1.0));

  const Chain chain(h.development, tail);
  h.attracting = power_iterate([&](const Vec3& x) { return chain.forward(x); });
  h.repelling = power_iterate([&](const Vec3& x) { return chain.backward(x); });
  const Curvature k = t.kappa();
  const double null_a = std::abs(form(k, h.attracting, h.attracting));
  const double null_r = std::abs(form(k, h.repelling, h.repelling));
  // Each fixed point is checked under the map that contracts toward it.
  h.axis_residual = std::max({(future_null(chain.forward(h.attracting)) - h.attracting).norm(),
                              (future_null(chain.backward(h.repelling)) - h.repelling).norm(), null_a, null_r});
  return h;
}

Holonomy holonomy(const TetraMetric& t, int p, int q, bool flipped, const Tolerances& tol) {
  return holonomy(t, cutting_sequence(p, q, tol), flipped, tol);
}

ClosedGeodesic closed_geodesic(const TetraMetric& t, const CuttingSequence& seq, bool flipped, const Tolerances& tol) {
  ClosedGeodesic out;
  out.holonomy = holonomy(t, seq, flipped, tol);
  const Holonomy& h = out.holonomy;
  const Development& dev = h.development;
  const Curvature k = t.kappa();
  const FaceId f0 = seq.faces.front();
  const EdgeId base = seq.edges.front();
  const auto ev = topo::edge_vertices(base);
  const ModelPoint& a = t.chart_vertex(f0, ev[0]);
  const ModelPoint& b = t.chart_vertex(f0, ev[1]);

  // Axis meets the base edge line.
  const Vec3 axis = h.attracting.cross(h.repelling);
  Vec3 x = axis.cross(a.lift().cross(b.lift()));
  if (!(-form(k, x, x) > 1e-14 * x.squaredNorm()))
    throw GeometryError(ErrorKind::AxisOutsideEdge, "axis outside edge: it misses the base edge line");
  if (x.z() < 0.0) x = -x;
  const ModelPoint a0 = ModelPoint::project(k, x);
  const double along = dist(a, a0);
  const double back = dist(a0, b);
  if (std::abs(along + back - t.edge(base)) > tol.eps_geom || along <= tol.eps_vertex || back <= tol.eps_vertex)
    throw GeometryError(ErrorKind::AxisOutsideEdge, "axis outside edge: crossing at distance " +
                                                        std::to_string(along) + " from " +
                                                        topo::vertex_name(ev[0]));
  out.base_point = a0;
  out.base_param = along / t.edge(base);

  const Vec3 w = log_dir_projective(a0, h.attracting);
  const ModelPoint& apex = t.chart_vertex(f0, topo::apex_of(f0, base));
  const double side = orient(a, b, apex);
  if (side * orient(a, b, exp_point(a0, w, 1e-3)) <= 0.0)
    throw GeometryError(ErrorKind::LoopConstructionFailed, "axis runs out of the strip at the base edge");

  ModelPoint target = a0;
  if (flipped) target = edge_half_turn(t, f0, base).apply(a0);
  // The target sits on the entry edge of the last copy; end the walk in the
  // face before it so the final piece is not degenerate.
  const int n = dev.size() - 1;
  out.walk = walk_between(dev, {0, a0}, {n - 1, dev.face(n).glue.apply(target)}, tol);
  if (!out.walk.ok())
    throw GeometryError(ErrorKind::LoopConstructionFailed,
                        std::string("closed geodesic walk failed: ") + to_string(out.walk.outcome));

  SurfaceCurve c = fold(dev, out.walk, tol);
  CurveSegment& lastseg = c.segments.back();
  if (dev.gluings()[n - 1].edge != base)
    throw GeometryError(ErrorKind::LoopConstructionFailed, "closed geodesic does not return through the base edge");
  lastseg.exit = EdgePoint{base, edge_parameter(t, lastseg.face, base, lastseg.end)};
  c.segments.front().enter = EdgePoint{base, out.base_param};
  c.start = SurfacePoint::on_edge(t, f0, base, out.base_param);
  c.end = c.start;
  c.start_direction = w;
  c.closed = true;
  c.stop = StopReason::Closed;

  // Compare the arrival, carried into the first face, with the departure.
  const Isometry2 into = gluing_map(t, lastseg.face, f0, base).inverse();
  const ModelPoint arrive = into.apply(lastseg.end);
  const Vec3 heading = tangent_unit(arrive, into.apply_tangent(-log_dir(lastseg.end, lastseg.start, tol)));
  const Vec3 gap = heading - w;
  c.closure_error = dist(arrive, a0) + std::sqrt(std::max(0.0, form(k, gap, gap)));
  out.curve = std::move(c);
  if (out.curve.closure_error > tol.eps_close)
    throw GeometryError(ErrorKind::LoopConstructionFailed,
                        "closed geodesic does not close: mismatch " + std::to_string(out.curve.closure_error));

  out.simplicity = is_simple(out.curve, tol);
  if (!out.simplicity.simple)
    throw GeometryError(ErrorKind::LoopConstructionFailed, "closed geodesic is not simple: " + out.simplicity.reason);
  out.sig = signature(out.curve);
  if (!out.sig.type || out.sig.type->first != seq.p || out.sig.type->second != seq.q || !out.sig.aligned)
    throw GeometryError(ErrorKind::LoopConstructionFailed, "closed geodesic has the wrong crossing signature");
  return out;
}

ClosedGeodesic closed_geodesic(const TetraMetric& t, int p, int q, const Tolerances& tol) {
  return closed_geodesic(t, cutting_sequence(p, q, tol), false, tol);
}

LoopResult attempt_vertex_loop(const TetraMetric& t, int p, int q, VertexId vertex, const Tolerances& tol) {
  return attempt(t, p, q, vertex, tol);
}

LoopResult vertex_loop(const TetraMetric& t, int p, int q, VertexId vertex, const Tolerances& tol) {
  LoopResult r = attempt(t, p, q, vertex, tol);
  if (!r.walk.ok()) {
    std::string msg = std::string("loop construction failed: ") + to_string(r.walk.outcome);
    if (r.walk.vertex) msg += " at " + topo::vertex_name(*r.walk.vertex);
    throw GeometryError(ErrorKind::LoopConstructionFailed, msg);
  }
  const SimplicityReport s = is_simple(r.loop, tol);
  if (!s.simple) throw GeometryError(ErrorKind::LoopConstructionFailed, "loop construction failed: " + s.reason);
  if (t.kappa() == Curvature::Hyperbolic) r.closed = closed_geodesic(t, r.sequence, false, tol);
  return r;
}

LoopResult general_vertex_loop(const TetraMetric& t, int p, int q, VertexId vertex, const Tolerances& tol) {
  require_hyperbolic(t);
  for (FaceId f = 0; f < topo::kFaces; ++f)
    for (VertexId v : topo::face_vertices(f))
      if (t.face_angle(f, v) > kPi / 4 + 1e-12)
        throw GeometryError(ErrorKind::HypothesesNotMet, "outside hypotheses: face angles must not exceed pi/4");
  const Development dev = unroll(t, loop_sequence(p, q, vertex, tol), false, tol);
  if (!is_convex(dev, tol))
    throw GeometryError(ErrorKind::LoopConstructionFailed, "loop construction failed: development is not convex");
  return vertex_loop(t, p, q, vertex, tol);
}

bool loops_equivalent(const SurfaceCurve& a, const SurfaceCurve& b, double length_tol) {
  if (!a.loop_vertex || !b.loop_vertex || *a.loop_vertex != *b.loop_vertex) return false;
  if (std::abs(a.length() - b.length()) > length_tol) return false;
  const VertexId v = *a.loop_vertex;
  std::vector<EdgeId> ea, eb;
  for (const EdgePoint& x : a.crossings()) ea.push_back(x.edge);
  for (const EdgePoint& x : b.crossings()) eb.push_back(x.edge);
  if (ea.size() != eb.size()) return false;
  std::vector<EdgeId> rb(eb.rbegin(), eb.rend());
  std::array<VertexId, 4> perm{0, 1, 2, 3};
  do {
    if (perm[v] != v) continue;
    std::vector<EdgeId> mapped;
    for (EdgeId e : ea) {
      const auto ev = topo::edge_vertices(e);
      mapped.push_back(topo::edge_between(perm[ev[0]], perm[ev[1]]));
    }
    if (mapped == eb || mapped == rb) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

UniquenessReport uniqueness_probe(const TetraMetric& t, int p, int q, int directions, double cap, VertexId vertex,
                                  const Tolerances& tol) {
  UniquenessReport rep;
  rep.p = p;
  rep.q = q;
  rep.vertex = vertex;
  rep.directions = directions;
  rep.cap = cap;
  if (p < 0 || q < 0 || std::gcd(p, q) != 1) throw GeometryError(ErrorKind::NotCoprime, "not coprime");
  const SweepReport sweep = vertex_sweep(t, vertex, directions, cap, tol);
  for (const SweepReturn& r : sweep.returns) {
    if (!r.simple || !r.sig.type) continue;
    const auto [a, b] = *r.sig.type;
    if ((a == p && b == q) || (a == q && b == p)) rep.matches.push_back(r);
  }
  rep.inconclusive = rep.matches.empty();
  std::vector<const SurfaceCurve*> reps;
  for (const SweepReturn& r : rep.matches) {
    const bool known = std::any_of(reps.begin(), reps.end(),
                                   [&](const SurfaceCurve* c) { return loops_equivalent(*c, r.curve); });
    if (!known) reps.push_back(&r.curve);
  }
  rep.classes = static_cast<int>(reps.size());
  try {
    const LoopResult built = vertex_loop(t, p, q, vertex, tol);
    rep.contains_constructed = std::any_of(rep.matches.begin(), rep.matches.end(), [&](const SweepReturn& r) {
      return loops_equivalent(built.loop, r.curve);
    });
  } catch (const GeometryError&) {
    rep.contains_constructed = false;
  }
  return rep;
}

}  // namespace geoloop
