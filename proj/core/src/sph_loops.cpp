#include "geoloop/sph_loops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"

namespace geoloop {

namespace {

constexpr double kPi = std::numbers::pi;

void require_spherical(const TetraMetric& t) {
  if (t.kappa() != Curvature::Spherical) throw GeometryError(ErrorKind::SphericalOnly, "spherical only");
}

const char* witness_name(WalkOutcome o) {
  switch (o) {
    case WalkOutcome::VertexHit: return "vertex hit";
    case WalkOutcome::BoundaryExit: return "boundary exit";
    case WalkOutcome::StartOutside: return "start outside";
    case WalkOutcome::EndOutside: return "end outside";
    case WalkOutcome::Success: return "";
  }
  return "";
}

int witness_rank(WalkOutcome o) {
  switch (o) {
    case WalkOutcome::VertexHit: return 0;
    case WalkOutcome::BoundaryExit: return 1;
    case WalkOutcome::EndOutside: return 2;
    case WalkOutcome::StartOutside: return 3;
    case WalkOutcome::Success: return -1;
  }
  return 4;
}

SurfaceCurve loop_curve(const Development& dev, const CrossingReport& r, VertexId apex, const Tolerances& tol) {
  const TetraMetric& t = dev.metric();
  SurfaceCurve c = fold(dev, r, tol);
  c.start = SurfacePoint::at_vertex(t, c.segments.front().face, apex);
  c.end = SurfacePoint::at_vertex(t, c.segments.back().face, apex);
  c.closed = true;
  c.loop_vertex = apex;
  c.stop = StopReason::Closed;
  return c;
}

std::pair<VertexId, VertexId> others(VertexId apex, VertexId middle) {
  std::array<VertexId, 2> xy{};
  int n = 0;
  for (VertexId v = 0; v < topo::kVertices; ++v)
    if (v != apex && v != middle) xy[n++] = v;
  return {xy[0], xy[1]};
}

LoopCandidate make_candidate(const TetraMetric& t, VertexId apex, VertexId middle, const Tolerances& tol) {
  LoopCandidate c;
  c.apex = apex;
  c.middle = middle;
  const auto [x, y] = others(apex, middle);
  c.edges = {topo::edge_between(middle, x), topo::edge_between(middle, y)};
  c.development = vertex_pair_development(t, apex, middle, tol);
  c.first_image = c.development.global(0, apex);
  c.last_image = c.development.global(2, apex);
  c.separation = dist(c.first_image, c.last_image);
  return c;
}

}  // namespace

const char* to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Unresolved: return "unresolved";
    case CandidateStatus::Exists: return "exists";
    case CandidateStatus::Blocked: return "blocked";
  }
  return "?";
}

std::vector<LoopCandidate> enumerate_candidates(const TetraMetric& t, VertexId apex, const Tolerances& tol) {
  require_spherical(t);
  if (apex < 0 || apex >= topo::kVertices) throw GeometryError(ErrorKind::InvalidArgument, "apex id out of range");
  std::vector<LoopCandidate> out;
  for (VertexId m = 0; m < topo::kVertices; ++m)
    if (m != apex) out.push_back(make_candidate(t, apex, m, tol));
  return out;
}

LoopCandidate resolve_candidate(LoopCandidate c, const Tolerances& tol) {
  const Development& dev = c.development;
  if (kPi - c.separation <= tol.eps_antipodal) {
    c.status = CandidateStatus::Blocked;
    c.witness = "antipodal";
    c.margin = kPi - c.separation;
    return c;
  }
  const int target = dev.image_index(2, c.apex);
  const ModelPoint& p = c.first_image;
  std::vector<std::pair<Vec3, double>> tries;
  if (c.separation > 1e-9) {
    const Vec3 d = log_dir(p, c.last_image, tol);
    tries.push_back({d, c.separation});
    tries.push_back({-d, 2.0 * kPi - c.separation});
    // A cone angle above 2pi at the middle vertex lets the arc wrap once.
    tries.push_back({d, 2.0 * kPi + c.separation});
  } else {
    const Vec3 w = log_dir(p, dev.global(0, c.middle), tol);
    tries.push_back({rotate_tangent(p, w, kPi / 2), 2.0 * kPi});
    tries.push_back({rotate_tangent(p, w, -kPi / 2), 2.0 * kPi});
  }

  std::optional<CrossingReport> best_fail;
  for (const auto& [dir, len] : tries) {
    CrossingReport r = walk_ray(dev, p, dir, len, target, tol);
    if (r.ok()) {
      SurfaceCurve curve = loop_curve(dev, r, c.apex, tol);
      const SimplicityReport s = is_simple(curve, tol);
      if (!s.simple)
        throw GeometryError(ErrorKind::LoopConstructionFailed, "loop through the strip is not simple: " + s.reason);
      c.status = CandidateStatus::Exists;
      c.curve = std::move(curve);
      c.margin = r.margin;
      c.walk = std::move(r);
      return c;
    }
    if (!best_fail || witness_rank(r.outcome) < witness_rank(best_fail->outcome)) best_fail = std::move(r);
  }
  c.status = CandidateStatus::Blocked;
  c.walk = *best_fail;
  c.witness = witness_name(best_fail->outcome);
  c.witness_vertex = best_fail->vertex;
  c.witness_edge = best_fail->exit_edge;
  c.margin = best_fail->margin;
  return c;
}

bool three_loop_hypotheses(const TetraMetric& t) {
  if (t.kappa() != Curvature::Spherical) return false;
  for (EdgeId e = 0; e < topo::kEdges; ++e)
    if (!(t.edge(e) > kPi / 2)) return false;
  for (FaceId f = 0; f < topo::kFaces; ++f)
    for (VertexId v : topo::face_vertices(f))
      if (!(t.face_angle(f, v) > kPi / 2)) return false;
  return true;
}

bool no_loop_hypotheses(const TetraMetric& t) {
  if (t.kappa() != Curvature::Spherical) return false;
  for (FaceId f = 0; f < topo::kFaces; ++f)
    for (VertexId v : topo::face_vertices(f)) {
      const double a = t.face_angle(f, v);
      if (!(a > kPi / 3 && a < kPi / 2)) return false;
    }
  return true;
}

ConstructedLoop construct_loop(const TetraMetric& t, VertexId apex, VertexId middle, const Tolerances& tol) {
  require_spherical(t);
  if (!three_loop_hypotheses(t))
    throw GeometryError(ErrorKind::HypothesesNotMet, "hypotheses not met: face angles and edges must exceed pi/2");
  if (apex < 0 || apex >= topo::kVertices || middle < 0 || middle >= topo::kVertices || apex == middle)
    throw GeometryError(ErrorKind::InvalidArgument, "apex and middle must be distinct vertices");
  const LoopCandidate c = make_candidate(t, apex, middle, tol);
  const Development& dev = c.development;
  const auto [x, y] = others(apex, middle);

  const ModelPoint m = dev.global(0, middle);
  const ModelPoint& a1 = c.first_image;
  const ModelPoint& a2 = c.last_image;
  ModelPoint pole;
  if (c.separation > 1e-9) {
    // Pole of the great circle through the apex images, on the middle's side.
    Vec3 o = a1.coords().cross(a2.coords()).normalized();
    if (o.dot(m.coords()) < 0.0) o = -o;
    pole = ModelPoint(Curvature::Spherical, o);
  } else {
    // Coincident images: walk a quarter turn along the bisector of the fan's
    // complement, which here is the apex-middle line itself.
    const Vec3 u = log_dir(m, a1, tol);
    const double turn = orient(m, a1, dev.global(0, x)) > 0.0 ? 1.0 : -1.0;
    const double fan = dev.images()[dev.image_index(0, middle)].angle;
    Vec3 b = rotate_tangent(m, u, turn * (fan / 2 + kPi));
    const double a = dist(m, a1);
    double r = std::atan2(-std::cos(a), -std::sin(a) * std::cos(fan / 2));
    if (r < 0.0) {
      b = -b;
      r = -r;
    }
    pole = exp_point(m, b, r, tol);
  }

  ConstructedLoop out;
  PoleCertificate& cert = out.certificate;
  cert.pole = pole;
  cert.to_middle = dist(pole, m);
  cert.to_apex_first = dist(pole, a1);
  cert.to_apex_last = dist(pole, a2);
  for (const VertexImage& im : dev.images())
    if (im.vertex != apex && im.vertex != middle) cert.to_others.push_back(dist(pole, im.point));
  cert.holds = cert.to_middle < kPi / 2;
  for (double d : cert.to_others) cert.holds = cert.holds && d > kPi / 2;
  if (std::abs(cert.to_apex_first - kPi / 2) > tol.eps_trig || std::abs(cert.to_apex_last - kPi / 2) > tol.eps_trig)
    throw GeometryError(ErrorKind::LoopConstructionFailed, "pole is not a quarter turn from both apex images");

  // Walk the great circle about the pole, trying both senses.
  const Vec3 o = pole.coords();
  const Vec3 d = tangent_unit(a1, o.cross(a1.coords()));
  double sweep = std::atan2(a1.coords().cross(a2.coords()).dot(o), a1.coords().dot(a2.coords()));
  if (sweep <= 1e-9) sweep += 2.0 * kPi;
  const int target = dev.image_index(2, apex);
  const double back = sweep >= 2.0 * kPi - 1e-9 ? 2.0 * kPi : 2.0 * kPi - sweep;
  std::vector<std::pair<Vec3, double>> tries{{d, sweep}, {-d, back}, {d, sweep + 2.0 * kPi}, {-d, back + 2.0 * kPi}};
  std::sort(tries.begin(), tries.end(), [](const auto& l, const auto& r) { return l.second < r.second; });
  for (const auto& [dir, len] : tries) {
    if (len >= 3.0 * kPi) continue;
    CrossingReport w = walk_ray(dev, a1, dir, len, target, tol);
    if (!w.ok()) continue;
    out.curve = loop_curve(dev, w, apex, tol);
    out.walk = std::move(w);
    return out;
  }
  throw GeometryError(ErrorKind::LoopConstructionFailed, "great circle about the pole leaves the strip");
}

int LoopCensus::exists() const {
  int n = 0;
  for (const CensusRow& r : rows)
    for (const LoopCandidate& c : r.candidates) n += c.status == CandidateStatus::Exists;
  return n;
}

LoopCensus loop_census(const TetraMetric& t, const Tolerances& tol) {
  require_spherical(t);
  LoopCensus census;
  census.regime = three_loop_hypotheses(t) ? "three loops" : no_loop_hypotheses(t) ? "no loops" : "outside proven range";
  census.rows.resize(topo::kVertices);
  for (VertexId v = 0; v < topo::kVertices; ++v) {
    census.rows[v].apex = v;
    census.rows[v].candidates = enumerate_candidates(t, v, tol);
  }
  detail::parallel_for(topo::kVertices * 3, [&](int i) {
    LoopCandidate& c = census.rows[i / 3].candidates[i % 3];
    c = resolve_candidate(std::move(c), tol);
  });
  return census;
}

double curve_distance(const SurfaceCurve& a, const SurfaceCurve& b) {
  if (a.segments.size() != b.segments.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const CurveSegment& s = a.segments[i];
    const CurveSegment& r = b.segments[i];
    if (s.face != r.face) return std::numeric_limits<double>::infinity();
    worst = std::max({worst, dist(s.start, r.start), dist(s.end, r.end)});
  }
  return worst;
}

}  // namespace geoloop
