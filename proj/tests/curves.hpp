#pragma once

// Curves built by hand for tests: a straight chord passing a vertex at a given
// distance, traced both ways from its closest point.

#include "support.hpp"

#include "geoloop/trace.hpp"

namespace geoloop::testing {

inline CurveSegment reversed(const CurveSegment& s) {
  CurveSegment r = s;
  std::swap(r.start, r.end);
  std::swap(r.enter, r.exit);
  return r;
}

/// Chord at distance d from vertex v of face f, perpendicular to the corner's
/// bisector, traced `reach` in each direction. Stops early at a vertex hit.
inline SurfaceCurve chord_past_vertex(const TetraMetric& t, FaceId f, VertexId v, double d, double reach) {
  const ModelPoint& corner = t.chart_vertex(f, v);
  std::array<VertexId, 2> others{};
  int n = 0;
  for (VertexId u : topo::face_vertices(f))
    if (u != v) others[n++] = u;
  const Vec3 u1 = log_dir(corner, t.chart_vertex(f, others[0]));
  const Vec3 u2 = log_dir(corner, t.chart_vertex(f, others[1]));
  const Vec3 bis = tangent_unit(corner, u1 + u2);
  const ModelPoint x = exp_point(corner, bis, d);
  const Vec3 back = log_dir(x, corner);
  const Vec3 w = rotate_tangent(x, back, kPi / 2);

  const SurfacePoint start = SurfacePoint::interior(t, f, x);
  const SurfaceCurve fwd = shoot(t, start, w, reach);
  const SurfaceCurve bwd = shoot(t, start, -w, reach);

  SurfaceCurve c;
  for (auto it = bwd.segments.rbegin(); it != bwd.segments.rend(); ++it) c.segments.push_back(reversed(*it));
  // The two halves meet at x inside face f; merge them into one piece.
  CurveSegment mid = c.segments.back();
  c.segments.pop_back();
  mid.end = fwd.segments.front().end;
  mid.exit = fwd.segments.front().exit;
  mid.length += fwd.segments.front().length;
  c.segments.push_back(mid);
  for (std::size_t i = 1; i < fwd.segments.size(); ++i) c.segments.push_back(fwd.segments[i]);
  c.start = bwd.end;
  c.end = fwd.end;
  c.stop = StopReason::Endpoint;
  return c;
}

}  // namespace geoloop::testing
