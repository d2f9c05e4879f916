#pragma once

// Hyperbolic loops of type (p,q). The strip D(p,q) follows the edge schedule
// of the flat (p,q) closed geodesic; the holonomy carries the last copy of the
// base edge back onto the first. Its axis meets the base edge at the start of
// the closed geodesic, and the segment between the first and last images of
// the loop vertex is the geodesic loop.

#include "geoloop/trace.hpp"

#include <string>
#include <vector>

namespace geoloop {

enum class HolonomyKind { Hyperbolic, Parabolic, Elliptic, Reversing };
const char* to_string(HolonomyKind k);

struct Holonomy {
  Isometry2 isometry;  // chart of the last copy -> chart of the first
  HolonomyKind kind = HolonomyKind::Elliptic;
  double trace = 0.0;
  double translation_length = 0.0;  // hyperbolic only
  // Attracting and repelling fixed points on the light cone (unit Euclidean
  // norm, chart of the first face); hyperbolic only.
  Vec3 attracting = Vec3::Zero();
  Vec3 repelling = Vec3::Zero();
  double axis_residual = 0.0;  // how far the isometry moves its fixed points
  CuttingSequence sequence;
  Development development;  // closed strip: N + 1 faces
};

/// Classifies an orientation-preserving hyperbolic isometry by its trace;
/// Reversing when the determinant is negative.
HolonomyKind classify_isometry(const Isometry2& g, double eps_class, double* trace = nullptr);
/// Same, with the orientation character supplied by the caller.
HolonomyKind classify_isometry(const Isometry2& g, bool preserving, double eps_class, double* trace = nullptr);

/// Holonomy of a schedule. With `flipped` the last copy of the base edge is
/// matched to the first with its endpoints exchanged. Throws "no axis" unless
/// the holonomy is hyperbolic.
Holonomy holonomy(const TetraMetric& t, const CuttingSequence& seq, bool flipped = false, const Tolerances& tol = {});
Holonomy holonomy(const TetraMetric& t, int p, int q, bool flipped = false, const Tolerances& tol = {});

/// Schedule of type (p,q) with `vertex` playing the role of A1.
CuttingSequence loop_sequence(int p, int q, VertexId vertex = 0, const Tolerances& tol = {});

struct ClosedGeodesic {
  SurfaceCurve curve;
  Holonomy holonomy;
  ModelPoint base_point;  // where the axis meets the base edge, chart of the first face
  double base_param = 0.0;
  CrossingReport walk;
  SimplicityReport simplicity;
  CrossingSignature sig;
};

/// Folds the axis of the holonomy into a closed curve starting on the base
/// edge; throws unless it closes, is simple and has the schedule's type.
ClosedGeodesic closed_geodesic(const TetraMetric& t, const CuttingSequence& seq, bool flipped = false,
                               const Tolerances& tol = {});
ClosedGeodesic closed_geodesic(const TetraMetric& t, int p, int q, const Tolerances& tol = {});

struct LoopResult {
  int p = 0;
  int q = 0;
  VertexId vertex = 0;
  CuttingSequence sequence;
  Development development;  // open strip D(p,q)
  CrossingReport walk;
  SurfaceCurve loop;
  std::optional<ClosedGeodesic> closed;  // hyperbolic only
  CrossingSignature sig;
  std::vector<ClearanceEntry> clearance;
  // Interior gluing edges of the strip the loop is expected to cross: all of
  // them except those inside the fans of its two endpoint images.
  std::vector<EdgeId> expected_schedule;
  bool coherent = false;
  bool convex = false;
};

/// Straight walk between the first and last images of `vertex` in D(p,q);
/// reports the outcome without throwing.
LoopResult attempt_vertex_loop(const TetraMetric& t, int p, int q, VertexId vertex = 0, const Tolerances& tol = {});

/// As attempt_vertex_loop, but a failed walk or a non-simple result throws.
/// On hyperbolic tetrahedra the closed geodesic of the same type is built too.
LoopResult vertex_loop(const TetraMetric& t, int p, int q, VertexId vertex = 0, const Tolerances& tol = {});

/// For tetrahedra whose face angles are all at most pi/4: checks that D(p,q)
/// is convex, then builds the loop.
LoopResult general_vertex_loop(const TetraMetric& t, int p, int q, VertexId vertex = 0, const Tolerances& tol = {});

struct UniquenessReport {
  int p = 0;
  int q = 0;
  VertexId vertex = 0;
  int directions = 0;
  double cap = 0.0;
  std::vector<SweepReturn> matches;  // simple returns of type (p,q)
  int classes = 0;                   // up to symmetries fixing the vertex and reversal
  bool contains_constructed = false;
  bool inconclusive = false;  // nothing found under the cap
};

/// Shooting sweep from the vertex collecting the simple loops of type (p,q),
/// grouped by the symmetries of the regular tetrahedron that fix the vertex.
UniquenessReport uniqueness_probe(const TetraMetric& t, int p, int q, int directions, double cap,
                                  VertexId vertex = 0, const Tolerances& tol = {});

/// Whether two loops at the same vertex are related by a vertex permutation
/// fixing it, possibly reversed, with matching lengths.
bool loops_equivalent(const SurfaceCurve& a, const SurfaceCurve& b, double length_tol = 1e-7);

}  // namespace geoloop
