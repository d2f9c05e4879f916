#pragma once

// Two-dimensional constant-curvature geometry on three fixed ambient models:
//   kappa = +1  unit sphere x^2+y^2+z^2 = 1
//   kappa =  0  plane z = 0 (isometries act on the homogeneous lift (x,y,1))
//   kappa = -1  upper sheet of x^2+y^2-z^2 = -1
// Every isometry is a 3x3 matrix acting on the homogeneous lift, so one code
// path serves all three geometries with curvature-dispatched scalar functions.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace geoloop {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class Curvature : int { Hyperbolic = -1, Flat = 0, Spherical = 1 };

int to_int(Curvature k);
Curvature curvature_from_int(int k);
const char* to_string(Curvature k);

/// Numerical thresholds shared by every module.
struct Tolerances {
  double eps_norm = 1e-10;       // model-constraint residuals
  double eps_geom = 1e-9;        // incidence and containment
  double eps_trig = 1e-8;        // triangle-solver consistency
  double eps_vertex = 1e-7;      // vertex-hit classification radius
  double eps_close = 1e-7;       // closure of traced curves (position and direction)
  double eps_antipodal = 1e-7;   // spherical pairs closer than this to pi are rejected
  double eps_class = 1e-8;       // holonomy classification
};

enum class ErrorKind {
  MixedCurvature,
  OffModel,
  AntipodalPair,
  NonTangent,
  DegenerateAngle,
  NoSuchTriangle,
  EuclideanSideUndetermined,
  DegenerateSegment,
  CollinearOverlap,
  InvalidArgument,
  NoRegularTetrahedron,
  NotGluingSchedule,
  ConvexityUndefined,
  NotCoprime,
  NoAxis,
  AxisOutsideEdge,
  LoopConstructionFailed,
  HypothesesNotMet,
  SphericalOnly,
  HyperbolicOnly,
};

const char* to_string(ErrorKind kind);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Scalar trigonometry of curvature kappa: cos/cosh, sin/sinh, identity.
double cos_k(Curvature k, double t);
double sin_k(Curvature k, double t);

/// Bilinear form of the model: Euclidean (+1), Minkowski diag(1,1,-1) (-1),
/// planar xy dot product (0).
double form(Curvature k, const Vec3& u, const Vec3& v);

class ModelPoint {
 public:
  ModelPoint() = default;
  /// Validates the model constraint within eps_norm and snaps onto the model.
  ModelPoint(Curvature k, const Vec3& coords, double eps_norm = Tolerances{}.eps_norm);

  /// Snaps an arbitrary (non-degenerate) ambient vector onto the model without
  /// checking the residual. For kappa=-1 the vector must be timelike.
  static ModelPoint project(Curvature k, const Vec3& v);
  static ModelPoint base(Curvature k);

  Curvature kappa() const { return kappa_; }
  const Vec3& coords() const { return coords_; }
  /// (x,y,1) for kappa=0, the coordinates otherwise.
  Vec3 lift() const;

 private:
  Vec3 coords_ = Vec3(0, 0, 1);
  Curvature kappa_ = Curvature::Spherical;
};

/// Converts a homogeneous vector back into model coordinates.
ModelPoint from_lift(Curvature k, const Vec3& h);

class Isometry2 {
 public:
  Isometry2() = default;
  Isometry2(Curvature k, const Mat3& m) : matrix_(m), kappa_(k) {}

  static Isometry2 identity(Curvature k) { return {k, Mat3::Identity()}; }
  /// Orientation-preserving isometry taking the base point to `origin` and the
  /// first base tangent e1 to the unit tangent `dir`.
  static Isometry2 frame(const ModelPoint& origin, const Vec3& dir);
  /// Reflection across the geodesic through the base point along e1.
  static Isometry2 base_reflection(Curvature k);

  Curvature kappa() const { return kappa_; }
  const Mat3& matrix() const { return matrix_; }

  ModelPoint apply(const ModelPoint& p) const;
  Vec3 apply_tangent(const Vec3& v) const;
  /// Applies the matrix to a homogeneous vector and rescales to unit Euclidean
  /// norm; used to carry far-away points without overflow.
  Vec3 apply_projective(const Vec3& h) const;
  Isometry2 operator*(const Isometry2& rhs) const;
  Isometry2 inverse() const;
  double determinant() const { return matrix_.determinant(); }
  /// Largest residual of the defining constraint (orthogonality, Lorentz form
  /// preservation, rigid-motion block).
  double residual() const;

 private:
  Mat3 matrix_ = Mat3::Identity();
  Curvature kappa_ = Curvature::Spherical;
};

struct GeodesicSegment {
  ModelPoint start;
  ModelPoint end;
  double length = 0.0;
};

GeodesicSegment make_segment(const ModelPoint& p, const ModelPoint& q,
                             const Tolerances& tol = {});

void require_same_kappa(const ModelPoint& p, const ModelPoint& q);

double dist(const ModelPoint& p, const ModelPoint& q);

/// Unit tangent at p of the minimizing geodesic toward q.
Vec3 log_dir(const ModelPoint& p, const ModelPoint& q, const Tolerances& tol = {});
/// Unit tangent at p pointing toward a homogeneous (possibly very distant)
/// point given only up to positive scale.
Vec3 log_dir_projective(const ModelPoint& p, const Vec3& h);

ModelPoint exp_point(const ModelPoint& p, const Vec3& dir, double t,
                     const Tolerances& tol = {});
/// Velocity at parameter t of the unit-speed geodesic exp_point(p, dir, .).
Vec3 transport_dir(const ModelPoint& p, const Vec3& dir, double t);

/// Projects v onto the tangent plane at p and normalizes it.
Vec3 tangent_unit(const ModelPoint& p, const Vec3& v);
/// Rotates a unit tangent at p by `angle` (counterclockwise in the model's
/// orientation).
Vec3 rotate_tangent(const ModelPoint& p, const Vec3& v, double angle);
/// Signed angle from u to v at p, in (-pi, pi].
double signed_angle(const ModelPoint& p, const Vec3& u, const Vec3& v);

double angle_at(const ModelPoint& vertex, const ModelPoint& p, const ModelPoint& q,
                const Tolerances& tol = {});

/// det(lift p, lift q, lift r): positive when r is left of the directed geodesic p->q.
double orient(const ModelPoint& p, const ModelPoint& q, const ModelPoint& r);

bool valid_triangle(double a, double b, double c, Curvature k, double slack = 0.0);
double solve_side_from_angles(double alpha_i, double alpha_j, double alpha_k, Curvature k);
double solve_angle_from_sides(double a, double b, double c, Curvature k);

Isometry2 reflect_across(const GeodesicSegment& seg);

std::optional<ModelPoint> intersect_segments(const GeodesicSegment& s1, const GeodesicSegment& s2,
                                             const Tolerances& tol = {});

struct SegmentFoot {
  double distance = 0.0;
  ModelPoint point;
  double param = 0.0;  // arclength from seg.start
  bool at_endpoint = false;
};

SegmentFoot point_segment_distance(const ModelPoint& p, const GeodesicSegment& seg,
                                   const Tolerances& tol = {});

/// Distance from p to the full geodesic whose homogeneous plane normal is m
/// (points x on it satisfy m . lift(x) = 0).
double point_line_distance(const ModelPoint& p, const Vec3& m);

}  // namespace geoloop
