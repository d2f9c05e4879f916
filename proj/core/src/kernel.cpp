#include "geoloop/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoloop {

namespace {

constexpr double kPi = std::numbers::pi;

const Mat3& minkowski() {
  static const Mat3 J = Vec3(1.0, 1.0, -1.0).asDiagonal();
  return J;
}


// Scale factor turning m . lift(x) into sin/sinh/plain distance to the geodesic
// with homogeneous normal m.
double normal_scale(Curvature k, const Vec3& m) {
  switch (k) {
    case Curvature::Spherical:
      return m.norm();
    case Curvature::Hyperbolic:
      return std::sqrt(std::max(0.0, m.dot(minkowski() * m)));
    case Curvature::Flat:
      return std::hypot(m.x(), m.y());
  }
  return 1.0;
}

// Signed sin/sinh/plain distance from x to the geodesic p->q; positive on the left.
double side_distance(const ModelPoint& p, const ModelPoint& q, const ModelPoint& x) {
  const Vec3 m = p.lift().cross(q.lift());
  const double s = normal_scale(p.kappa(), m);
  if (s == 0.0) return 0.0;
  return m.dot(x.lift()) / s;
}

// Arclength parameter of a point `f` (assumed on the geodesic through p with
// unit tangent u) measured from p.
double line_param(const ModelPoint& p, const Vec3& u, const ModelPoint& f) {
  const Curvature k = p.kappa();
  switch (k) {
    case Curvature::Spherical:
      return std::atan2(f.coords().dot(u), f.coords().dot(p.coords()));
    case Curvature::Hyperbolic:
      return std::asinh(form(k, f.coords(), u));
    case Curvature::Flat:
      return (f.coords() - p.coords()).dot(u);
  }
  return 0.0;
}

Vec3 perp_tangent(const ModelPoint& p, const Vec3& v) {
  switch (p.kappa()) {
    case Curvature::Spherical:
      return p.coords().cross(v);
    case Curvature::Hyperbolic: {
      Vec3 w = minkowski() * p.coords().cross(v);
      return w;
    }
    case Curvature::Flat:
      return Vec3(-v.y(), v.x(), 0.0);
  }
  return v;
}

}  // namespace

int to_int(Curvature k) { return static_cast<int>(k); }

Curvature curvature_from_int(int k) {
  switch (k) {
    case 1:
      return Curvature::Spherical;
    case 0:
      return Curvature::Flat;
    case -1:
      return Curvature::Hyperbolic;
    default:
      throw GeometryError(ErrorKind::InvalidArgument, "curvature must be one of 1, 0, -1");
  }
}

const char* to_string(Curvature k) {
  switch (k) {
    case Curvature::Spherical:
      return "spherical";
    case Curvature::Flat:
      return "flat";
    case Curvature::Hyperbolic:
      return "hyperbolic";
  }
  return "?";
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MixedCurvature: return "mixed curvature";
    case ErrorKind::OffModel: return "point off model";
    case ErrorKind::AntipodalPair: return "antipodal pair";
    case ErrorKind::NonTangent: return "non-tangent direction";
    case ErrorKind::DegenerateAngle: return "degenerate angle";
    case ErrorKind::NoSuchTriangle: return "no such triangle";
    case ErrorKind::EuclideanSideUndetermined: return "angles do not determine Euclidean side";
    case ErrorKind::DegenerateSegment: return "degenerate segment";
    case ErrorKind::CollinearOverlap: return "collinear overlap";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::NoRegularTetrahedron: return "no regular tetrahedron with this face angle";
    case ErrorKind::NotGluingSchedule: return "not a gluing schedule";
    case ErrorKind::ConvexityUndefined: return "convexity undefined";
    case ErrorKind::NotCoprime: return "not coprime";
    case ErrorKind::NoAxis: return "no axis";
    case ErrorKind::AxisOutsideEdge: return "axis outside edge";
    case ErrorKind::LoopConstructionFailed: return "loop construction failed";
    case ErrorKind::HypothesesNotMet: return "hypotheses not met";
    case ErrorKind::SphericalOnly: return "spherical only";
    case ErrorKind::HyperbolicOnly: return "hyperbolic only";
  }
  return "?";
}

double cos_k(Curvature k, double t) {
  switch (k) {
    case Curvature::Spherical: return std::cos(t);
    case Curvature::Hyperbolic: return std::cosh(t);
    case Curvature::Flat: return 1.0;
  }
  return 1.0;
}

double sin_k(Curvature k, double t) {
  switch (k) {
    case Curvature::Spherical: return std::sin(t);
    case Curvature::Hyperbolic: return std::sinh(t);
    case Curvature::Flat: return t;
  }
  return t;
}

double form(Curvature k, const Vec3& u, const Vec3& v) {
  switch (k) {
    case Curvature::Spherical: return u.dot(v);
    case Curvature::Hyperbolic: return u.x() * v.x() + u.y() * v.y() - u.z() * v.z();
    case Curvature::Flat: return u.x() * v.x() + u.y() * v.y();
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// ModelPoint

ModelPoint::ModelPoint(Curvature k, const Vec3& coords, double eps_norm) : kappa_(k) {
  switch (k) {
    case Curvature::Spherical:
      if (std::abs(coords.squaredNorm() - 1.0) > eps_norm)
        throw GeometryError(ErrorKind::OffModel, "point is not on the unit sphere");
      coords_ = coords.normalized();
      break;
    case Curvature::Hyperbolic:
      if (std::abs(form(k, coords, coords) + 1.0) > eps_norm * std::max(1.0, coords.squaredNorm()) ||
          coords.z() <= 0.0)
        throw GeometryError(ErrorKind::OffModel, "point is not on the upper hyperboloid");
      coords_ = coords / std::sqrt(-form(k, coords, coords));
      break;
    case Curvature::Flat:
      if (std::abs(coords.z()) > eps_norm)
        throw GeometryError(ErrorKind::OffModel, "planar point must have z = 0");
      coords_ = Vec3(coords.x(), coords.y(), 0.0);
      break;
  }
}

ModelPoint ModelPoint::project(Curvature k, const Vec3& v) {
  ModelPoint p;
  p.kappa_ = k;
  switch (k) {
    case Curvature::Spherical: {
      const double n = v.norm();
      if (n == 0.0) throw GeometryError(ErrorKind::OffModel, "zero vector");
      p.coords_ = v / n;
      break;
    }
    case Curvature::Hyperbolic: {
      const double q = -form(k, v, v);
      if (!(q > 1e-14 * v.squaredNorm())) {
        // Nearly null from rounding in a long product: clamp the Klein radius.
        if (!(std::abs(q) <= 1e-6 * v.squaredNorm()) || v.z() == 0.0)
          throw GeometryError(ErrorKind::OffModel, "vector is not timelike");
        Eigen::Vector2d klein = v.head<2>() / v.z();
        const double r2 = klein.squaredNorm();
        const double cap = 1.0 - 1e-14;
        if (r2 > cap) klein *= std::sqrt(cap / r2);
        const double z = 1.0 / std::sqrt(1.0 - klein.squaredNorm());
        p.coords_ = Vec3(klein.x() * z, klein.y() * z, z);
        break;
      }
      p.coords_ = v / std::sqrt(q);
      if (p.coords_.z() < 0.0) p.coords_ = -p.coords_;
      break;
    }
    case Curvature::Flat:
      p.coords_ = Vec3(v.x(), v.y(), 0.0);
      break;
  }
  return p;
}

ModelPoint ModelPoint::base(Curvature k) {
  return project(k, k == Curvature::Flat ? Vec3(0, 0, 0) : Vec3(0, 0, 1));
}

Vec3 ModelPoint::lift() const {
  if (kappa_ == Curvature::Flat) return Vec3(coords_.x(), coords_.y(), 1.0);
  return coords_;
}

ModelPoint from_lift(Curvature k, const Vec3& h) {
  if (k == Curvature::Flat) {
    if (h.z() == 0.0) throw GeometryError(ErrorKind::OffModel, "point at infinity");
    return ModelPoint::project(k, Vec3(h.x() / h.z(), h.y() / h.z(), 0.0));
  }
  return ModelPoint::project(k, h);
}

// ---------------------------------------------------------------------------
// Isometry2

Isometry2 Isometry2::frame(const ModelPoint& origin, const Vec3& dir) {
  const Curvature k = origin.kappa();
  const Vec3 u = tangent_unit(origin, dir);
  Vec3 w = perp_tangent(origin, u);
  if (k == Curvature::Hyperbolic) w /= std::sqrt(form(k, w, w));
  if (k == Curvature::Spherical) w.normalize();
  Mat3 m;
  m.col(0) = u;
  m.col(1) = w;
  m.col(2) = origin.lift();
  if (k == Curvature::Flat) {
    m(2, 0) = 0.0;
    m(2, 1) = 0.0;
  }
  return {k, m};
}

Isometry2 Isometry2::base_reflection(Curvature k) {
  return {k, Vec3(1.0, -1.0, 1.0).asDiagonal()};
}

ModelPoint Isometry2::apply(const ModelPoint& p) const {
  if (p.kappa() != kappa_) throw GeometryError(ErrorKind::MixedCurvature, "mixed curvature");
  return from_lift(kappa_, matrix_ * p.lift());
}

Vec3 Isometry2::apply_tangent(const Vec3& v) const {
  if (kappa_ == Curvature::Flat) {
    const Vec3 r = matrix_ * Vec3(v.x(), v.y(), 0.0);
    return Vec3(r.x(), r.y(), 0.0);
  }
  return matrix_ * v;
}

Vec3 Isometry2::apply_projective(const Vec3& h) const {
  Vec3 r = matrix_ * h;
  return r / r.norm();
}

Isometry2 Isometry2::operator*(const Isometry2& rhs) const {
  if (rhs.kappa_ != kappa_) throw GeometryError(ErrorKind::MixedCurvature, "mixed curvature");
  return {kappa_, matrix_ * rhs.matrix_};
}

Isometry2 Isometry2::inverse() const {
  switch (kappa_) {
    case Curvature::Spherical:
      return {kappa_, matrix_.transpose()};
    case Curvature::Hyperbolic:
      return {kappa_, minkowski() * matrix_.transpose() * minkowski()};
    case Curvature::Flat: {
      Mat3 inv = Mat3::Identity();
      const Eigen::Matrix2d rt = matrix_.topLeftCorner<2, 2>().transpose();
      inv.topLeftCorner<2, 2>() = rt;
      inv.topRightCorner<2, 1>() = -rt * matrix_.topRightCorner<2, 1>();
      return {kappa_, inv};
    }
  }
  return *this;
}

double Isometry2::residual() const {
  switch (kappa_) {
    case Curvature::Spherical:
      return (matrix_.transpose() * matrix_ - Mat3::Identity()).cwiseAbs().maxCoeff();
    case Curvature::Hyperbolic: {
      const double scale = std::max(1.0, matrix_.squaredNorm());
      double r = (matrix_.transpose() * minkowski() * matrix_ - minkowski()).cwiseAbs().maxCoeff() / scale;
      if (matrix_(2, 2) <= 0.0) r = std::max(r, 1.0);  // swaps the sheets
      return r;
    }
    case Curvature::Flat: {
      const Eigen::Matrix2d r = matrix_.topLeftCorner<2, 2>();
      double res = (r.transpose() * r - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
      res = std::max(res, std::abs(matrix_(2, 0)) + std::abs(matrix_(2, 1)) + std::abs(matrix_(2, 2) - 1.0));
      return res;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Metric operations

void require_same_kappa(const ModelPoint& p, const ModelPoint& q) {
  if (p.kappa() != q.kappa()) throw GeometryError(ErrorKind::MixedCurvature, "mixed curvature");
}

double dist(const ModelPoint& p, const ModelPoint& q) {
  require_same_kappa(p, q);
  const Vec3& a = p.coords();
  const Vec3& b = q.coords();
  switch (p.kappa()) {
    case Curvature::Spherical:
      return std::atan2(a.cross(b).norm(), a.dot(b));
    case Curvature::Hyperbolic: {
      const Vec3 d = a - b;
      return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, form(p.kappa(), d, d))));
    }
    case Curvature::Flat:
      return (a - b).norm();
  }
  return 0.0;
}

GeodesicSegment make_segment(const ModelPoint& p, const ModelPoint& q, const Tolerances& tol) {
  require_same_kappa(p, q);
  const double len = dist(p, q);
  if (p.kappa() == Curvature::Spherical && len > kPi - tol.eps_antipodal)
    throw GeometryError(ErrorKind::AntipodalPair, "antipodal pair");
  return {p, q, len};
}

Vec3 tangent_unit(const ModelPoint& p, const Vec3& v) {
  const Curvature k = p.kappa();
  Vec3 u;
  switch (k) {
    case Curvature::Spherical:
      u = v - v.dot(p.coords()) * p.coords();
      break;
    case Curvature::Hyperbolic:
      u = v + form(k, v, p.coords()) * p.coords();
      break;
    case Curvature::Flat:
      u = Vec3(v.x(), v.y(), 0.0);
      break;
  }
  const double n2 = form(k, u, u);
  if (!(n2 > 0.0)) throw GeometryError(ErrorKind::NonTangent, "zero tangent vector");
  return u / std::sqrt(n2);
}

Vec3 log_dir(const ModelPoint& p, const ModelPoint& q, const Tolerances& tol) {
  require_same_kappa(p, q);
  const double d = dist(p, q);
  if (d <= 0.0 || (p.kappa() != Curvature::Spherical && d < 1e-300))
    throw GeometryError(ErrorKind::DegenerateAngle, "degenerate angle");
  if (p.kappa() == Curvature::Spherical && d > kPi - tol.eps_antipodal)
    throw GeometryError(ErrorKind::AntipodalPair, "antipodal pair");
  if (p.kappa() == Curvature::Flat) return tangent_unit(p, q.coords() - p.coords());
  return tangent_unit(p, q.coords());
}

Vec3 log_dir_projective(const ModelPoint& p, const Vec3& h) {
  if (p.kappa() == Curvature::Flat) {
    const Vec3 d(h.x() - h.z() * p.coords().x(), h.y() - h.z() * p.coords().y(), 0.0);
    return tangent_unit(p, h.z() < 0.0 ? Vec3(-d) : d);
  }
  return tangent_unit(p, h);
}

ModelPoint exp_point(const ModelPoint& p, const Vec3& dir, double t, const Tolerances& tol) {
  const Curvature k = p.kappa();
  const double tangency = std::abs(form(k, p.coords(), dir));
  const double unit = std::abs(form(k, dir, dir) - 1.0);
  const double scale = k == Curvature::Hyperbolic ? std::max(1.0, p.coords().squaredNorm()) : 1.0;
  if ((k != Curvature::Flat && tangency > tol.eps_norm * scale) || unit > tol.eps_norm * scale ||
      (k == Curvature::Flat && dir.z() != 0.0))
    throw GeometryError(ErrorKind::NonTangent, "direction is not a unit tangent");
  if (k == Curvature::Flat) return ModelPoint::project(k, p.coords() + t * dir);
  return ModelPoint::project(k, cos_k(k, t) * p.coords() + sin_k(k, t) * dir);
}

Vec3 transport_dir(const ModelPoint& p, const Vec3& dir, double t) {
  switch (p.kappa()) {
    case Curvature::Spherical:
      return -std::sin(t) * p.coords() + std::cos(t) * dir;
    case Curvature::Hyperbolic:
      return std::sinh(t) * p.coords() + std::cosh(t) * dir;
    case Curvature::Flat:
      return dir;
  }
  return dir;
}

Vec3 rotate_tangent(const ModelPoint& p, const Vec3& v, double angle) {
  const Vec3 u = tangent_unit(p, v);
  Vec3 w = perp_tangent(p, u);
  w /= std::sqrt(form(p.kappa(), w, w));
  return std::cos(angle) * u + std::sin(angle) * w;
}

double signed_angle(const ModelPoint& p, const Vec3& u, const Vec3& v) {
  const Curvature k = p.kappa();
  const Vec3 uu = tangent_unit(p, u);
  const Vec3 vv = tangent_unit(p, v);
  Vec3 w = perp_tangent(p, uu);
  w /= std::sqrt(form(k, w, w));
  return std::atan2(form(k, vv, w), form(k, vv, uu));
}

double angle_at(const ModelPoint& vertex, const ModelPoint& p, const ModelPoint& q,
                const Tolerances& tol) {
  require_same_kappa(vertex, p);
  require_same_kappa(vertex, q);
  if (dist(vertex, p) <= tol.eps_geom * 1e-3 || dist(vertex, q) <= tol.eps_geom * 1e-3)
    throw GeometryError(ErrorKind::DegenerateAngle, "degenerate angle");
  return std::abs(signed_angle(vertex, log_dir(vertex, p, tol), log_dir(vertex, q, tol)));
}

double orient(const ModelPoint& p, const ModelPoint& q, const ModelPoint& r) {
  require_same_kappa(p, q);
  require_same_kappa(p, r);
  return p.lift().dot(q.lift().cross(r.lift()));
}

// ---------------------------------------------------------------------------
// Triangle solvers

bool valid_triangle(double a, double b, double c, Curvature k, double slack) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) return false;
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return false;
  if (a >= b + c + slack || b >= a + c + slack || c >= a + b + slack) return false;
  if (k == Curvature::Spherical) {
    if (a >= kPi || b >= kPi || c >= kPi) return false;
    if (a + b + c >= 2.0 * kPi + slack) return false;
  }
  return true;
}

double solve_side_from_angles(double alpha_i, double alpha_j, double alpha_k, Curvature k) {
  if (k == Curvature::Flat)
    throw GeometryError(ErrorKind::EuclideanSideUndetermined, "angles do not determine Euclidean side");
  for (double a : {alpha_i, alpha_j, alpha_k})
    if (!(a > 0.0 && a < kPi)) throw GeometryError(ErrorKind::NoSuchTriangle, "no such triangle");
  const double sum = alpha_i + alpha_j + alpha_k;
  if (k == Curvature::Spherical && !(sum > kPi))
    throw GeometryError(ErrorKind::NoSuchTriangle, "no such triangle");
  if (k == Curvature::Hyperbolic && !(sum < kPi))
    throw GeometryError(ErrorKind::NoSuchTriangle, "no such triangle");
  const double c = (std::cos(alpha_i) + std::cos(alpha_j) * std::cos(alpha_k)) /
                   (std::sin(alpha_j) * std::sin(alpha_k));
  if (k == Curvature::Spherical) {
    if (std::abs(c) >= 1.0) throw GeometryError(ErrorKind::NoSuchTriangle, "no such triangle");
    return std::acos(c);
  }
  if (!(c > 1.0)) throw GeometryError(ErrorKind::NoSuchTriangle, "no such triangle");
  return std::acosh(c);
}

double solve_angle_from_sides(double a, double b, double c, Curvature k) {
  if (!valid_triangle(a, b, c, k, 1e-14))
    throw GeometryError(ErrorKind::NoSuchTriangle, "no such triangle");
  // Half-angle form stays accurate for thin and for tiny triangles.
  const double s = 0.5 * (a + b + c);
  const double num = sin_k(k, s - b) * sin_k(k, s - c);
  const double den = sin_k(k, s) * sin_k(k, s - a);
  if (den <= 0.0) return kPi;
  if (num <= 0.0) return 0.0;
  return 2.0 * std::atan(std::sqrt(num / den));
}

// ---------------------------------------------------------------------------
// Reflections, intersections, distances to segments

Isometry2 reflect_across(const GeodesicSegment& seg) {
  const Curvature k = seg.start.kappa();
  if (!(seg.length > 0.0) || dist(seg.start, seg.end) <= 0.0)
    throw GeometryError(ErrorKind::DegenerateSegment, "zero-length segment");
  const Vec3 m = seg.start.lift().cross(seg.end.lift());
  switch (k) {
    case Curvature::Spherical: {
      const Vec3 n = m.normalized();
      return {k, Mat3::Identity() - 2.0 * n * n.transpose()};
    }
    case Curvature::Hyperbolic: {
      Vec3 n = minkowski() * m;
      n /= std::sqrt(form(k, n, n));
      return {k, Mat3::Identity() - 2.0 * n * n.transpose() * minkowski()};
    }
    case Curvature::Flat: {
      const Vec3 d = seg.end.coords() - seg.start.coords();
      const Eigen::Vector2d n = Eigen::Vector2d(-d.y(), d.x()).normalized();
      Mat3 r = Mat3::Identity();
      r.topLeftCorner<2, 2>() -= 2.0 * n * n.transpose();
      const double off = seg.start.coords().head<2>().dot(n);
      r.topRightCorner<2, 1>() = 2.0 * off * n;
      return {k, r};
    }
  }
  return Isometry2::identity(k);
}

std::optional<ModelPoint> intersect_segments(const GeodesicSegment& s1, const GeodesicSegment& s2,
                                             const Tolerances& tol) {
  require_same_kappa(s1.start, s2.start);
  const Curvature k = s1.start.kappa();
  const double eps = tol.eps_geom;
  const double a1 = side_distance(s1.start, s1.end, s2.start);
  const double b1 = side_distance(s1.start, s1.end, s2.end);
  const double a2 = side_distance(s2.start, s2.end, s1.start);
  const double b2 = side_distance(s2.start, s2.end, s1.end);

  if (std::abs(a1) <= eps && std::abs(b1) <= eps) {
    // Collinear: overlap of parameter intervals along s1.
    const Vec3 u = log_dir(s1.start, s1.end, tol);
    double t0 = line_param(s1.start, u, s2.start);
    double t1 = line_param(s1.start, u, s2.end);
    if (t0 > t1) std::swap(t0, t1);
    const double lo = std::max(0.0, t0);
    const double hi = std::min(s1.length, t1);
    if (hi - lo > eps) throw GeometryError(ErrorKind::CollinearOverlap, "collinear overlap");
    return std::nullopt;
  }
  if (!((a1 > eps && b1 < -eps) || (a1 < -eps && b1 > eps))) return std::nullopt;
  if (!((a2 > eps && b2 < -eps) || (a2 < -eps && b2 > eps))) return std::nullopt;

  const Vec3 m1 = s1.start.lift().cross(s1.end.lift());
  const Vec3 m2 = s2.start.lift().cross(s2.end.lift());
  const Vec3 x = m1.cross(m2);
  if (k == Curvature::Spherical) {
    for (const Vec3& cand : {Vec3(x), Vec3(-x)}) {
      const ModelPoint p = ModelPoint::project(k, cand);
      const double on1 = dist(s1.start, p) + dist(p, s1.end) - s1.length;
      const double on2 = dist(s2.start, p) + dist(p, s2.end) - s2.length;
      if (std::abs(on1) <= 10 * eps && std::abs(on2) <= 10 * eps) return p;
    }
    return std::nullopt;
  }
  if (k == Curvature::Hyperbolic) {
    if (!(form(k, x, x) < 0.0)) return std::nullopt;
    return ModelPoint::project(k, x);
  }
  if (x.z() == 0.0) return std::nullopt;
  return from_lift(k, x);
}

SegmentFoot point_segment_distance(const ModelPoint& p, const GeodesicSegment& seg,
                                   const Tolerances& tol) {
  require_same_kappa(p, seg.start);
  const Curvature k = p.kappa();
  SegmentFoot best{dist(p, seg.start), seg.start, 0.0, true};
  const double d_end = dist(p, seg.end);
  if (d_end < best.distance) best = {d_end, seg.end, seg.length, true};
  if (!(seg.length > 0.0)) return best;

  const Vec3 u = log_dir(seg.start, seg.end, tol);
  const Vec3 m = seg.start.lift().cross(seg.end.lift());
  std::optional<ModelPoint> foot;
  switch (k) {
    case Curvature::Spherical: {
      const Vec3 n = m.normalized();
      const Vec3 f = p.coords() - p.coords().dot(n) * n;
      if (f.norm() > 1e-15) foot = ModelPoint::project(k, f);
      break;
    }
    case Curvature::Hyperbolic: {
      Vec3 n = minkowski() * m;
      n /= std::sqrt(form(k, n, n));
      foot = ModelPoint::project(k, p.coords() - form(k, p.coords(), n) * n);
      break;
    }
    case Curvature::Flat: {
      const double t = (p.coords() - seg.start.coords()).dot(u);
      foot = ModelPoint::project(k, seg.start.coords() + t * u);
      break;
    }
  }
  if (!foot) return best;
  const double t = line_param(seg.start, u, *foot);
  if (t <= 0.0 || t >= seg.length) return best;
  if (t <= tol.eps_geom || seg.length - t <= tol.eps_geom) {
    // Snap to the endpoint for deterministic boundary output.
    return t <= tol.eps_geom ? SegmentFoot{dist(p, seg.start), seg.start, 0.0, true}
                             : SegmentFoot{d_end, seg.end, seg.length, true};
  }
  const double d = dist(p, *foot);
  if (d < best.distance) best = {d, *foot, t, false};
  return best;
}

double point_line_distance(const ModelPoint& p, const Vec3& m) {
  const Curvature k = p.kappa();
  const double s = std::abs(m.dot(p.lift())) / normal_scale(k, m);
  switch (k) {
    case Curvature::Spherical: return std::asin(std::min(1.0, s));
    case Curvature::Hyperbolic: return std::asinh(s);
    case Curvature::Flat: return s;
  }
  return s;
}

}  // namespace geoloop
