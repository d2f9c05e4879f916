#include "geoloop/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace geoloop {

namespace {

using Pt = std::array<double, 2>;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

class Projector {
 public:
  Projector(const Development& d, Projection proj) : proj_(proj) {
    if (proj != Projection::Stereographic) return;
    Vec3 c = Vec3::Zero();
    for (const VertexImage& im : d.images()) c += im.point.coords();
    c_ = c.norm() > 1e-12 ? c.normalized() : Vec3(0, 0, 1);
    Vec3 seed = std::abs(c_.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
    e1_ = (seed - seed.dot(c_) * c_).normalized();
    e2_ = c_.cross(e1_);
  }

  Pt operator()(const Vec3& p) const {
    switch (proj_) {
      case Projection::Plane: return {p.x(), p.y()};
      case Projection::Poincare: return {p.x() / (1.0 + p.z()), p.y() / (1.0 + p.z())};
      case Projection::Stereographic: {
        // From the point antipodal to the centroid onto the tangent plane's
        // directions at the centroid.
        const double s = 1.0 + p.dot(c_);
        return {p.dot(e1_) / s, p.dot(e2_) / s};
      }
    }
    return {0, 0};
  }

 private:
  Projection proj_;
  Vec3 c_ = Vec3(0, 0, 1);
  Vec3 e1_ = Vec3(1, 0, 0);
  Vec3 e2_ = Vec3(0, 1, 0);
};

// Points along the geodesic a-b (central projection of the chord).
std::vector<Vec3> sample(const ModelPoint& a, const ModelPoint& b, int n) {
  const Curvature k = a.kappa();
  std::vector<Vec3> out;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const Vec3 h = (1.0 - s) * a.lift() + s * b.lift();
    out.push_back(from_lift(k, h).coords());
  }
  return out;
}

struct Polyline {
  std::vector<Pt> pts;
};

}  // namespace

const char* to_string(Projection p) {
  switch (p) {
    case Projection::Stereographic: return "stereographic";
    case Projection::Poincare: return "poincare";
    case Projection::Plane: return "plane";
  }
  return "?";
}

std::optional<Projection> parse_projection(const std::string& s) {
  for (Projection p : {Projection::Stereographic, Projection::Poincare, Projection::Plane})
    if (s == to_string(p)) return p;
  return std::nullopt;
}

Curvature projection_curvature(Projection p) {
  switch (p) {
    case Projection::Stereographic: return Curvature::Spherical;
    case Projection::Poincare: return Curvature::Hyperbolic;
    case Projection::Plane: return Curvature::Flat;
  }
  return Curvature::Flat;
}

std::string render_svg(const Development& d, Projection proj, const std::vector<CrossingReport>& walks,
                       const SvgOptions& opt) {
  if (projection_curvature(proj) != d.kappa())
    throw GeometryError(ErrorKind::InvalidArgument,
                        std::string("projection ") + to_string(proj) + " does not match the curvature");
  const Projector P(d, proj);
  const int n = std::max(2, opt.samples);

  auto project_all = [&](const std::vector<Vec3>& v) {
    Polyline l;
    for (const Vec3& x : v) l.pts.push_back(P(x));
    return l;
  };

  std::vector<Polyline> faces;
  for (int k = 0; k < d.size(); ++k) {
    const PlacedFace& pf = d.face(k);
    const auto fv = topo::face_vertices(pf.face);
    Polyline poly;
    for (int i = 0; i < 3; ++i) {
      const ModelPoint a = pf.placement.apply(d.corner(k, fv[i]));
      const ModelPoint b = pf.placement.apply(d.corner(k, fv[(i + 1) % 3]));
      Polyline side = project_all(sample(a, b, n));
      poly.pts.insert(poly.pts.end(), side.pts.begin(), side.pts.end() - 1);
    }
    faces.push_back(std::move(poly));
  }
  std::vector<Polyline> glue;
  for (const GluingEdge& g : d.gluings()) glue.push_back(project_all(sample(g.a, g.b, n)));
  std::vector<std::vector<Polyline>> curves;
  for (const CrossingReport& w : walks) {
    std::vector<Polyline> pieces;
    for (const WalkPiece& p : w.pieces) {
      if (!(p.length > 0.0)) continue;
      const Isometry2& m = d.face(p.placed).placement;
      pieces.push_back(project_all(sample(m.apply(p.start), m.apply(p.end), n)));
    }
    curves.push_back(std::move(pieces));
  }

  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  for (const Polyline& f : faces)
    for (const Pt& p : f.pts) {
      lo_x = std::min(lo_x, p[0]);
      hi_x = std::max(hi_x, p[0]);
      lo_y = std::min(lo_y, p[1]);
      hi_y = std::max(hi_y, p[1]);
    }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double pad = 0.06 * opt.width;
  const double scale = (opt.width - 2.0 * pad) / span;
  const double height = (hi_y - lo_y) * scale + 2.0 * pad;
  auto X = [&](const Pt& p) { return pad + (p[0] - lo_x) * scale; };
  auto Y = [&](const Pt& p) { return pad + (hi_y - p[1]) * scale; };
  auto points = [&](const Polyline& l) {
    std::string s;
    for (const Pt& p : l.pts) {
      if (!s.empty()) s += ' ';
      s += num(X(p)) + "," + num(Y(p));
    }
    return s;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << opt.width << " " << num(height) << "\">\n";
  if (!opt.title.empty()) out << "<title>" << opt.title << "</title>\n";
  out << "<style>.face{fill:#eef2f7;stroke:#345;stroke-width:1.2}.gluing{fill:none;stroke:#9ab;"
         "stroke-dasharray:4 3}.curve{fill:none;stroke:#c22;stroke-width:2}.label{font:12px sans-serif;"
         "fill:#123}</style>\n";
  if (proj == Projection::Poincare) {
    // Boundary circle of the disk.
    const Pt c{0.0, 0.0};
    out << "<circle class=\"boundary\" cx=\"" << num(X(c)) << "\" cy=\"" << num(Y(c)) << "\" r=\"" << num(scale)
        << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
  }
  for (std::size_t k = 0; k < faces.size(); ++k)
    out << "<polygon class=\"face\" data-face=\"" << topo::face_name(d.face(static_cast<int>(k)).face)
        << "\" points=\"" << points(faces[k]) << "\"/>\n";
  for (std::size_t i = 0; i < glue.size(); ++i)
    out << "<polyline class=\"gluing\" data-edge=\"" << topo::edge_name(d.gluings()[i].edge) << "\" points=\""
        << points(glue[i]) << "\"/>\n";
  for (const auto& c : curves)
    for (const Polyline& piece : c) out << "<polyline class=\"curve\" points=\"" << points(piece) << "\"/>\n";
  for (const VertexImage& im : d.images()) {
    const Pt p = P(im.point.coords());
    out << "<circle cx=\"" << num(X(p)) << "\" cy=\"" << num(Y(p)) << "\" r=\"2.5\"/>\n";
    out << "<text class=\"label\" x=\"" << num(X(p) + 4.0) << "\" y=\"" << num(Y(p) - 4.0) << "\">"
        << topo::vertex_name(im.vertex) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace geoloop
