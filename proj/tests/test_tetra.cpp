#include <gtest/gtest.h>

#include "support.hpp"

#include "geoloop/tetra.hpp"

#include <set>

using namespace geoloop;
using geoloop::testing::kPi;

namespace {
const Curvature S = Curvature::Spherical;
const Curvature E = Curvature::Flat;
const Curvature H = Curvature::Hyperbolic;

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  for (const Violation& v : vs)
    if (v.code == code) return true;
  return false;
}
}  // namespace

TEST(Topology, IncidenceCounts) {
  for (EdgeId e = 0; e < topo::kEdges; ++e) {
    int faces = 0;
    for (FaceId f = 0; f < topo::kFaces; ++f) faces += topo::face_has_edge(f, e);
    EXPECT_EQ(faces, 2);
    const auto ev = topo::edge_vertices(e);
    EXPECT_LT(ev[0], ev[1]);
    EXPECT_EQ(topo::edge_between(ev[1], ev[0]), e);
    const auto ov = topo::edge_vertices(topo::opposite_edge(e));
    EXPECT_TRUE(std::set<int>({ev[0], ev[1], ov[0], ov[1]}).size() == 4u);
  }
  for (VertexId v = 0; v < topo::kVertices; ++v) {
    int faces = 0;
    for (FaceId f = 0; f < topo::kFaces; ++f) faces += topo::face_has_vertex(f, v);
    EXPECT_EQ(faces, 3);
    EXPECT_FALSE(topo::face_has_vertex(v, v));
  }
  for (FaceId f = 0; f < topo::kFaces; ++f)
    for (EdgeId e : topo::face_edges(f)) {
      const FaceId g = topo::across(f, e);
      EXPECT_NE(g, f);
      EXPECT_EQ(topo::across(g, e), f);
      EXPECT_FALSE(topo::face_has_vertex(f, topo::apex_of(g, e)) && topo::apex_of(g, e) != topo::apex_of(f, e));
    }
}

TEST(Topology, FacesAroundAVertexAreCyclic) {
  for (VertexId v = 0; v < topo::kVertices; ++v) {
    const auto fs = topo::faces_around(v);
    for (int i = 0; i < 3; ++i) {
      const FaceId f = fs[i], g = fs[(i + 1) % 3];
      int shared = 0;
      for (EdgeId e : topo::face_edges(f))
        if (topo::face_has_edge(g, e)) {
          ++shared;
          const auto ev = topo::edge_vertices(e);
          EXPECT_TRUE(ev[0] == v || ev[1] == v);
        }
      EXPECT_EQ(shared, 1);
    }
  }
}

TEST(Topology, NamesRoundTrip) {
  EXPECT_EQ(topo::edge_name(0), "A1A2");
  EXPECT_EQ(topo::edge_name(5), "A3A4");
  EXPECT_EQ(topo::face_name(0), "A2A3A4");
  for (int v = 0; v < 4; ++v) EXPECT_EQ(topo::parse_vertex(topo::vertex_name(v)), v);
  for (int e = 0; e < 6; ++e) EXPECT_EQ(topo::parse_edge(topo::edge_name(e)), e);
  for (int f = 0; f < 4; ++f) EXPECT_EQ(topo::parse_face(topo::face_name(f)), f);
  EXPECT_EQ(topo::parse_edge("A2A1"), 0);
  EXPECT_FALSE(topo::parse_edge("A1A1"));
  EXPECT_FALSE(topo::parse_vertex("A5"));
}

TEST(RegularFromAngle, Examples) {
  const TetraMetric s90 = TetraMetric::regular_from_angle(S, kPi / 2);
  EXPECT_NEAR(s90.edge(0), kPi / 2, 1e-14);
  EXPECT_TRUE(is_valid(validate(s90)));
  EXPECT_NEAR(TetraMetric::regular_from_angle(S, 2 * kPi / 3).edge(3), 1.910633, 1e-6);
  const TetraMetric h = TetraMetric::regular_from_angle(H, kPi / 4);
  EXPECT_NEAR(h.edge(5), 1.528571, 1e-6);
  EXPECT_TRUE(h.is_regular());
  for (FaceId f = 0; f < 4; ++f)
    for (VertexId v : topo::face_vertices(f)) EXPECT_NEAR(h.face_angle(f, v), kPi / 4, 1e-12);
}

TEST(RegularFromAngle, OutOfRange) {
  for (auto [k, a] : {std::pair{S, kPi / 3}, std::pair{S, kPi}, std::pair{H, kPi / 3}, std::pair{H, 0.0},
                      std::pair{E, 1.0}}) {
    try {
      TetraMetric::regular_from_angle(k, a);
      FAIL() << to_string(k) << " " << a;
    } catch (const GeometryError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NoRegularTetrahedron);
      EXPECT_NE(std::string(e.what()).find("no regular tetrahedron"), std::string::npos);
    }
  }
}

TEST(Validate, Examples) {
  const TetraMetric h = TetraMetric::regular_from_edge(H, 1.528571);
  EXPECT_TRUE(validate(h).empty());
  for (VertexId v = 0; v < 4; ++v) EXPECT_NEAR(h.angle_sum(v), 3 * kPi / 4, 1e-6);

  // Face A2A3A4 (edges A2A3, A2A4, A3A4) gets sides 3, 3, 3.
  std::array<double, 6> e{1.0, 1.0, 1.0, 3.0, 3.0, 3.0};
  const auto vs = validate(TetraMetric(S, e));
  EXPECT_TRUE(has_code(vs, "invalid spherical face"));
  EXPECT_FALSE(is_valid(vs));
  EXPECT_EQ(vs.front().face, std::optional<FaceId>(0));
}

TEST(Validate, NonPositiveAndTriangleInequality) {
  EXPECT_TRUE(has_code(validate(TetraMetric(E, {1, 1, 1, 1, 1, -1})), "non-positive edge"));
  EXPECT_TRUE(has_code(validate(TetraMetric(E, {1, 1, 1, 1, 1, 5})), "invalid flat face"));
  EXPECT_TRUE(has_code(validate(TetraMetric(H, {1, 1, 1, 1, 1, 5})), "invalid hyperbolic face"));
}

TEST(Validate, LargeConeAngleIsAWarning) {
  const TetraMetric big = TetraMetric::regular_from_angle(S, 0.7 * kPi);
  const auto vs = validate(big);
  EXPECT_TRUE(has_code(vs, "cone angle not below 2pi"));
  EXPECT_TRUE(is_valid(vs));
}

TEST(VertexData, RegularHyperbolicQuarter) {
  const TetraMetric t = TetraMetric::regular_from_angle(H, kPi / 4);
  const double a = t.edge(0);
  // Altitude of the equilateral face: cosh a = cosh(a/2) cosh h.
  const double h = std::acosh(std::cosh(a) / std::cosh(a / 2));
  for (VertexId v = 0; v < 4; ++v) {
    const VertexData d = vertex_data(t, v);
    EXPECT_NEAR(d.half_angle, 3 * kPi / 8, 1e-12);
    EXPECT_NEAR(d.height, h, 1e-10);
    EXPECT_NEAR(d.height, 1.2242262238, 1e-9);
    EXPECT_NEAR(d.height, 1.2242, 1e-4);
    ASSERT_TRUE(d.clearance_bound);
    EXPECT_TRUE(d.bound_applicable);
    EXPECT_NEAR(*d.clearance_bound, std::asinh(std::cos(3 * kPi / 8) * std::sinh(h)), 1e-12);
    EXPECT_NEAR(*d.clearance_bound, 0.5641919825, 1e-9);
    EXPECT_NEAR(*d.clearance_bound, 0.5642, 1e-4);
    ASSERT_TRUE(d.wrap_bound);
    EXPECT_LT(*d.wrap_bound, *d.clearance_bound);
  }
}

TEST(VertexData, BoundUndefinedOutsideHyperbolicHypothesis) {
  const VertexData s = vertex_data(TetraMetric::regular_from_angle(S, 2 * kPi / 3), 0);
  EXPECT_FALSE(s.clearance_bound);
  EXPECT_FALSE(s.bound_applicable);
  // Short edges at A1 against long opposite edges open the angles at A1.
  const VertexData h = vertex_data(TetraMetric(H, {0.3, 0.3, 0.3, 0.55, 0.55, 0.55}), 0);
  EXPECT_GT(h.angle_sum, kPi);
  EXPECT_FALSE(h.clearance_bound);
}

TEST(VertexData, EuclideanAltitude) {
  const VertexData d = vertex_data(TetraMetric::regular_from_edge(E, 1.0), 2);
  EXPECT_NEAR(d.height, std::sqrt(3.0) / 2, 1e-14);
  EXPECT_NEAR(d.angle_sum, kPi, 1e-14);
}

TEST(RegularFamilies, HyperbolicEdgeDecreasesWithAngle) {
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 100; ++i) {
    const double alpha = (kPi / 3) * i / 100.0;
    const double a = TetraMetric::regular_from_angle(H, alpha).edge(0);
    EXPECT_NEAR(std::cosh(a), std::cos(alpha) / (1 - std::cos(alpha)), 1e-8 * std::cosh(a));
    EXPECT_LT(a, prev);
    prev = a;
  }
}

TEST(RegularFamilies, SphericalTrichotomy) {
  for (int i = 1; i <= 100; ++i) {
    const double alpha = kPi / 3 + (2 * kPi / 3) * i / 101.0;
    const double a = TetraMetric::regular_from_angle(S, alpha).edge(0);
    if (alpha < kPi / 2)
      EXPECT_LT(a, kPi / 2);
    else
      EXPECT_GT(a, kPi / 2);
  }
  EXPECT_NEAR(TetraMetric::regular_from_angle(S, kPi / 2).edge(0), kPi / 2, 1e-14);
}

TEST(RegularFamilies, AcuteSphericalFacesHaveShortSides) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, kPi / 2);
  int n = 0;
  while (n < 2000) {
    const double A = u(rng), B = u(rng), C = u(rng);
    if (A + B + C <= kPi + 1e-6 || B + C - A >= kPi || A + C - B >= kPi || A + B - C >= kPi) continue;
    EXPECT_LT(solve_side_from_angles(A, B, C, S), kPi / 2);
    ++n;
  }
}

TEST(Equifacial, FacesAreCongruent) {
  const TetraMetric t = TetraMetric::equifacial(H, 0.2 * kPi, 0.25 * kPi, 0.15 * kPi);
  EXPECT_TRUE(validate(t).empty());
  for (EdgeId e = 0; e < 6; ++e) EXPECT_DOUBLE_EQ(t.edge(e), t.edge(topo::opposite_edge(e)));
  for (VertexId v = 0; v < 4; ++v) EXPECT_NEAR(t.angle_sum(v), 0.6 * kPi, 1e-12);
}

TEST(Relabel, PermutesEdges) {
  const TetraMetric t(E, {1.0, 1.1, 1.2, 1.3, 1.4, 1.5});
  const TetraMetric r = t.relabeled({1, 0, 2, 3});
  EXPECT_DOUBLE_EQ(r.edge(0, 2), t.edge(1, 2));
  EXPECT_DOUBLE_EQ(r.edge(2, 3), t.edge(2, 3));
}
