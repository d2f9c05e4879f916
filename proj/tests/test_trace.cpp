#include <gtest/gtest.h>

#include "curves.hpp"

#include "geoloop/hyp_loops.hpp"
#include "geoloop/sph_loops.hpp"

#include <numeric>

using namespace geoloop;
using geoloop::testing::kPi;

namespace {
const Curvature S = Curvature::Spherical;
const Curvature E = Curvature::Flat;
const Curvature H = Curvature::Hyperbolic;

TetraMetric flat() { return TetraMetric::regular_from_edge(E, 1.0); }
TetraMetric quarter() { return TetraMetric::regular_from_angle(H, kPi / 4); }
}  // namespace

TEST(Shoot, FlatSimplestClosedGeodesic) {
  const TetraMetric t = flat();
  const ShotStart st = edge_start(t, 3, 0, 0.5, kPi / 3);
  const SurfaceCurve c = shoot(t, st.point, st.direction, 10.0);
  ASSERT_EQ(c.stop, StopReason::Closed);
  EXPECT_TRUE(c.closed);
  EXPECT_NEAR(c.length(), 2.0, 1e-12);
  EXPECT_LT(c.closure_error, 1e-7);
  EXPECT_LT(junction_residual(t, c), 1e-9);
  const CrossingSignature sig = signature(c);
  EXPECT_EQ(sig.counts, (std::array<int, 6>{1, 0, 1, 1, 0, 1}));
  ASSERT_TRUE(sig.type);
  EXPECT_EQ(*sig.type, std::make_pair(0, 1));
  EXPECT_TRUE(is_simple(c).simple);
}

TEST(Shoot, AimedAtAVertex) {
  const TetraMetric t = quarter();
  const ModelPoint& corner = t.chart_vertex(3, 0);
  const ModelPoint centre = exp_point(corner, tangent_unit(corner, log_dir(corner, t.chart_vertex(3, 1)) +
                                                                         log_dir(corner, t.chart_vertex(3, 2))),
                                      0.2);
  const SurfaceCurve c = shoot(t, SurfacePoint::interior(t, 3, centre), log_dir(centre, corner), 5.0);
  EXPECT_EQ(c.stop, StopReason::VertexHit);
  ASSERT_TRUE(c.hit_vertex);
  EXPECT_EQ(*c.hit_vertex, 0);
  EXPECT_NEAR(c.length(), 0.2, 1e-9);
}

TEST(Shoot, NonPositiveLengthIsAnError) {
  const TetraMetric t = flat();
  const ShotStart st = edge_start(t, 3, 0, 0.5, kPi / 3);
  EXPECT_THROW(shoot(t, st.point, st.direction, 0.0), GeometryError);
  EXPECT_THROW(shoot(t, st.point, st.direction, -1.0), GeometryError);
}

TEST(Shoot, MaxLengthStopsTheCurve) {
  const TetraMetric t = flat();
  const ShotStart st = edge_start(t, 3, 0, 0.37, 1.0);
  const SurfaceCurve c = shoot(t, st.point, st.direction, 7.5);
  EXPECT_EQ(c.stop, StopReason::MaxLength);
  EXPECT_NEAR(c.length(), 7.5, 1e-12);
  EXPECT_LT(junction_residual(t, c), 1e-9);
}

// The flat regular tetrahedron is a quotient of a torus by the half-turn, so
// every geodesic on it is simple.
TEST(Shoot, FlatGeodesicsAreSimple) {
  const TetraMetric t = flat();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> par(0.05, 0.95), ang(0.05, kPi - 0.05);
  for (int i = 0; i < 30; ++i) {
    const ShotStart st = edge_start(t, 3, 0, par(rng), ang(rng));
    const SurfaceCurve c = shoot(t, st.point, st.direction, 12.0);
    if (c.stop == StopReason::VertexHit) continue;
    EXPECT_TRUE(is_simple(c).simple) << i;
  }
}

TEST(Shoot, ReshootingTheHyperbolicClosedGeodesicCloses) {
  const TetraMetric t = quarter();
  const ClosedGeodesic g = closed_geodesic(t, 1, 0);
  const CurveSegment& first = g.curve.segments.front();
  ASSERT_TRUE(first.enter);
  const SurfacePoint start = SurfacePoint::on_edge(t, first.face, first.enter->edge, first.enter->t);
  const SurfaceCurve c = shoot(t, start, log_dir(first.start, first.end), g.curve.length() + 1.0);
  ASSERT_EQ(c.stop, StopReason::Closed);
  EXPECT_LT(c.closure_error, 1e-7);
  EXPECT_NEAR(c.length(), g.curve.length(), 1e-7);
  const CrossingSignature sig = signature(c);
  std::array<int, 6> sorted = sig.counts;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::array<int, 6>{0, 0, 1, 1, 1, 1}));
  for (EdgeId e = 0; e < 6; ++e) EXPECT_EQ(sig.counts[e], sig.counts[topo::opposite_edge(e)]);
  EXPECT_TRUE(is_simple(c).simple);
}

TEST(IsSimple, SingleSegment) {
  const TetraMetric t = flat();
  const ShotStart st = edge_start(t, 3, 0, 0.5, kPi / 3);
  const SurfaceCurve c = shoot(t, st.point, st.direction, 0.3);
  ASSERT_EQ(c.segments.size(), 1u);
  EXPECT_TRUE(is_simple(c).simple);
}

TEST(IsSimple, FigureEight) {
  const TetraMetric t = flat();
  const auto& v = t.chart(3);  // A1, A2, A3
  auto mix = [&](double a, double b, double c) {
    return ModelPoint(E, a * v[0].coords() + b * v[1].coords() + c * v[2].coords());
  };
  auto seg = [&](const ModelPoint& a, const ModelPoint& b) {
    return CurveSegment{3, a, b, dist(a, b), std::nullopt, std::nullopt};
  };
  // Out along the third coordinate 0.1, round, and back across the first chord.
  SurfaceCurve c;
  c.segments = {seg(mix(0.8, 0.1, 0.1), mix(0.1, 0.8, 0.1)), seg(mix(0.1, 0.8, 0.1), mix(0.1, 0.1, 0.8)),
                seg(mix(0.1, 0.1, 0.8), mix(0.3, 0.3, 0.4)), seg(mix(0.3, 0.3, 0.4), mix(0.5, 0.5, 0.0))};
  const SimplicityReport r = is_simple(c);
  EXPECT_FALSE(r.simple);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.face, 3);
  const ModelPoint expect = mix(0.45, 0.45, 0.1);
  EXPECT_LT((r.witness->coords() - expect.coords()).norm(), 1e-9);
}

TEST(IsSimple, SphericalLoop) {
  const TetraMetric t = TetraMetric::regular_from_angle(S, 2 * kPi / 3);
  const ConstructedLoop l = construct_loop(t, 3, 0);
  EXPECT_TRUE(is_simple(l.curve).simple);
  EXPECT_EQ(l.curve.loop_vertex, std::optional<VertexId>(3));
}

TEST(Signature, SphericalLoopFixture) {
  const TetraMetric t = TetraMetric::regular_from_angle(S, 2 * kPi / 3);
  const ConstructedLoop l = construct_loop(t, 3, 0);
  const CrossingSignature sig = signature(l.curve);
  EXPECT_EQ(sig.counts, (std::array<int, 6>{1, 1, 0, 0, 0, 0}));
  // Read against the face opposite the loop vertex the pattern is (1, 0).
  EXPECT_EQ(classify_loop(sig.counts, 3), std::make_optional(std::make_pair(1, 0)));
}

TEST(Signature, Classification) {
  EXPECT_FALSE(classify_counts({2, 0, 0, 0, 0, 0}));
  EXPECT_EQ(classify_counts({1, 0, 1, 1, 0, 1}), std::make_optional(std::make_pair(0, 1)));
  bool aligned = false;
  // p = 1 on A1A3/A2A4, q = 2 on A1A4/A2A3, 3 on A1A2/A3A4.
  EXPECT_EQ(classify_counts({3, 1, 2, 2, 1, 3}, &aligned), std::make_optional(std::make_pair(1, 2)));
  EXPECT_TRUE(aligned);
  EXPECT_FALSE(classify_counts({4, 2, 2, 2, 2, 4}));  // gcd 2
}

TEST(Signature, OpenCurveIsAnError) {
  const TetraMetric t = flat();
  const ShotStart st = edge_start(t, 3, 0, 0.5, kPi / 3);
  EXPECT_THROW(signature(shoot(t, st.point, st.direction, 1.0)), GeometryError);
}

TEST(CuttingSequence, Lengths) {
  EXPECT_EQ(cutting_sequence(0, 1).crossings(), 4);
  EXPECT_EQ(cutting_sequence(1, 1).crossings(), 8);
  // Every (p,q) closed geodesic crosses 2p + 2q + 2(p+q) = 4(p+q) edges.
  EXPECT_EQ(cutting_sequence(1, 2).crossings(), 12);
  EXPECT_EQ(cutting_sequence(2, 3).crossings(), 20);
}

TEST(CuttingSequence, CountsFollowThePattern) {
  for (auto [p, q] : {std::pair{0, 1}, std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 4},
                      std::pair{3, 4}}) {
    const CuttingSequence s = cutting_sequence(p, q);
    EXPECT_EQ(s.edges.front(), 0);
    EXPECT_EQ(s.edges.back(), 0);
    std::array<int, 6> counts{};
    for (std::size_t i = 0; i + 1 < s.edges.size(); ++i) ++counts[s.edges[i]];
    bool aligned = false;
    EXPECT_EQ(classify_counts(counts, &aligned), std::make_optional(std::make_pair(p, q)));
    EXPECT_TRUE(aligned);
    for (std::size_t i = 0; i + 1 < s.edges.size(); ++i) {
      EXPECT_TRUE(topo::face_has_edge(s.faces[i], s.edges[i]));
      EXPECT_TRUE(topo::face_has_edge(s.faces[i], s.edges[i + 1]));
    }
  }
}

TEST(CuttingSequence, SwappedOrderIsRelabelled) {
  const CuttingSequence a = cutting_sequence(2, 1);
  EXPECT_EQ(a.p, 2);
  EXPECT_EQ(a.q, 1);
  EXPECT_EQ(a.edges, relabel_sequence(cutting_sequence(1, 2), a.relabel).edges);
  std::array<int, 6> counts{};
  for (std::size_t i = 0; i + 1 < a.edges.size(); ++i) ++counts[a.edges[i]];
  // Exchanging A3 and A4 swaps the p and q edge classes.
  EXPECT_EQ(counts[topo::edge_between(0, 2)], 2);
  EXPECT_EQ(counts[topo::edge_between(0, 3)], 1);
}

TEST(CuttingSequence, Errors) {
  for (auto [p, q] : {std::pair{2, 4}, std::pair{0, 0}, std::pair{3, 3}, std::pair{-1, 2}}) {
    try {
      cutting_sequence(p, q);
      FAIL() << p << "," << q;
    } catch (const GeometryError& e) {
      if (p == 2) EXPECT_NE(std::string(e.what()).find("not coprime"), std::string::npos);
    }
  }
}

TEST(Clearance, HyperbolicLoopsFixture) {
  const TetraMetric t = quarter();
  const struct {
    int p, q;
    std::size_t entries;
    double sinh_margin;
  } rows[] = {{0, 1, 4, -0.223024242}, {1, 1, 7, -0.187558812}, {1, 2, 10, -0.181069529}};
  for (const auto& row : rows) {
    const LoopResult r = vertex_loop(t, row.p, row.q);
    ASSERT_EQ(r.clearance.size(), row.entries);
    double sinh_min = 1e9, wrap_min = 1e9;
    for (const ClearanceEntry& c : r.clearance) {
      EXPECT_NE(c.vertex, 0);
      EXPECT_TRUE(c.applicable);
      sinh_min = std::min(sinh_min, c.margin);
      wrap_min = std::min(wrap_min, c.wrap_margin);
    }
    EXPECT_NEAR(sinh_min, row.sinh_margin, 1e-8);
    EXPECT_GT(wrap_min, 0.0);
  }
}

// Chords near a vertex of the regular pi/4 tetrahedron, kept inside the disk of
// radius h about it, wrap into themselves exactly when
// tanh d <= cos(half angle) tanh h.
TEST(Clearance, ChordsNearAVertexWrapBelowTheTanhThreshold) {
  const TetraMetric t = quarter();
  const VertexData vd = vertex_data(t, 0);
  ASSERT_TRUE(vd.wrap_bound);
  const double w = *vd.wrap_bound;
  for (double d : {0.05, 0.2, w - 1e-3, w + 1e-3, 0.45, *vd.clearance_bound - 1e-3}) {
    const double reach = std::acosh(std::cosh(vd.height) / std::cosh(d)) * (1 - 1e-9);
    const SurfaceCurve c = geoloop::testing::chord_past_vertex(t, 3, 0, d, reach);
    EXPECT_EQ(is_simple(c).simple, d > w) << d;
  }
}

TEST(CuttingSequence, AnchorAndRelabel) {
  const CuttingSequence s = cutting_sequence(1, 2);
  const CuttingSequence a = anchor_sequence(s, 0);
  EXPECT_EQ(a.crossings(), s.crossings());
  EXPECT_EQ(a.edges.front(), 0);
  const CuttingSequence r = relabel_sequence(s, {1, 0, 3, 2});
  std::array<int, 6> cs{}, cr{};
  for (std::size_t i = 0; i + 1 < s.edges.size(); ++i) {
    ++cs[s.edges[i]];
    ++cr[r.edges[i]];
  }
  EXPECT_EQ(cs, cr);  // this permutation maps each edge class to itself
}
