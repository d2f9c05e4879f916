#include <gtest/gtest.h>

#include "support.hpp"

#include "geoloop/hyp_loops.hpp"

using namespace geoloop;
using geoloop::testing::kPi;

namespace {
const Curvature H = Curvature::Hyperbolic;
TetraMetric quarter() { return TetraMetric::regular_from_angle(H, kPi / 4); }

bool message_has(const std::exception& e, const char* s) { return std::string(e.what()).find(s) != std::string::npos; }

struct Fixture {
  int p, q;
  double translation;
  double loop_length;
  std::array<int, 6> loop_counts;
};
// Regular tetrahedron with face angle pi/4.
const Fixture kRows[] = {
    {0, 1, 2.531897277, 2.914035388, {0, 0, 0, 1, 0, 1}},
    {1, 1, 4.513535860, 4.741097075, {1, 0, 0, 1, 1, 2}},
    {1, 2, 6.927671529, 7.105056586, {2, 0, 1, 2, 1, 3}},
    {2, 3, 11.432289968, 11.592573453, {4, 1, 2, 3, 2, 5}},
};
}  // namespace

TEST(Holonomy, ClassifiesTheSimplestSchedule) {
  const Holonomy h = holonomy(quarter(), 0, 1);
  EXPECT_EQ(h.kind, HolonomyKind::Hyperbolic);
  EXPECT_GT(h.translation_length, 0.0);
  // trace = 1 + 2 cosh(l) for a hyperbolic translation.
  EXPECT_NEAR(h.trace, 1 + 2 * std::cosh(h.translation_length), 1e-9 * h.trace);
  EXPECT_LT(h.axis_residual, 1e-8);
}

TEST(Holonomy, TranslationLengthFixturesGrowWithTheSchedule) {
  double prev = 0.0;
  for (const Fixture& f : kRows) {
    const Holonomy h = holonomy(quarter(), f.p, f.q);
    EXPECT_NEAR(h.translation_length, f.translation, 1e-8);
    EXPECT_GT(h.translation_length, prev);
    prev = h.translation_length;
  }
}

TEST(Holonomy, EmptyScheduleHasNoAxis) {
  CuttingSequence s;
  s.edges = {0};
  try {
    holonomy(quarter(), s);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_TRUE(message_has(e, "no axis"));
  }
}

TEST(Holonomy, ExchangedEdgeMatchingHasNoAxis) {
  try {
    holonomy(quarter(), 0, 1, true);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_TRUE(message_has(e, "no axis"));
  }
  EXPECT_THROW(closed_geodesic(quarter(), cutting_sequence(1, 2), true), GeometryError);
}

TEST(ClassifyIsometry, ByTrace) {
  const Isometry2 id = Isometry2::identity(H);
  double tr = 0.0;
  EXPECT_EQ(classify_isometry(id, 1e-8, &tr), HolonomyKind::Parabolic);
  EXPECT_NEAR(tr, 3.0, 1e-15);
  EXPECT_EQ(classify_isometry(Isometry2::base_reflection(H), 1e-8), HolonomyKind::Reversing);
}

TEST(ClosedGeodesic, TypeAndLength) {
  const TetraMetric t = quarter();
  for (const Fixture& f : kRows) {
    const ClosedGeodesic g = closed_geodesic(t, f.p, f.q);
    EXPECT_TRUE(g.curve.closed);
    EXPECT_TRUE(g.simplicity.simple);
    EXPECT_EQ(g.sig.type, std::make_optional(std::make_pair(f.p, f.q)));
    EXPECT_TRUE(g.sig.aligned);
    EXPECT_EQ(static_cast<int>(g.curve.crossings().size()), 4 * (f.p + f.q));
    EXPECT_NEAR(g.curve.length(), g.holonomy.translation_length, 1e-8);
    EXPECT_LT(g.curve.closure_error, 1e-7);
    EXPECT_GT(g.base_param, 0.0);
    EXPECT_LT(g.base_param, 1.0);
  }
}

TEST(ClosedGeodesic, TypesAcrossTheFamily) {
  for (double alpha : {0.1 * kPi, 0.2 * kPi}) {
    const TetraMetric t = TetraMetric::regular_from_angle(H, alpha);
    for (auto [p, q] : {std::pair{0, 1}, std::pair{1, 3}, std::pair{2, 5}}) {
      const ClosedGeodesic g = closed_geodesic(t, p, q);
      EXPECT_EQ(g.sig.type, std::make_optional(std::make_pair(p, q))) << alpha;
      EXPECT_TRUE(g.simplicity.simple);
    }
  }
}

TEST(VertexLoop, Fixtures) {
  const TetraMetric t = quarter();
  for (const Fixture& f : kRows) {
    const LoopResult r = vertex_loop(t, f.p, f.q);
    EXPECT_NEAR(r.loop.length(), f.loop_length, 1e-8);
    EXPECT_EQ(r.sig.counts, f.loop_counts);
    EXPECT_EQ(r.loop.loop_vertex, std::optional<VertexId>(0));
    EXPECT_TRUE(is_simple(r.loop).simple);
    EXPECT_TRUE(r.coherent);
    EXPECT_TRUE(r.convex);
    ASSERT_TRUE(r.closed);
    EXPECT_TRUE(r.walk.ok());
    for (const ClearanceEntry& c : r.clearance) {
      EXPECT_NE(c.vertex, 0);
      EXPECT_GT(c.wrap_margin, 0.0);
    }
    // The loop is longer than the closed geodesic of its type.
    EXPECT_GT(r.loop.length(), r.closed->curve.length());
  }
}

TEST(VertexLoop, EveryVertexGivesTheSameLength) {
  const TetraMetric t = quarter();
  for (VertexId v = 1; v < 4; ++v) {
    const LoopResult r = vertex_loop(t, 1, 2, v);
    EXPECT_EQ(r.loop.loop_vertex, std::optional<VertexId>(v));
    EXPECT_NEAR(r.loop.length(), 7.105056586, 1e-8);
    EXPECT_TRUE(loops_equivalent(r.loop, r.loop));
  }
}

TEST(VertexLoop, CrossesTheScheduleInOrder) {
  const LoopResult r = vertex_loop(quarter(), 2, 3);
  const auto xs = r.loop.crossings();
  ASSERT_EQ(xs.size(), r.expected_schedule.size());
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(xs[i].edge, r.expected_schedule[i]);
}

TEST(VertexLoop, FlatAnalogueHitsAVertex) {
  const TetraMetric t = TetraMetric::regular_from_edge(Curvature::Flat, 1.0);
  const LoopResult a = attempt_vertex_loop(t, 0, 1);
  EXPECT_EQ(a.walk.outcome, WalkOutcome::VertexHit);
  try {
    vertex_loop(t, 0, 1);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_TRUE(message_has(e, "vertex hit"));
  }
}

TEST(GeneralVertexLoop, SmallAngleEquifacial) {
  const TetraMetric t = TetraMetric::equifacial(H, 0.2 * kPi, 0.2 * kPi, 0.2 * kPi);
  const LoopResult r = general_vertex_loop(t, 0, 1);
  EXPECT_TRUE(r.convex);
  EXPECT_NEAR(r.loop.length(), 3.835986091, 1e-8);
  EXPECT_TRUE(is_simple(r.loop).simple);
  const LoopResult b = general_vertex_loop(quarter(), 1, 2);
  EXPECT_NEAR(b.loop.length(), 7.105056586, 1e-8);
}

TEST(GeneralVertexLoop, OutsideHypotheses) {
  try {
    general_vertex_loop(TetraMetric::regular_from_angle(H, 0.3 * kPi), 0, 1);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_TRUE(message_has(e, "outside hypotheses"));
  }
  // The direct construction is still available there.
  EXPECT_NO_THROW(vertex_loop(TetraMetric::regular_from_angle(H, 0.3 * kPi), 0, 1));
}

TEST(UniquenessProbe, TooShortACapIsInconclusive) {
  const UniquenessReport u = uniqueness_probe(quarter(), 0, 1, 200, 1.0);
  EXPECT_TRUE(u.inconclusive);
  EXPECT_TRUE(u.matches.empty());
}

TEST(UniquenessProbe, SimplestTypeHasOneClass) {
  const TetraMetric t = quarter();
  const UniquenessReport u = uniqueness_probe(t, 0, 1, 2000, 2.914035388 + 1.0);
  EXPECT_FALSE(u.inconclusive);
  EXPECT_EQ(u.classes, 1);
  EXPECT_TRUE(u.contains_constructed);
}

TEST(LoopSequence, AnchoredAtTheLoopVertex) {
  for (VertexId v = 0; v < 4; ++v) {
    const CuttingSequence s = loop_sequence(1, 2, v);
    EXPECT_EQ(s.crossings(), 12);
    const auto base = topo::edge_vertices(s.edges.front());
    EXPECT_TRUE(base[0] == v || base[1] == v);
  }
}
