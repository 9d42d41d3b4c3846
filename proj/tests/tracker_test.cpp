#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "knotforge/knotforge.hpp"
#include "support/fixtures.hpp"

using namespace knotforge;

namespace {

Crossing bare(double t, double s, bool over_first) {
  Crossing c;
  c.pair = {t, s};
  c.over_first = over_first;
  return c;
}

struct Frame {
  DiagramState before;
  FrameResult result;
};

/// Every frame of a trace with the state it started from.
std::vector<Frame> frames_of(const Trace& trace) {
  std::vector<Frame> out;
  DiagramState state = trace.initial.state;
  for (const EditCommand& cmd : trace.commands) {
    FrameResult r = apply(state, cmd, trace.config);
    out.push_back({state, r});
    if (r.accepted()) state = r.value().state;
  }
  return out;
}

BezierPath polyline(const std::vector<Point2>& pts) {
  std::vector<CubicSegment> segs;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 a = pts[i], b = pts[(i + 1) % pts.size()];
    segs.push_back({a, lerp(a, b, 1.0 / 3.0), lerp(a, b, 2.0 / 3.0), b});
  }
  return BezierPath(segs);
}

}  // namespace

TEST(TimeDistance, ZeroForIdenticalPairs) { EXPECT_EQ(time_distance({0.2, 0.6}, {0.2, 0.6}), 0.0); }

TEST(TimeDistance, DirectEvaluation) {
  EXPECT_NEAR(time_distance({0.0, 0.5}, {0.1, 0.5}), 0.309017, 1e-6);
}

TEST(TimeDistance, PeriodicInEachTime) {
  EXPECT_NEAR(time_distance({0.0, 0.5}, {1.0, 0.5}), 0.0, 1e-15);
  EXPECT_NEAR(time_distance({0.01, 0.5}, {0.99, 0.5}), std::sin(0.98 * std::numbers::pi), 1e-15);
}

TEST(TimeDistance, SymmetricAndNonnegative) {
  for (double a = 0.0; a < 1.0; a += 0.13)
    for (double b = 0.0; b < 1.0; b += 0.17) {
      const TimePair p{a, b}, q{b, std::fmod(a + 0.3, 1.0)};
      EXPECT_GE(time_distance(p, q), 0.0);
      EXPECT_DOUBLE_EQ(time_distance(p, q), time_distance(q, p));
    }
}

TEST(EuclideanDistance, ZeroAndPythagorean) {
  const BezierPath p = polyline({{0, 0}, {3, 4}, {3, 0}});
  EXPECT_EQ(euclidean_distance(p, {0.1, 0.5}, {0.1, 0.5}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean_distance(p, {0.0, 0.5}, {1.0 / 3.0, 0.5}), 5.0);
}

TEST(EuclideanDistance, CollapsesNearTriplePointWhileTimeDistanceDoesNot) {
  const auto frames = frames_of(kf_test::load_trace("legal_r3"));
  std::size_t pass = frames.size();
  for (std::size_t k = 0; k < frames.size(); ++k)
    if (frames[k].result.accepted())
      for (const FrameEvent& e : frames[k].result.value().events)
        if (e.kind == EventKind::R3Pass) pass = k;
  ASSERT_LT(pass, frames.size());
  const DiagramState& near = frames[pass].before;
  const auto& ev = frames[pass].result.value().events.front().crossings;
  const DiagramState& far = frames.front().before;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      const TimePair p = near.crossings[ev[a]].pair, q = near.crossings[ev[b]].pair;
      EXPECT_LT(euclidean_distance(near.path, p, q), 2.0);
      EXPECT_GT(euclidean_distance(far.path, far.crossings[ev[a]].pair, far.crossings[ev[b]].pair), 20.0);
      EXPECT_GT(time_distance(p, q), 0.1);
    }
}

TEST(MatchCrossings, SmallMotionKeepsOrder) {
  const CrossingSet prev{bare(0.10, 0.40, true), bare(0.20, 0.70, false)};
  const MatchResult m = match_crossings(prev, {{0.12, 0.41}, {0.19, 0.69}});
  ASSERT_TRUE(m.assignment[0] && m.assignment[1]);
  EXPECT_EQ(m.assignment[0]->next, 0u);
  EXPECT_EQ(m.assignment[1]->next, 1u);
  EXPECT_FALSE(m.assignment[0]->swapped);
  EXPECT_TRUE(m.unmatched_new.empty());
  EXPECT_TRUE(m.unmatched_old.empty());

  // greedy agrees with the cheaper of both bijections
  const double direct = time_distance({0.10, 0.40}, {0.12, 0.41}) + time_distance({0.20, 0.70}, {0.19, 0.69});
  const double crossed = time_distance({0.10, 0.40}, {0.19, 0.69}) + time_distance({0.20, 0.70}, {0.12, 0.41});
  EXPECT_LT(direct, crossed);
}

TEST(MatchCrossings, EmptyPrevLeavesNewUnmatched) {
  const MatchResult m = match_crossings({}, {{0.3, 0.8}});
  EXPECT_EQ(m.unmatched_new, std::vector<std::size_t>{0});
  EXPECT_TRUE(m.assignment.empty());
}

TEST(MatchCrossings, EmptyNextLeavesOldUnmatched) {
  const MatchResult m = match_crossings({bare(0.3, 0.8, false)}, {});
  EXPECT_EQ(m.unmatched_old, std::vector<std::size_t>{0});
}

TEST(MatchCrossings, ThresholdTurnsFarPairsIntoBirthAndDeath) {
  const MatchResult m = match_crossings({bare(0.1, 0.3, false)}, {{0.6, 0.9}});
  EXPECT_EQ(m.unmatched_old.size(), 1u);
  EXPECT_EQ(m.unmatched_new.size(), 1u);
}

TEST(MatchCrossings, TieIsAmbiguous) {
  const CrossingSet prev{bare(0.10, 0.50, false), bare(0.14, 0.50, false)};
  const MatchResult m = match_crossings(prev, {{0.12, 0.50}});
  EXPECT_TRUE(m.ambiguous);
}

TEST(MatchCrossings, SeamSwapIsRecognised) {
  const MatchResult m = match_crossings({bare(0.30, 0.98, false)}, {{0.01, 0.30}});
  ASSERT_TRUE(m.assignment[0]);
  EXPECT_TRUE(m.assignment[0]->swapped);
}

TEST(MatchCrossings, IdentityUnderQuarterThresholdMotion) {
  const CrossingSet prev{bare(0.05, 0.35, true), bare(0.15, 0.55, false), bare(0.25, 0.75, true),
                         bare(0.45, 0.85, false)};
  std::vector<TimePair> next;
  for (const Crossing& c : prev) next.push_back({c.pair.t + 0.005, c.pair.s - 0.005});
  for (std::size_t i = 0; i < prev.size(); ++i) EXPECT_LT(time_distance(prev[i].pair, next[i]), 0.2 / 4);
  const MatchResult m = match_crossings(prev, next);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    ASSERT_TRUE(m.assignment[i]);
    EXPECT_EQ(m.assignment[i]->next, i);
  }
}

TEST(LoopAround, SeamHopWithoutSpatialJump) {
  const BezierPath p = polyline({{0, 0}, {100, 0}, {100, 100}, {0, 100}});
  const double eps = 1.0;
  Crossing prev = bare(0.2, 0.98, false);
  prev.seg_t = p.segment_of(0.2);
  prev.seg_s = 3;
  prev.location = evaluate(p, 0.01) + Point2{0.001 * eps, 0};
  EXPECT_TRUE(detect_loop_around(prev, {0.2, 0.01}, p, eps));
}

TEST(LoopAround, SeamHopWithSpatialJumpIsNotALoop) {
  const BezierPath p = polyline({{0, 0}, {1000, 0}, {1000, 1000}, {0, 1000}});
  const double eps = 1.0;
  Crossing prev = bare(0.2, 0.98, false);
  prev.seg_t = p.segment_of(0.2);
  prev.seg_s = 3;
  prev.location = evaluate(p, 0.01) + Point2{0, 100 * eps};
  EXPECT_FALSE(detect_loop_around(prev, {0.2, 0.01}, p, eps));
}

TEST(LoopAround, NoSeamCrossing) {
  const BezierPath p = polyline({{0, 0}, {100, 0}, {100, 100}, {0, 100}});
  Crossing prev = bare(0.2, 0.6, false);
  prev.seg_t = 0;
  prev.seg_s = 2;
  prev.location = evaluate(p, 0.2);
  EXPECT_FALSE(detect_loop_around(prev, {0.21, 0.61}, p, 1.0));
}

namespace {

/// Strands a (0.10..0.11), b (0.40..0.41), c (0.70..0.71) crossing pairwise.
std::array<Crossing, 3> triple(bool a_over_b, bool a_over_c, bool b_over_c) {
  return {bare(0.10, 0.40, a_over_b), bare(0.11, 0.70, a_over_c), bare(0.41, 0.71, b_over_c)};
}

}  // namespace

TEST(IsTangle, TotalOrderIsNotATangle) {
  const auto c = triple(true, true, true);
  EXPECT_FALSE(is_tangle(c[0], c[1], c[2]));
}

TEST(IsTangle, CyclicOrderIsATangle) {
  const auto c = triple(true, false, true);  // a>b, b>c, c>a
  EXPECT_TRUE(is_tangle(c[0], c[1], c[2]));
}

TEST(IsTangle, ExactlyTwoOfEightAssignmentsAreCyclic) {
  int cyclic = 0;
  for (int bits = 0; bits < 8; ++bits) {
    const auto c = triple(bits & 1, bits & 2, bits & 4);
    const bool tangle = is_tangle(c[0], c[1], c[2]);
    cyclic += tangle;
    // independent check: some strand beats both others iff not cyclic
    const bool ab = bits & 1, ac = bits & 2, bc = bits & 4;
    const bool top = (ab && ac) || (!ab && bc) || (!ac && !bc);
    EXPECT_EQ(tangle, !top) << bits;
  }
  EXPECT_EQ(cyclic, 2);
}

TEST(IsTangle, OrderOfArgumentsDoesNotMatter) {
  const auto c = triple(true, false, true);
  EXPECT_TRUE(is_tangle(c[2], c[0], c[1]));
  EXPECT_TRUE(is_tangle(c[1], c[2], c[0]));
}

TEST(IsTangle, UngroupableEndpointsAreMalformed) {
  EXPECT_THROW(is_tangle(bare(0.1, 0.4, true), bare(0.2, 0.5, true), bare(0.3, 0.6, true)), MalformedTriple);
}

TEST(PassedTriple, OrderSwapAlongStrandsIsAPass) {
  const std::array<TimePair, 3> before{{{0.100, 0.400}, {0.110, 0.700}, {0.410, 0.710}}};
  const std::array<TimePair, 3> after{{{0.110, 0.410}, {0.100, 0.710}, {0.400, 0.700}}};
  EXPECT_TRUE(passed_triple(before, after));
  const std::array<TimePair, 3> nudged{{{0.101, 0.401}, {0.111, 0.701}, {0.411, 0.711}}};
  EXPECT_FALSE(passed_triple(before, nudged));
}

TEST(StepFrame, IdenticalPathIsAFixedPoint) {
  for (const auto& name : kf_test::diagram_fixtures()) {
    const DiagramState st = kf_test::load_state(name);
    DiagramState cur = st;
    for (int k = 0; k < 5; ++k) {
      const FrameResult r = step_frame(cur, cur.path);
      ASSERT_TRUE(r.accepted()) << name;
      EXPECT_TRUE(r.value().events.empty()) << name;
      ASSERT_EQ(r.value().state.crossings.size(), st.crossings.size());
      for (std::size_t i = 0; i < st.crossings.size(); ++i) {
        EXPECT_NEAR(r.value().state.crossings[i].pair.t, st.crossings[i].pair.t, 1e-6);
        EXPECT_NEAR(r.value().state.crossings[i].pair.s, st.crossings[i].pair.s, 1e-6);
        EXPECT_EQ(r.value().state.crossings[i].over_first, st.crossings[i].over_first);
        EXPECT_EQ(r.value().state.crossings[i].sign, st.crossings[i].sign);
      }
      cur = r.value().state;
    }
  }
}

TEST(StepFrame, PokeBirthsTwoFalseCrossings) {
  const auto frames = frames_of(kf_test::load_trace("legal_r2"));
  bool seen = false;
  for (const Frame& f : frames) {
    ASSERT_TRUE(f.result.accepted());
    for (const FrameEvent& e : f.result.value().events) {
      if (e.kind != EventKind::R2Birth) continue;
      seen = true;
      ASSERT_EQ(e.crossings.size(), 2u);
      for (std::size_t i : e.crossings) EXPECT_FALSE(f.result.value().state.crossings[i].over_first);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(StepFrame, PullApartWithOppositeBooleansIsIllegal) {
  const auto frames = frames_of(kf_test::load_trace("illegal_r2"));
  std::size_t first = 0;
  for (std::size_t k = 0; k < frames.size() && !first; ++k)
    if (!frames[k].result.accepted()) first = k + 1;
  ASSERT_GT(first, 0u);
  const Frame& f = frames[first - 1];
  EXPECT_EQ(f.result.revert().reason, RevertReason::IllegalR2);
  const DiagramState copy = f.before;
  const FrameResult again = apply(f.before, kf_test::load_trace("illegal_r2").commands[first - 1]);
  EXPECT_FALSE(again.accepted());
  EXPECT_EQ(f.before, copy);
}

TEST(StepFrame, TangleSlideIsIllegal) {
  const auto frames = frames_of(kf_test::load_trace("illegal_r3"));
  bool reverted = false;
  for (const Frame& f : frames)
    if (!f.result.accepted()) {
      EXPECT_EQ(f.result.revert().reason, RevertReason::IllegalR3);
      reverted = true;
    }
  EXPECT_TRUE(reverted);
}

TEST(StepFrame, LegalSlideReportsR3AndKeepsInvariant) {
  const Trace trace = kf_test::load_trace("legal_r3");
  const auto frames = frames_of(trace);
  int passes = 0;
  for (const Frame& f : frames) {
    ASSERT_TRUE(f.result.accepted());
    for (const FrameEvent& e : f.result.value().events) passes += e.kind == EventKind::R3Pass;
  }
  EXPECT_EQ(passes, 1);
  const DiagramState& last = frames.back().result.value().state;
  EXPECT_EQ(alexander_polynomial(last), alexander_polynomial(trace.initial.state));
  EXPECT_NE(to_string(gauss_code(last)), to_string(gauss_code(trace.initial.state)));
}

TEST(StepFrame, CountsBalanceOnEveryAcceptedFrame) {
  for (const auto& name : kf_test::trace_names()) {
    for (const Frame& f : frames_of(kf_test::load_trace(name))) {
      if (!f.result.accepted()) continue;
      long births = 0, deaths = 0;
      for (const FrameEvent& e : f.result.value().events) {
        if (e.kind == EventKind::R1Birth || e.kind == EventKind::R2Birth) {
          births += static_cast<long>(e.crossings.size());
          for (std::size_t i : e.crossings) EXPECT_FALSE(f.result.value().state.crossings[i].over_first) << name;
        }
        if (e.kind == EventKind::R1Death || e.kind == EventKind::R2Death) deaths += static_cast<long>(e.crossings.size());
      }
      EXPECT_EQ(static_cast<long>(f.result.value().state.crossings.size()),
                static_cast<long>(f.before.crossings.size()) + births - deaths)
          << name;
    }
  }
}

TEST(StepFrame, RevertLeavesPreviousStateUntouched) {
  const DiagramState circle = kf_test::load_state("circle.json");
  const DiagramState copy = circle;
  const FrameResult r = step_frame(circle, kf_test::load_state("trefoil.json").path);
  ASSERT_FALSE(r.accepted());
  EXPECT_EQ(r.revert().reason, RevertReason::AmbiguousMatch);
  EXPECT_EQ(circle, copy);
}

TEST(StepFrame, TriplePointReverts) {
  const double r = 100.0;
  auto dir = [&](double deg) {
    const double a = deg * std::numbers::pi / 180.0;
    return Point2{r * std::cos(a), r * std::sin(a)};
  };
  // three chords through the origin joined end to end
  const BezierPath star = polyline({dir(180), dir(0), dir(240), dir(60), dir(300), dir(120)});
  const FrameResult res = step_frame(DiagramState{}, star);
  ASSERT_FALSE(res.accepted());
  EXPECT_EQ(res.revert().reason, RevertReason::TriplePoint);
}

TEST(StepFrame, KinkPulledOutIsR1BirthWithFalse) {
  const auto frames = frames_of(kf_test::load_trace("legal_r1"));
  int births = 0;
  for (const Frame& f : frames) {
    ASSERT_TRUE(f.result.accepted());
    for (const FrameEvent& e : f.result.value().events)
      if (e.kind == EventKind::R1Birth) {
        ++births;
        EXPECT_FALSE(f.result.value().state.crossings[e.crossings[0]].over_first);
      }
  }
  EXPECT_EQ(births, 1);
}

TEST(StepFrame, LoopAroundNegatesBooleanAndKeepsAppearance) {
  const auto frames = frames_of(kf_test::load_trace("loop_around"));
  for (const Frame& f : frames) {
    ASSERT_TRUE(f.result.accepted());
    for (const FrameEvent& e : f.result.value().events) {
      if (e.kind != EventKind::LoopAround) continue;
      const Crossing& now = f.result.value().state.crossings[e.crossings[0]];
      // the crossing at the same place before the frame
      const Crossing* then = nullptr;
      for (const Crossing& c : f.before.crossings)
        if (distance(c.location, now.location) < 1.0) then = &c;
      ASSERT_NE(then, nullptr);
      EXPECT_NE(then->over_first, now.over_first);
      // the strand on top still runs the same way through the crossing
      const Point2 over_before = tangent(f.before.path, then->over_time());
      const Point2 over_after = tangent(f.result.value().state.path, now.over_time());
      EXPECT_GT(std::abs(dot(over_before, over_after)) / (norm(over_before) * norm(over_after)), 0.99);
      EXPECT_EQ(then->sign, now.sign);
    }
  }
}
