#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "strebel/trajectory.hpp"

using namespace strebel;

namespace {
const PrecisionContext ctx{256};

RealBall half_sqrt3(const PrecisionContext& c) { return RealBall::from_int(3, c).sqrt().mul_2si(-1); }
}  // namespace

TEST_CASE("separatrix directions: counts and spacing") {
  QuadraticDifferential q1 = build_q1(ctx);
  Divisor d = divisor(q1, ctx);
  auto zeros = d.zeros();
  REQUIRE(zeros.size() == 2);
  for (const auto& z : zeros) {
    auto dirs = separatrix_directions(q1, z.point.z(), z.order, ctx);
    REQUIRE(dirs.size() == 3);
    RealBall third = RealBall::pi(ctx).mul_2si(1) / RealBall::from_int(3, ctx);
    CHECK((dirs[1] - dirs[0] - third).contains_zero());
    CHECK((dirs[2] - dirs[1] - third).contains_zero());
  }
  // Top vertex of the theta graph: directions pi/6, 5pi/6, 3pi/2.
  RealBall half = RealBall::from_rational(Rational(1, 2), ctx);
  ComplexBall top = ComplexBall::make(half, half_sqrt3(ctx));
  auto dirs = separatrix_directions(q1, top, 1, ctx);
  RealBall pi = RealBall::pi(ctx);
  CHECK((dirs[0] - pi / RealBall::from_int(6, ctx)).contains_zero());
  CHECK((dirs[1] - pi * RealBall::from_rational(Rational(5, 6), ctx)).contains_zero());
  CHECK((dirs[2] - pi * RealBall::from_rational(Rational(3, 2), ctx)).contains_zero());
}

TEST_CASE("q1: all six separatrices close the theta graph with unit periods") {
  TrajectoryTracer tracer(build_q1(ctx), TraceConfig{}, ctx);
  REQUIRE(tracer.vertices().size() == 2);
  std::vector<Separatrix> seps = tracer.trace_all();
  REQUIRE(seps.size() == 6);

  for (const auto& s : seps) {
    REQUIRE(s.terminal_vertex.has_value());
    CHECK(*s.terminal_vertex == 1 - s.origin_vertex);  // always the other zero
    CHECK(s.q_length.contains(Rational(1)));
    CHECK(s.q_length.radius() < 1e-12);
    CHECK(s.w_increment.imag().contains_zero());
    CHECK(s.path.size() > 100);
    CHECK(s.path.size() < 40000);  // order-8 stepping, not order-2
    CHECK(std::fabs(s.flow_time - 1.0) < 1e-6);
  }

  // Slot matching is a bijection: each (vertex, direction) is hit once.
  std::map<std::pair<int, int>, int> hits;
  for (const auto& s : seps) hits[{*s.terminal_vertex, *s.terminal_direction}]++;
  CHECK(hits.size() == 6);

  // Reversibility via edge pairing.
  int edges = 0;
  for (int i = 0; i < 6; ++i) {
    const auto& s = seps[static_cast<size_t>(i)];
    for (int j = i + 1; j < 6; ++j) {
      const auto& t = seps[static_cast<size_t>(j)];
      if (*s.terminal_vertex == t.origin_vertex && *s.terminal_direction == t.direction_index &&
          *t.terminal_vertex == s.origin_vertex && *t.terminal_direction == s.direction_index) {
        EdgeMeasure em = edge_period(seps, i, j);
        CHECK(em.period.contains(Rational(1)));
        ++edges;
      }
    }
  }
  CHECK(edges == 3);

  // Membership: every traced point maps under g into [0,1] within 1e-10.
  std::vector<ComplexBall> sample;
  for (const auto& s : seps)
    for (size_t i = 0; i < s.path.size(); i += 23) sample.push_back(s.path[i]);
  MembershipResult mr = membership_check(sample, {g_map(ctx)}, 1e-10, ctx);
  CHECK(mr.ok);
  CHECK(mr.worst_abs_im <= 1e-10);
}

TEST_CASE("max_length stops the trace with no terminal") {
  TraceConfig cfg;
  cfg.max_length = 0.25;  // unit edges cannot finish
  TrajectoryTracer tracer(build_q1(ctx), cfg, ctx);
  Separatrix s = tracer.trace(0, 0);
  CHECK(!s.terminal_vertex.has_value());
  CHECK(s.flow_time >= 0.2);
  std::vector<Separatrix> pair = {s, s};
  CHECK_THROWS_AS(edge_period(pair, 0, 1), MaxLengthError);
}

TEST_CASE("segment_period: oracle values on the vertical edge") {
  QuadraticDifferential q1 = build_q1(ctx);
  RealBall half = RealBall::from_rational(Rational(1, 2), ctx);

  // y0 == y1 gives zero.
  ComplexBall mid = ComplexBall::from_real(half);
  CHECK(segment_period(q1, mid, mid, ctx).contains(Rational(0)));

  // ell(s) for r = 1/4: arcsin(13/14)/pi.
  SParameter sp = SParameter::make(Rational(1, 4), ctx);
  RealBall ell = segment_period(q1, mid, sp.w, ctx);
  RealBall expected = RealBall::from_rational(Rational(13, 14), ctx).asin() / RealBall::pi(ctx);
  CHECK((ell - expected).contains_zero());
  CHECK(ell.radius() < 1e-20);

  // Full vertical edge between the two zeros has length 1.
  ComplexBall top = ComplexBall::make(half, half_sqrt3(ctx));
  ComplexBall bot = ComplexBall::make(half, -half_sqrt3(ctx));
  RealBall unit = segment_period(q1, top, bot, ctx);
  CHECK(unit.contains(Rational(1)));
  CHECK(unit.radius() < 1e-12);
}

TEST_CASE("closed form vs quadrature at the acceptance grid") {
  QuadraticDifferential q1 = build_q1(ctx);
  RealBall half = RealBall::from_rational(Rational(1, 2), ctx);
  ComplexBall mid = ComplexBall::from_real(half);
  for (const auto& r : {Rational(1, 8), Rational(1, 4), Rational(2, 5), Rational(5, 11)}) {
    SParameter sp = SParameter::make(r, ctx);
    RealBall by_quad = segment_period(q1, mid, sp.w, ctx);
    RealBall closed = ell_closed_form(r, ctx);
    CHECK((by_quad - closed).contains_zero());
    CHECK(by_quad.radius() < 1e-15);
    CHECK(closed.radius() < 1e-15);
  }
}

TEST_CASE("membership_check rejects points off the graph") {
  std::vector<ComplexBall> pts = {ComplexBall::from_int(2, 0, ctx)};   // g(2) = 1, boundary
  MembershipResult ok = membership_check(pts, {g_map(ctx)}, 1e-10, ctx);
  CHECK(ok.ok);
  std::vector<ComplexBall> bad = {ComplexBall::from_int(3, 0, ctx)};   // g(3) = 343/243 > 1
  MembershipResult no = membership_check(bad, {g_map(ctx)}, 1e-10, ctx);
  CHECK(!no.ok);
  CHECK(no.worst_re_high > 0.4);
}

TEST_CASE("q_c at r = 5/11: sixteen separatrices, eight edges, edge-L periods") {
  SParameter sp = SParameter::make(Rational(5, 11), ctx);
  auto [qc, sol] = build_qc(sp, ctx);
  TrajectoryTracer tracer(qc, TraceConfig{}, ctx);
  REQUIRE(tracer.vertices().size() == 5);

  int four_valent = -1;
  int halfedges = 0;
  for (size_t v = 0; v < tracer.vertices().size(); ++v) {
    const auto& tv = tracer.vertices()[v];
    halfedges += static_cast<int>(tv.angles.size());
    if (tv.order == 2) {
      four_valent = static_cast<int>(v);
      CHECK(tv.angles.size() == 4);
      CHECK(ComplexBall::overlaps(tv.point, -sol.c));
      // Four directions pi/2 apart.
      RealBall quarter = RealBall::pi(ctx).mul_2si(-1);
      CHECK((tv.angles[1] - tv.angles[0] - quarter).contains_zero());
      CHECK((tv.angles[3] - tv.angles[2] - quarter).contains_zero());
    } else {
      CHECK(tv.order == 1);
      CHECK(tv.angles.size() == 3);
    }
  }
  REQUIRE(four_valent >= 0);
  CHECK(halfedges == 16);

  std::vector<Separatrix> seps = tracer.trace_all();
  REQUIRE(seps.size() == 16);
  for (const auto& s : seps) {
    REQUIRE(s.terminal_vertex.has_value());
    CHECK(s.w_increment.imag().contains_zero());
  }

  // Pair the orientations into edges.
  std::vector<EdgeMeasure> edges;
  std::vector<bool> used(seps.size(), false);
  for (size_t i = 0; i < seps.size(); ++i) {
    if (used[i]) continue;
    for (size_t j = i + 1; j < seps.size(); ++j) {
      if (used[j]) continue;
      const auto& s = seps[i];
      const auto& t = seps[j];
      if (*s.terminal_vertex == t.origin_vertex && *s.terminal_direction == t.direction_index &&
          *t.terminal_vertex == s.origin_vertex && *t.terminal_direction == s.direction_index) {
        edges.push_back(edge_period(seps, static_cast<int>(i), static_cast<int>(j)));
        used[i] = used[j] = true;
        break;
      }
    }
  }
  REQUIRE(edges.size() == 8);

  // Total edge length 6 = half the residue sum 12.
  RealBall total(ctx);
  for (const auto& e : edges) total = total + e.period;
  CHECK(total.contains(Rational(6)));
  CHECK(total.radius() < 1e-10);

  // The four edges at -c have period multiset {1/2-l, 1/2-l, 1/2+l, 1/2+l};
  // the pair toward the two distinct trivalent neighbors realizes
  // {1/2 - l, 1/2 + l}.
  RealBall ell = ell_closed_form(Rational(5, 11), ctx);
  RealBall halfb = RealBall::from_rational(Rational(1, 2), ctx);
  RealBall lo_expect = halfb - ell;
  RealBall hi_expect = halfb + ell;
  int n_lo = 0, n_hi = 0;
  for (const auto& e : edges) {
    const auto& s = seps[static_cast<size_t>(e.sep_a)];
    bool touches = s.origin_vertex == four_valent || *s.terminal_vertex == four_valent;
    if (!touches) {
      CHECK(e.period.contains(Rational(1)));  // lifted arc edges
      continue;
    }
    if (RealBall::overlaps(e.period, lo_expect)) {
      CHECK((e.period - lo_expect).contains_zero());
      ++n_lo;
    } else {
      CHECK((e.period - hi_expect).contains_zero());
      ++n_hi;
    }
    CHECK(e.period.radius() < 1e-10);
  }
  CHECK(n_lo == 2);
  CHECK(n_hi == 2);

  // Membership through g o f at 1e-10.
  std::vector<ComplexBall> sample;
  for (const auto& s : seps)
    for (size_t i = 0; i < s.path.size(); i += 37) sample.push_back(s.path[i]);
  MembershipResult mr = membership_check(sample, {f_map(sol.c), g_map(ctx)}, 1e-10, ctx);
  CHECK(mr.ok);
}
