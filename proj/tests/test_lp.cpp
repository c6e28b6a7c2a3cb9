#include "doctest.h"

#include "setrisk/lp.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <array>

using namespace setrisk;
using setrisk::testing::Gen;

namespace {

HRep two_line_set() {
  HRep h;
  h.dim = 2;
  h.add_inequality(vector_of({1, 2}), 16);
  h.add_inequality(vector_of({2, 1}), 14);
  return h;
}

HRep box(Index dim, int lo, int hi) {
  HRep h;
  h.dim = dim;
  for (Index i = 0; i < dim; ++i) {
    h.add_inequality(unit(dim, i), lo);
    h.add_inequality(Vector(-unit(dim, i)), -hi);
  }
  return h;
}

}  // namespace

TEST_CASE("solve: two-line set minimum is 10 at (4,6)") {
  const LpOutcome out = solve({vector_of({1, 1}), two_line_set(), Sense::minimize});
  REQUIRE(out.status == LpStatus::optimal);
  CHECK(*out.value == 10);
  CHECK(equal(*out.point, vector_of({4, 6})));
  CHECK(equal(*out.duals, vector_of({Rational(1, 3), Rational(1, 3)})));
}

TEST_CASE("solve: trivial statuses") {
  HRep nonneg;
  nonneg.dim = 1;
  nonneg.add_inequality(vector_of({1}), 0);
  const LpOutcome zero = solve({vector_of({0}), nonneg, Sense::minimize});
  REQUIRE(zero.status == LpStatus::optimal);
  CHECK(*zero.value == 0);

  const LpOutcome unbounded = solve({vector_of({-1}), nonneg, Sense::minimize});
  REQUIRE(unbounded.status == LpStatus::unbounded);
  CHECK(equal(*unbounded.certificate, vector_of({1})));

  HRep clash = nonneg;
  clash.add_inequality(vector_of({-1}), 1);
  const LpOutcome infeasible = solve({vector_of({0}), clash, Sense::minimize});
  REQUIRE(infeasible.status == LpStatus::infeasible);
  CHECK(infeasible.certificate->size() == 2);

  const LpOutcome maximum = solve({vector_of({1, 1}), box(2, 0, 3), Sense::maximize});
  REQUIRE(maximum.status == LpStatus::optimal);
  CHECK(*maximum.value == 6);
}

TEST_CASE("solve: equalities and degenerate rows") {
  HRep h;
  h.dim = 3;
  h.add_equality(vector_of({1, 1, 1}), 1);
  h.add_equality(vector_of({2, 2, 2}), 2);  // redundant
  h.add_inequality(vector_of({1, 0, 0}), 0);
  h.add_inequality(vector_of({0, 1, 0}), 0);
  h.add_inequality(vector_of({0, 0, 1}), 0);
  h.add_inequality(vector_of({0, 0, 0}), -1);
  const LpOutcome out = solve({vector_of({3, 1, 2}), h, Sense::minimize});
  REQUIRE(out.status == LpStatus::optimal);
  CHECK(*out.value == 1);
  CHECK(equal(*out.point, vector_of({0, 1, 0})));
  CHECK_THROWS_AS(solve({vector_of({1}), h, Sense::minimize}), DimensionMismatch);
}

TEST_CASE("strict_feasible examples") {
  HRep nonneg;
  nonneg.dim = 1;
  nonneg.add_inequality(vector_of({1}), 0);
  const std::array<std::size_t, 1> first{0};
  const auto x = strict_feasible(nonneg, first);
  REQUIRE(x);
  CHECK((*x)[0] > 0);

  HRep pinched = nonneg;
  pinched.add_inequality(vector_of({-1}), 0);
  const std::array<std::size_t, 2> both{0, 1};
  CHECK_FALSE(strict_feasible(pinched, both));
  CHECK(strict_feasible(pinched, std::span<const std::size_t>{}));

  // Dual of K_I = {x1 + x2 >= 0} is the ray (1,1); strictly positive generator coefficient gives (1,1).
  const Polyhedron dual = dual_cone(Polyhedron::cone_from_inequalities(2, {vector_of({1, 1})}));
  const auto y = strict_feasible(dual.hrep(), std::span<const std::size_t>{});
  REQUIRE(y);
  CHECK(contains(dual, *y));
  HRep coeff;
  coeff.dim = 1;
  coeff.add_inequality(vector_of({1}), 0);
  const auto t = strict_feasible(coeff, first);
  REQUIRE(t);
  const Vector point = (*t)[0] * dual.vrep().rays[0];
  CHECK(equal(Vector(point / point[0]), vector_of({1, 1})));
}

TEST_CASE("support_value examples") {
  CHECK(support_value(Polyhedron::orthant(2), vector_of({-1, -1})) == Extended::finite(0));
  CHECK(support_value(Polyhedron::orthant(2), vector_of({1, 0})) == Extended::plus_infinity());
  CHECK(support_value(Polyhedron(two_line_set()), vector_of({-1, -1})) == Extended::finite(-10));
  CHECK_THROWS_AS(support_value(Polyhedron::empty(2), vector_of({1, 0})), EmptySetError);
  CHECK(minimum_value(Polyhedron::empty(2), vector_of({1, 0})) == Extended::plus_infinity());
  CHECK(minimum_value(Polyhedron::orthant(2), vector_of({-1, 0})) == Extended::minus_infinity());
  CHECK(to_string(Extended::finite(Rational(-7, 2))) == "-7/2");
}

TEST_CASE("covered_by examples") {
  const Polyhedron left(HRep{1, {{vector_of({-1}), Rational(0)}}, {}});   // x <= 0
  const Polyhedron right(HRep{1, {{vector_of({1}), Rational(0)}}, {}});   // x >= 0
  const Polyhedron far(HRep{1, {{vector_of({1}), Rational(1)}}, {}});     // x >= 1
  const std::array<Polyhedron, 2> halves{left, right};
  CHECK(covered_by(Polyhedron::whole_space(1), halves));
  const std::array<Polyhedron, 2> gap{left, far};
  CHECK_FALSE(covered_by(Polyhedron::whole_space(1), gap));
  CHECK(covered_by(Polyhedron::point(vector_of({0})), gap));
  CHECK_FALSE(covered_by(Polyhedron::point(vector_of({Rational(1, 2)})), gap));
  CHECK(covered_by(Polyhedron::empty(1), std::span<const Polyhedron>{}));

  // A segment in the plane covered by two quadrants, with a lower-dimensional member ignored.
  const Polyhedron seg = dd_convert(VRep{2, {vector_of({-1, 1}), vector_of({1, -1})}, {}, {}});
  const std::array<Polyhedron, 3> quads{
      Polyhedron(HRep{2, {{vector_of({-1, 0}), Rational(0)}}, {}}),
      Polyhedron(HRep{2, {{vector_of({0, -1}), Rational(0)}}, {}}),
      Polyhedron::point(vector_of({0, 0}))};
  CHECK(covered_by(seg, quads));
  const std::array<Polyhedron, 1> one{quads[0]};
  CHECK_FALSE(covered_by(seg, one));
}

TEST_CASE("property: LP optimum equals brute-force vertex minimum on bounded sets") {
  Gen gen(424242);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Index dim = gen.integer(1, 4);
    HRep h = gen.hrep(dim, gen.integer(0, 6));
    const HRep b = box(dim, -5, 5);
    h.inequalities.insert(h.inequalities.end(), b.inequalities.begin(), b.inequalities.end());
    const Vector c = gen.vector(dim, 4);
    const LpOutcome out = solve({c, h, Sense::minimize});
    const auto vertices = setrisk::testing::brute_vertices(h);
    if (vertices.empty()) {
      CHECK(out.status == LpStatus::infeasible);
      continue;
    }
    REQUIRE(out.status == LpStatus::optimal);
    Rational best = dot(c, vertices.front());
    for (const auto& v : vertices) best = std::min(best, Rational(dot(c, v)));
    CHECK(*out.value == best);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("property: row permutation invariance and positive homogeneity of support") {
  Gen gen(31337);
  for (int trial = 0; trial < 40; ++trial) {
    const Index dim = gen.integer(1, 5);
    HRep h = gen.hrep(dim, gen.integer(1, 8));
    const Vector c = gen.vector(dim, 3);
    const LpOutcome a = solve({c, h, Sense::minimize});
    std::shuffle(h.inequalities.begin(), h.inequalities.end(), gen.engine());
    const LpOutcome b = solve({c, h, Sense::minimize});
    CHECK(a.status == b.status);
    if (a.status == LpStatus::optimal) CHECK(*a.value == *b.value);

    const Polyhedron p(h);
    if (p.is_empty()) continue;
    const Extended s1 = support_value(p, c);
    const Extended s3 = support_value(p, Vector(3 * c));
    CHECK(s1.kind == s3.kind);
    if (s1.is_finite()) CHECK(s3.value == 3 * s1.value);
  }
}

TEST_CASE("property: covered_by agrees with sampling") {
  Gen gen(2718);
  for (int trial = 0; trial < 40; ++trial) {
    const Polyhedron region(box(2, -2, 2));
    std::vector<Polyhedron> cover;
    const int k = gen.integer(1, 3);
    for (int i = 0; i < k; ++i) cover.push_back(Polyhedron(gen.hrep(2, gen.integer(1, 2), 2)));
    const bool covered = covered_by(region, cover);
    bool all_sampled_covered = true;
    for (int a = -8; a <= 8; ++a)
      for (int b = -8; b <= 8; ++b) {
        const Vector x = vector_of({Rational(a, 4), Rational(b, 4)});
        bool in = false;
        for (const auto& q : cover) in = in || contains(q, x);
        all_sampled_covered = all_sampled_covered && in;
      }
    if (covered) CHECK(all_sampled_covered);
  }
}
