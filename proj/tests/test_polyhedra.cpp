#include "doctest.h"

#include "setrisk/linalg.hpp"
#include "setrisk/polyhedra.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

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

HRep halfspace(std::initializer_list<Rational> normal, Rational offset) {
  HRep h;
  h.dim = static_cast<Index>(normal.size());
  h.add_inequality(vector_of(normal), offset);
  return h;
}

bool same_vectors(std::vector<Vector> a, std::vector<Vector> b) {
  setrisk::testing::sort_vectors(a);
  setrisk::testing::sort_vectors(b);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("rational parsing is exact and canonical") {
  CHECK(to_string(parse_rational("4/6")) == "2/3");
  CHECK(to_string(parse_rational(" -3 ")) == "-3");
  CHECK(to_string(parse_rational("1.25")) == "5/4");
  CHECK(parse_rational("1/3") * 3 == 1);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("dd_convert: orthant") {
  const Polyhedron p = dd_convert(halfspace({1, 0}, 0));
  const Polyhedron q = intersect(p, Polyhedron(halfspace({0, 1}, 0)));
  CHECK(q == Polyhedron::orthant(2));
  const VRep& v = q.vrep();
  REQUIRE(v.vertices.size() == 1);
  CHECK(is_zero(v.vertices[0]));
  CHECK(same_vectors(v.rays, {vector_of({1, 0}), vector_of({0, 1})}));
  CHECK(v.lineality.empty());
}

TEST_CASE("dd_convert: halfspace through the origin") {
  const Polyhedron p = dd_convert(halfspace({1, 1}, 0));
  const VRep& v = p.vrep();
  REQUIRE(v.vertices.size() == 1);
  CHECK(is_zero(v.vertices[0]));
  REQUIRE(v.lineality.size() == 1);
  CHECK(equal(v.lineality[0], vector_of({1, -1})));
  REQUIRE(v.rays.size() == 1);
  CHECK(dot(v.rays[0], vector_of({1, 1})) > 0);
  CHECK(p.is_cone());
}

TEST_CASE("dd_convert: two-line set has vertex (4,6)") {
  const Polyhedron p = dd_convert(two_line_set());
  const VRep& v = p.vrep();
  REQUIRE(v.vertices.size() == 1);
  CHECK(equal(v.vertices[0], vector_of({4, 6})));
  CHECK(same_vectors(v.rays, {vector_of({2, -1}), vector_of({-1, 2})}));
  CHECK(v.lineality.empty());
  CHECK(p.hrep().inequalities.size() == 2);
}

TEST_CASE("V to H conversion recovers the two-line set") {
  const Polyhedron p = dd_convert(VRep{2, {vector_of({4, 6})}, {vector_of({2, -1}), vector_of({-1, 2})}, {}});
  CHECK(p == Polyhedron(two_line_set()));
}

TEST_CASE("empty and whole space") {
  HRep h;
  h.dim = 1;
  h.add_inequality(vector_of({1}), 1);
  h.add_inequality(vector_of({-1}), 0);
  const Polyhedron e = dd_convert(h);
  CHECK(e.is_empty());
  CHECK(e == Polyhedron::empty(1));
  CHECK(e.affine_dim() == -1);
  CHECK(Polyhedron::whole_space(3).hrep().inequalities.empty());
  CHECK(Polyhedron::whole_space(3).is_full_dimensional());
  CHECK(Polyhedron::empty(2).hrep().marks_empty());
  CHECK_FALSE(Polyhedron::empty(2).is_cone());
}

TEST_CASE("dual_cone examples") {
  CHECK(dual_cone(Polyhedron::orthant(2)) == Polyhedron::orthant(2));
  const Polyhedron h = Polyhedron::cone_from_inequalities(2, {vector_of({1, 2})});
  CHECK(dual_cone(h) == Polyhedron::cone(2, {vector_of({1, 2})}));
  CHECK(dual_cone(Polyhedron::cone_from_inequalities(3, {vector_of({1, -1, 2})})) ==
        Polyhedron::cone(3, {vector_of({1, -1, 2})}));
  CHECK_THROWS_AS(dual_cone(Polyhedron::point(vector_of({1, 0}))), NotACone);
  CHECK_THROWS_AS(dual_cone(Polyhedron::empty(2)), NotACone);
}

TEST_CASE("dual_cone within a subspace") {
  // K = {x2 >= -2 x1} intersected with M = span{(0,1)} is the ray (0,1); its dual in M is the same ray.
  const Matrix basis = matrix_of({{0}, {1}});
  const Polyhedron k = Polyhedron::cone_from_inequalities(2, {vector_of({2, 1})});
  const Polyhedron m_line = Polyhedron::cone(2, {}, {vector_of({0, 1})});
  const Polyhedron km = intersect(k, m_line);
  CHECK(km == Polyhedron::cone(2, {vector_of({0, 1})}));
  CHECK(dual_cone(km, basis) == Polyhedron::cone(2, {vector_of({0, 1})}));
  CHECK_THROWS_AS(dual_cone(k, basis), DimensionMismatch);
}

TEST_CASE("minkowski_sum examples") {
  const Polyhedron p(two_line_set());
  CHECK(minkowski_sum(p, Polyhedron::point(vector_of({0, 0}))) == p);
  CHECK(minkowski_sum(Polyhedron::cone(2, {vector_of({1, 0})}), Polyhedron::cone(2, {vector_of({0, 1})})) ==
        Polyhedron::orthant(2));
  const Polyhedron ki = Polyhedron::cone_from_inequalities(2, {vector_of({1, 1})});
  CHECK(minkowski_sum(p, ki) == Polyhedron(halfspace({1, 1}, 10)));
  CHECK(minkowski_sum(p, Polyhedron::empty(2)).is_empty());
  CHECK_THROWS_AS(minkowski_sum(p, Polyhedron::orthant(3)), DimensionMismatch);
}

TEST_CASE("intersect examples") {
  const Polyhedron p(two_line_set());
  CHECK(intersect(p, Polyhedron::whole_space(2)) == p);
  const Polyhedron line = intersect(Polyhedron(halfspace({1}, 0)), Polyhedron(halfspace({-1}, 0)));
  CHECK(line == Polyhedron::point(vector_of({0})));
  const Polyhedron three = intersect(p, Polyhedron(halfspace({1, 1}, -1)));
  CHECK(three == p);
  CHECK(three.hrep().inequalities.size() == 2);
}

TEST_CASE("project examples") {
  const std::array<Index, 1> first{0};
  CHECK(project(Polyhedron::orthant(2), first) == Polyhedron::orthant(1));
  const std::array<Index, 2> both{0, 1};
  const Polyhedron p(two_line_set());
  CHECK(project(p, both) == p);

  // Variables (u1, u2, k1, k2).
  HRep h;
  h.dim = 4;
  h.add_inequality(vector_of({1, 2, -1, -2}), 16);
  h.add_inequality(vector_of({2, 1, -2, -1}), 14);
  h.add_inequality(vector_of({0, 0, 1, 1}), 0);
  CHECK(project(Polyhedron(h), both) == Polyhedron(halfspace({1, 1}, 10)));

  const std::array<Index, 2> repeated{0, 0};
  CHECK_THROWS_AS(project(p, repeated), DimensionMismatch);
  const std::array<Index, 1> out_of_range{2};
  CHECK_THROWS_AS(project(p, out_of_range), DimensionMismatch);
}

TEST_CASE("subset and contains") {
  const Polyhedron p(two_line_set());
  CHECK(subset(p, p));
  CHECK(subset(Polyhedron::orthant(2), Polyhedron(halfspace({1, 1}, 0))));
  CHECK_FALSE(subset(Polyhedron(halfspace({1, 1}, 0)), Polyhedron::orthant(2)));
  CHECK(contains(p, vector_of({4, 6})));
  CHECK_FALSE(contains(p, vector_of({4, 5})));
  CHECK(subset(Polyhedron::empty(2), p));
  CHECK_FALSE(subset(p, Polyhedron::empty(2)));
  CHECK_THROWS_AS(contains(p, vector_of({1})), DimensionMismatch);
}

TEST_CASE("image, preimage, translate, scale, recession") {
  const Polyhedron p(two_line_set());
  CHECK(translate(p, vector_of({-4, -6})) == Polyhedron::cone(2, {vector_of({2, -1}), vector_of({-1, 2})}));
  CHECK(recession_cone(p) == Polyhedron::cone(2, {vector_of({2, -1}), vector_of({-1, 2})}));
  HRep doubled;
  doubled.dim = 2;
  doubled.add_inequality(vector_of({1, 2}), 32);
  doubled.add_inequality(vector_of({2, 1}), 28);
  CHECK(scale(p, 2) == Polyhedron(doubled));
  CHECK(scale(p, 0) == Polyhedron::point(vector_of({0, 0})));
  const Matrix swap = matrix_of({{0, 1}, {1, 0}});
  const Polyhedron swapped = image(p, swap);
  CHECK(contains(swapped, vector_of({6, 4})));
  CHECK(preimage(swapped, swap) == p);
  const std::array<Polyhedron, 2> blocks{Polyhedron::orthant(1), Polyhedron::point(vector_of({2}))};
  CHECK(cartesian_product(blocks) ==
        intersect(Polyhedron(halfspace({1, 0}, 0)),
                  Polyhedron(HRep{2, {}, {{vector_of({0, 1}), Rational(2)}}})));
}

TEST_CASE("canonical output is deterministic and insensitive to input order") {
  HRep a = two_line_set();
  a.add_inequality(vector_of({3, 3}), -3);
  HRep b;
  b.dim = 2;
  b.add_inequality(vector_of({1, 1}), -1);
  b.add_inequality(vector_of({4, 2}), 28);
  b.add_inequality(vector_of({1, 2}), 16);
  const Polyhedron pa = dd_convert(a), pb = dd_convert(b);
  CHECK(pa == pb);
  REQUIRE(pa.hrep().inequalities.size() == pb.hrep().inequalities.size());
  for (std::size_t i = 0; i < pa.hrep().inequalities.size(); ++i) {
    CHECK(equal(pa.hrep().inequalities[i].normal, pb.hrep().inequalities[i].normal));
    CHECK(pa.hrep().inequalities[i].offset == pb.hrep().inequalities[i].offset);
  }
}

TEST_CASE("property: H to V matches brute-force enumeration on pointed polyhedra") {
  Gen gen(20240611);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Index dim = gen.integer(1, 4);
    const HRep h = gen.hrep(dim, gen.integer(dim, 7));
    const Polyhedron p = dd_convert(h);
    const auto brute = setrisk::testing::brute_vertices(h);
    if (p.is_empty()) {
      CHECK(brute.empty());
      continue;
    }
    if (!p.vrep().lineality.empty()) continue;
    CHECK(same_vectors(p.vrep().vertices, brute));
    CHECK(same_vectors(p.vrep().rays, setrisk::testing::brute_extreme_rays(h)));
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("property: H-V-H round trip, dims up to 6") {
  Gen gen(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Index dim = gen.integer(1, 6);
    const HRep h = gen.hrep(dim, gen.integer(1, 12));
    const Polyhedron p = dd_convert(h);
    const Polyhedron back = dd_convert(p.vrep());
    CHECK(back == p);
    // The raw input and the canonical output describe the same set.
    for (const auto& c : h.inequalities) {
      Polyhedron half(HRep{dim, {c}, {}});
      CHECK(subset(p, half));
    }
    CHECK(subset(Polyhedron(p.hrep()), Polyhedron(h)));
  }
}

TEST_CASE("property: dual cone involution and intersection duality") {
  Gen gen(99);
  for (int trial = 0; trial < 60; ++trial) {
    const Index dim = gen.integer(1, 6);
    const Polyhedron c1 = gen.cone(dim, 6);
    const Polyhedron c2 = gen.cone(dim, 6);
    CHECK(dual_cone(dual_cone(c1)) == c1);
    CHECK(dual_cone(intersect(c1, c2)) == minkowski_sum(dual_cone(c1), dual_cone(c2)));
  }
}

TEST_CASE("property: minkowski sum algebra") {
  Gen gen(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Index dim = gen.integer(1, 3);
    const Polyhedron a = dd_convert(gen.hrep(dim, gen.integer(1, 4)));
    const Polyhedron b = dd_convert(gen.hrep(dim, gen.integer(1, 4)));
    const Polyhedron c = gen.cone(dim, 3);
    CHECK(minkowski_sum(a, b) == minkowski_sum(b, a));
    CHECK(minkowski_sum(minkowski_sum(a, b), c) == minkowski_sum(a, minkowski_sum(b, c)));
    CHECK(minkowski_sum(a, Polyhedron::point(Vector::Zero(dim))) == a);
  }
}

TEST_CASE("property: projection agrees with Fourier-Motzkin") {
  Gen gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Index dim = gen.integer(2, 4);
    const HRep h = gen.hrep(dim, gen.integer(1, 6));
    const Index drop = gen.integer(0, static_cast<int>(dim) - 1);
    std::vector<Index> keep;
    for (Index i = 0; i < dim; ++i)
      if (i != drop) keep.push_back(i);
    const Polyhedron projected = project(Polyhedron(h), keep);
    const HRep fm = setrisk::testing::keep_columns(setrisk::testing::fourier_motzkin(h, drop), keep);
    CHECK(projected == Polyhedron(fm));
    // project then project composes as index composition.
    if (keep.size() >= 2) {
      const std::array<Index, 1> first{0};
      const std::array<Index, 1> composed{keep[0]};
      CHECK(project(projected, first) == project(Polyhedron(h), composed));
    }
  }
}
