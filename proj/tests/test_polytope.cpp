#include "tropex/errors.hpp"
#include "tropex/polytope.hpp"

#include "support/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace tropex;

namespace {

AffCondition cond(VecI slope, Rat constant, bool strict = false) {
  AffCondition c;
  c.slope = std::move(slope);
  c.constant = std::move(constant);
  c.strict = strict;
  return c;
}

Polytope interval01() {
  return Polytope(1, {cond({Int(1)}, 0), cond({Int(-1)}, 1)});
}

Polytope halfline() { return Polytope(1, {cond({Int(1)}, 0)}); }

// {x >= 0, y >= 0, 1 - x - y >= 0}
Polytope simplex2() {
  return Polytope(2, {cond({Int(1), Int(0)}, 0), cond({Int(0), Int(1)}, 0),
                      cond({Int(-1), Int(-1)}, 1)});
}

// {x >= 0, t >= 0, x - t >= 0}
Polytope node_model_set() {
  return Polytope(2, {cond({Int(1), Int(0)}, 0), cond({Int(0), Int(1)}, 0),
                      cond({Int(1), Int(-1)}, 0)});
}

// All distinct faces by brute force: every subset of rows pinned to zero,
// keyed by the maximal active set at a relative-interior point.
std::set<std::vector<int>> face_keys_by_subsets(const Polytope& p) {
  Polytope cl = p.closure();
  const auto& rows = cl.conditions();
  int m = static_cast<int>(rows.size());
  REQUIRE(m <= 12);
  std::set<std::vector<int>> keys;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<AffCondition> pinned = rows;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) {
        AffCondition flip = rows[i];
        for (Int& s : flip.slope) s = -s;
        flip.constant = -flip.constant;
        pinned.push_back(flip);
      }
    auto f = Polytope::try_make(p.ambient_dim(), pinned);
    if (!f) continue;
    VecQ w = f->relint_witness();
    std::vector<int> key;
    for (int i = 0; i < m; ++i)
      if (dot(rows[i].slope, w) + rows[i].constant == 0) key.push_back(i);
    keys.insert(key);
  }
  return keys;
}

}  // namespace

TEST_SUITE_BEGIN("polytope");

TEST_CASE("construction rejects empty sets, witness is interior to the rules") {
  CHECK_THROWS_AS(Polytope(1, {cond({Int(1)}, 0, true), cond({Int(-1)}, 0)}),
                  invalid_input_error);
  auto p = Polytope::try_make(1, {cond({Int(1)}, 0, true), cond({Int(-1)}, 0)});
  CHECK(!p.has_value());

  Polytope q(2, {cond({Int(1), Int(1)}, -1, true)});
  CHECK(q.contains(q.witness()));
  CHECK(!q.contains({Rat(0), Rat(0)}));
}

TEST_CASE("closure weakens conditions and preserves the affine span") {
  Polytope open01(1, {cond({Int(1)}, 0, true), cond({Int(-1)}, 1, true)});
  Polytope cl = open01.closure();
  CHECK(cl.contains({Rat(0)}));
  CHECK(cl.contains({Rat(1)}));
  CHECK(!open01.contains({Rat(0)}));
  CHECK(open01.dim() == cl.dim());
  CHECK(same_set(cl, interval01()));
}

TEST_CASE("dimension via implied equalities") {
  CHECK(interval01().dim() == 1);
  CHECK(simplex2().dim() == 2);
  // x >= 0, -x >= 0 pins a point.
  Polytope pt(1, {cond({Int(1)}, 0), cond({Int(-1)}, 0)});
  CHECK(pt.dim() == 0);
  // Diagonal segment in the plane.
  Polytope diag(2, {cond({Int(1), Int(-1)}, 0), cond({Int(-1), Int(1)}, 0),
                    cond({Int(1), Int(0)}, 0), cond({Int(-1), Int(0)}, 1)});
  CHECK(diag.dim() == 1);
  auto basis = diag.direction_basis();
  REQUIRE(basis.size() == 1);
  CHECK(iabs(basis[0][0]) == 1);
  CHECK(basis[0][0] == basis[0][1]);
}

TEST_CASE("relative interior: strictness, containment invariants") {
  Polytope p = interval01();
  Polytope ri = p.relative_interior();
  CHECK(ri.contains({Rat(1, 2)}));
  CHECK(!ri.contains({Rat(0)}));
  CHECK(relint_contains(p, {Rat(1, 2)}));
  CHECK(!relint_contains(p, {Rat(0)}));

  // relint of a point is the point.
  Polytope pt(1, {cond({Int(1)}, 0), cond({Int(-1)}, 0)});
  CHECK(pt.relative_interior().contains({Rat(0)}));

  std::mt19937_64 rng(9118);
  for (int trial = 0; trial < 25; ++trial) {
    Polytope q = gen::rand_polytope(rng, 2, 3, 3);
    Polytope cl = q.closure();
    // relint(closure) contains relint(q) and closure(relint) == closure.
    CHECK(subset_of(q.relative_interior(), cl.relative_interior()));
    CHECK(same_set(q.relative_interior().closure(), cl));
    CHECK(cl.contains(q.relint_witness()));
  }
}

TEST_CASE("face lattice of the triangle has 7 faces with expected dims") {
  auto faces = faces_of_closure(simplex2());
  REQUIRE(faces.size() == 7);
  std::vector<int> dims;
  for (const auto& f : faces) dims.push_back(f.poly.dim());
  std::vector<int> expect = {2, 1, 1, 1, 0, 0, 0};
  CHECK(dims == expect);  // sorted by decreasing dimension already

  // Vertices are the three corners.
  std::set<std::pair<Rat, Rat>> corners;
  for (const auto& f : faces)
    if (f.poly.dim() == 0) {
      VecQ w = f.poly.witness();
      corners.insert({w[0], w[1]});
    }
  CHECK(corners.count({Rat(0), Rat(0)}) == 1);
  CHECK(corners.count({Rat(1), Rat(0)}) == 1);
  CHECK(corners.count({Rat(0), Rat(1)}) == 1);
}

TEST_CASE("face enumeration matches subset brute force (random)") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 12; ++trial) {
    Polytope p = gen::rand_polytope(rng, 2, 4, 2);
    auto faces = faces_of_closure(p);
    std::set<std::vector<int>> got;
    for (const auto& f : faces) got.insert(f.active);
    CHECK(got == face_keys_by_subsets(p));
  }
}

TEST_CASE("every closure point lies in the relint of exactly one face") {
  Polytope p = simplex2();
  auto faces = faces_of_closure(p);
  // Probe corners, edge midpoints, interior, and outside points.
  std::vector<std::pair<VecQ, bool>> probes = {
      {{Rat(0), Rat(0)}, true},       {{Rat(1, 2), Rat(0)}, true},
      {{Rat(1, 4), Rat(1, 4)}, true}, {{Rat(1, 2), Rat(1, 2)}, true},
      {{Rat(2), Rat(0)}, false},      {{Rat(-1, 2), Rat(0)}, false},
  };
  for (const auto& [x, inside] : probes) {
    int idx = face_through(p, faces, x);
    if (!inside) {
      CHECK(idx == -1);
      continue;
    }
    REQUIRE(idx >= 0);
    CHECK(relint_contains(faces[idx].poly, x));
    // No other face's relint contains it.
    for (std::size_t i = 0; i < faces.size(); ++i)
      if (static_cast<int>(i) != idx)
        CHECK(!relint_contains(faces[i].poly, x));
  }
}

TEST_CASE("contains_line") {
  CHECK(Polytope::full_space(1).contains_line());
  CHECK(!halfline().contains_line());
  // Upper half plane.
  Polytope h(2, {cond({Int(0), Int(1)}, 0)});
  CHECK(h.contains_line());
  CHECK(!simplex2().contains_line());
}

TEST_CASE("recession cones with strictness inheritance") {
  auto r1 = interval01().recession_cone();
  REQUIRE(r1.has_value());
  CHECK(r1->contains({Rat(0)}));
  CHECK(r1->dim() == 0);

  auto r2 = halfline().recession_cone();
  REQUIRE(r2.has_value());
  CHECK(same_set(*r2, halfline()));

  // Node model is its own recession cone.
  auto r3 = node_model_set().recession_cone();
  REQUIRE(r3.has_value());
  CHECK(same_set(*r3, node_model_set()));

  // Half-open bounded interval: inherited strictness empties the cone.
  Polytope open05(1, {cond({Int(1)}, 0, true), cond({Int(-1)}, 5, true)});
  CHECK(!open05.recession_cone().has_value());
}

TEST_CASE("cone recognition: scaling invariance about an integral apex") {
  CHECK(halfline().is_cone());
  CHECK(halfline().is_cone_at({Rat(0)}));
  CHECK(!interval01().is_cone());
  CHECK(node_model_set().is_cone());
  CHECK(Polytope::full_space(2).is_cone());

  // Open half-line is a cone; shifted by 1/2 it has no integral apex.
  Polytope open_ray(1, {cond({Int(1)}, 0, true)});
  CHECK(open_ray.is_cone());
  Polytope shifted(1, {cond({Int(2)}, -1)});  // x >= 1/2
  CHECK(shifted.is_cone_at({Rat(1, 2)}));
  CHECK(!shifted.is_cone());

  // Integral translate is recognized through the designated-apex test.
  Polytope at_one(1, {cond({Int(1)}, -1)});  // x >= 1
  CHECK(at_one.is_cone());
  CHECK(at_one.is_cone_at({Rat(1)}));
  CHECK(!at_one.is_cone_at({Rat(0)}));

  // A redundant inhomogeneous row must not confuse the test.
  Polytope redundant(1, {cond({Int(1)}, 0), cond({Int(1)}, 1, true)});
  CHECK(redundant.is_cone());
}

TEST_CASE("products, preimages, fiber products") {
  Polytope quad = product(halfline(), halfline());
  CHECK(quad.ambient_dim() == 2);
  CHECK(quad.contains({Rat(1), Rat(2)}));
  CHECK(!quad.contains({Rat(-1), Rat(2)}));

  // Preimage of [0, inf) under x -> x - 1 is [1, inf).
  IntAffineMap shift;
  shift.a = IntMat::identity(1);
  shift.b = {Rat(-1)};
  auto pre = preimage(shift, halfline());
  REQUIRE(pre.has_value());
  CHECK(same_set(*pre, Polytope(1, {cond({Int(1)}, -1)})));

  // Fiber product of identity and the sum map realizes the node polytope
  // {(x, t1, t2) : t1 + t2 = x, all >= 0}.
  IntAffineMap ident = identity_map(1);
  IntAffineMap sum;
  sum.a = IntMat(1, 2);
  sum.a.at(0, 0) = 1;
  sum.a.at(0, 1) = 1;
  sum.b = {Rat(0)};
  auto fp = fiber_product(halfline(), ident, quad, sum);
  REQUIRE(fp.has_value());
  CHECK(fp->ambient_dim() == 3);
  CHECK(fp->contains({Rat(3), Rat(1), Rat(2)}));
  CHECK(!fp->contains({Rat(3), Rat(1), Rat(1)}));
  CHECK(fp->dim() == 2);

  // Projecting away t2 recovers {0 <= t1 <= x}.
  IntAffineMap proj12;
  proj12.a = IntMat(2, 3);
  proj12.a.at(0, 0) = 1;
  proj12.a.at(1, 1) = 1;
  proj12.b = {Rat(0), Rat(0)};
  CHECK(same_set(affine_image(proj12, *fp), node_model_set()));
}

TEST_CASE("fiber product is symmetric and associative up to permutation") {
  std::mt19937_64 rng(60103);
  IntAffineMap ident = identity_map(1);
  for (int trial = 0; trial < 10; ++trial) {
    Polytope p = gen::rand_polytope(rng, 1, 2, 4);
    Polytope q = gen::rand_polytope(rng, 1, 2, 4);
    auto pq = fiber_product(p, ident, q, ident);
    auto qp = fiber_product(q, ident, p, ident);
    REQUIRE(pq.has_value() == qp.has_value());
    if (!pq) continue;
    // Swap coordinates of qp and compare.
    IntAffineMap swap2;
    swap2.a = IntMat(2, 2);
    swap2.a.at(0, 1) = 1;
    swap2.a.at(1, 0) = 1;
    swap2.b = {Rat(0), Rat(0)};
    CHECK(same_set(*pq, affine_image(swap2, *qp)));
  }
}

TEST_CASE("affine images: invertible transport equals graph projection") {
  std::mt19937_64 rng(8671);
  // Shear is unimodular: fast path; compare against composing with its
  // inverse and against sampled membership.
  IntAffineMap shear;
  shear.a = IntMat::from_rows({{Int(1), Int(1)}, {Int(0), Int(1)}});
  shear.b = {Rat(1, 2), Rat(0)};
  IntAffineMap unshear;
  unshear.a = IntMat::from_rows({{Int(1), Int(-1)}, {Int(0), Int(1)}});
  unshear.b = {Rat(-1, 2), Rat(0)};
  for (int trial = 0; trial < 15; ++trial) {
    Polytope p = gen::rand_polytope(rng, 2, 3, 3);
    Polytope img = affine_image(shear, p);
    CHECK(same_set(affine_image(unshear, img), p));
    CHECK(img.contains(map_point(shear, p.witness())));
  }

  // Non-invertible: sum of simplex coordinates is [0, 1].
  IntAffineMap sum;
  sum.a = IntMat(1, 2);
  sum.a.at(0, 0) = 1;
  sum.a.at(0, 1) = 1;
  sum.b = {Rat(0)};
  CHECK(same_set(affine_image(sum, simplex2()), interval01()));
}

TEST_CASE("cone generators and reconstruction") {
  // Wedge between the rays (1,0) and (1,2).
  Polytope wedge(2, {cond({Int(0), Int(1)}, 0), cond({Int(2), Int(-1)}, 0)});
  auto gens = generators_of_cone(wedge);
  CHECK(std::find(gens.begin(), gens.end(), VecI{Int(1), Int(0)}) !=
        gens.end());
  CHECK(std::find(gens.begin(), gens.end(), VecI{Int(1), Int(2)}) !=
        gens.end());
  for (const VecI& g : gens) {
    VecQ x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = Rat(g[i]);
    CHECK(wedge.contains(x));
  }
  CHECK(same_set(cone_from_generators(gens, 2), wedge));

  // Round trip from rays.
  Polytope rebuilt = cone_from_generators({{Int(1), Int(0)}, {Int(1), Int(2)}}, 2);
  CHECK(same_set(rebuilt, wedge));

  // Lineality: the x-axis plus upper half plane.
  Polytope half(2, {cond({Int(0), Int(1)}, 0)});
  auto hgens = generators_of_cone(half);
  CHECK(same_set(cone_from_generators(hgens, 2), half));

  // Zero cone from no rays.
  Polytope zero = cone_from_generators({}, 2);
  CHECK(zero.dim() == 0);
  CHECK(zero.contains({Rat(0), Rat(0)}));
}

TEST_CASE("translate shifts the solution set") {
  Polytope p = interval01();
  Polytope t = translate(p, {Rat(5, 2)});
  CHECK(t.contains({Rat(3)}));
  CHECK(!t.contains({Rat(1)}));
  CHECK(same_set(translate(t, {Rat(-5, 2)}), p));
}

TEST_SUITE_END();
