#include "doctest.h"

#include "tropex/atlas.hpp"
#include "tropex/errors.hpp"
#include "tropex/linalg.hpp"

#include "support/generators.hpp"

#include <random>

using namespace tropex;

namespace {

Polytope ray1() {
  AffCondition c;
  c.slope = {Int(1)};
  return Polytope(1, {c});
}

Polytope quadrant() {
  AffCondition x, y;
  x.slope = {Int(1), Int(0)};
  y.slope = {Int(0), Int(1)};
  return Polytope(2, {x, y});
}

Polytope unit_interval() {
  AffCondition lo, hi;
  lo.slope = {Int(1)};
  hi.slope = {Int(-1)};
  hi.constant = 1;
  return Polytope(1, {lo, hi});
}

IntAffineMap shift1(const Rat& c) {
  IntAffineMap m = identity_map(1);
  m.b = {c};
  return m;
}

IntAffineMap point_into(int n, const VecQ& b) {
  IntAffineMap m;
  m.a = IntMat(n, 0);
  m.b = b;
  return m;
}

IntAffineMap linear(std::vector<VecI> rows, int cols) {
  IntAffineMap m;
  m.a = IntMat::from_rows(rows);
  m.a.cols = cols;  // keep the width for maps out of a point
  m.b.assign(rows.size(), Rat(0));
  return m;
}

// Index of the face of `p` equal to `q`, found by set comparison.
int face_index_of(const Polytope& p, const Polytope& q) {
  auto faces = faces_of_closure(p);
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (same_set(faces[i].poly, q)) return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_SUITE("atlas") {

TEST_CASE("single chart round trip and closure") {
  Atlas a;
  AffCondition open_cut;
  open_cut.slope = {Int(1)};
  open_cut.strict = true;
  a.charts = {Polytope(1, {open_cut})};  // 0 < x
  TropicalComplex c = tropical_part(a);
  CHECK(c.cells.size() == 1);
  CHECK(c.attachments.empty());

  TropicalComplex cl = trop_closure(c);
  CHECK(same_set(cl.cells[0], c.cells[0].closure()));
  CHECK(cl.cells[0].contains({Rat(0)}));
  CHECK_FALSE(c.cells[0].contains({Rat(0)}));

  TropicalComplex cl2 = trop_closure(cl);
  CHECK(same_set(cl2.cells[0], cl.cells[0]));
}

TEST_CASE("two rays glued at the vertex") {
  Atlas a;
  a.charts = {ray1(), ray1()};
  int v = face_index_of(ray1(), Polytope::with_witness(
                                    1, {{{Int(1)}, Rat(0), false},
                                        {{Int(-1)}, Rat(0), false}},
                                    {Rat(0)}));
  REQUIRE(v == 1);  // faces are ordered top first
  a.gluings = {{0, v, 1, v, identity_map(1)}};
  CHECK_NOTHROW(validate(a));

  TropicalComplex c = tropical_part(a);
  CHECK(c.cells.size() == 2);
  CHECK(c.attachments.size() == 1);
  CHECK(is_basic_space(c));
}

TEST_CASE("interval attached to one vertex at both ends is not basic") {
  TropicalComplex c;
  c.cells = {unit_interval(), Polytope(0, {})};
  c.attachments = {{1, 0, 0, point_into(1, {Rat(0)})},
                   {1, 0, 0, point_into(1, {Rat(1)})}};
  CHECK_NOTHROW(validate(c));
  CHECK_FALSE(is_basic_space(c));

  TropicalComplex one;
  one.cells = {unit_interval()};
  CHECK(is_basic_space(one));
}

TEST_CASE("conflicting gluings around a cycle are rejected") {
  Atlas a;
  a.charts = {Polytope::full_space(1), Polytope::full_space(1)};
  a.gluings = {{0, 0, 1, 0, identity_map(1)},
               {0, 0, 1, 0, identity_map(1)}};
  CHECK_NOTHROW(validate(a));  // repeating the same gluing is consistent

  a.gluings[1].iso = shift1(Rat(1));
  CHECK_THROWS_AS(validate(a), invalid_input_error);
}

TEST_CASE("gluing must hit the stated face with the right lattice map") {
  Atlas a;
  a.charts = {ray1(), ray1()};
  a.gluings = {{0, 1, 1, 0, identity_map(1)}};  // vertex against whole ray
  CHECK_THROWS_AS(validate(a), invalid_input_error);

  IntAffineMap dbl;
  dbl.a = IntMat(1, 1);
  dbl.a.at(0, 0) = 2;
  dbl.b = {Rat(0)};
  a.gluings = {{0, 0, 1, 0, dbl}};  // doubling is a bijection of sets only
  CHECK_THROWS_AS(validate(a), invalid_input_error);
}

TEST_CASE("representability of charts") {
  Atlas line;
  line.charts = {Polytope::full_space(1)};
  Representability r = is_log_representable(line);
  CHECK_FALSE(r.explodable);
  CHECK_FALSE(r.exploded_representable);

  Atlas ray;
  ray.charts = {ray1()};
  r = is_log_representable(ray);
  CHECK(r.explodable);
  CHECK(r.exploded_representable);

  Atlas cone;
  cone.charts = {cone_from_generators({{Int(1), Int(0)}, {Int(1), Int(2)}}, 2)};
  r = is_log_representable(cone);
  CHECK(r.explodable);
  CHECK(r.exploded_representable);
}

TEST_CASE("immersion candidates on a two ray complex") {
  Atlas a;
  a.charts = {ray1(), ray1()};
  a.gluings = {{0, 1, 1, 1, identity_map(1)}};
  TropicalComplex c = tropical_part(a);

  std::vector<IntAffineMap> both_id = {identity_map(1), identity_map(1)};
  ImmersionReport rep = verify_immersion(c, both_id);
  CHECK(rep.quasi_generated);
  CHECK(rep.almost_generated);

  IntAffineMap neg;
  neg.a = IntMat(1, 1);
  neg.a.at(0, 0) = -1;
  neg.b = {Rat(0)};
  rep = verify_immersion(c, {identity_map(1), neg});
  CHECK(rep.quasi_generated);
  CHECK_FALSE(rep.almost_generated);

  IntAffineMap flat;
  flat.a = IntMat(1, 1);
  flat.b = {Rat(0)};
  rep = verify_immersion(c, {flat, flat});
  CHECK_FALSE(rep.quasi_generated);
  CHECK_FALSE(rep.almost_generated);

  CHECK_THROWS_AS(verify_immersion(c, {identity_map(1), shift1(Rat(1))}),
                  invalid_input_error);
  CHECK_THROWS_AS(verify_immersion(c, {identity_map(1)}),
                  invalid_input_error);
}

TEST_CASE("dual intersection complexes") {
  TropicalComplex none = dual_intersection_complex(0, {});
  CHECK(none.cells.size() == 1);
  CHECK(none.attachments.empty());

  TropicalComplex one = dual_intersection_complex(1, {});
  CHECK(one.cells.size() == 2);
  CHECK(one.attachments.size() == 1);
  CHECK_NOTHROW(validate(one));

  TropicalComplex two = dual_intersection_complex(2, {{0, 1}});
  CHECK(two.cells.size() == 4);
  CHECK(two.attachments.size() == 4);
  CHECK(is_basic_space(two));

  CHECK_THROWS_AS(dual_intersection_complex(3, {{0, 1, 2}}),
                  invalid_input_error);
  CHECK_THROWS_AS(dual_intersection_complex(2, {{0}}), invalid_input_error);
  CHECK_THROWS_AS(dual_intersection_complex(1, {{0, 1}}),
                  invalid_input_error);

  TropicalComplex triple =
      dual_intersection_complex(3, {{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}});
  CHECK(triple.cells.size() == 8);
  CHECK(is_basic_space(triple));

  // The natural coordinates immerse the two component picture into the
  // nonnegative quadrant.
  std::vector<IntAffineMap> coords = {
      point_into(2, {Rat(0), Rat(0)}),
      linear({{Int(1)}, {Int(0)}}, 1),
      linear({{Int(0)}, {Int(1)}}, 1),
      identity_map(2)};
  ImmersionReport rep = verify_immersion(two, coords);
  CHECK(rep.quasi_generated);
  CHECK(rep.almost_generated);
}

TEST_CASE("integral vectors at an exploded point") {
  Atlas a;
  a.charts = {quadrant()};
  std::complex<double> u(0.6, 0.8);

  ExplodedPoint interior{0, {Rat(1), Rat(1)}, {u, u}};
  CHECK(integral_vectors(a, interior).size() == 2);

  ExplodedPoint on_axis{0, {Rat(1), Rat(0)}, {u, u}};
  auto vs = integral_vectors(a, on_axis);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0] == VecI{Int(1), Int(0)});

  ExplodedPoint origin{0, {Rat(0), Rat(0)}, {u, u}};
  CHECK(integral_vectors(a, origin).empty());

  ExplodedPoint outside{0, {Rat(-1), Rat(0)}, {u, u}};
  CHECK_THROWS_AS(integral_vectors(a, outside), invalid_input_error);
  ExplodedPoint dead{0, {Rat(1), Rat(1)}, {u, std::complex<double>(0, 0)}};
  CHECK_THROWS_AS(integral_vectors(a, dead), invalid_input_error);
  ExplodedPoint short_angular{0, {Rat(1), Rat(1)}, {u}};
  CHECK_THROWS_AS(integral_vectors(a, short_angular), invalid_input_error);
}

TEST_CASE("node and marked point models") {
  IntAffineFunc rho{{Int(1)}, Rat(0)};  // edge length x on the ray
  AtlasMorphism node = node_model(ray1(), rho);
  CHECK_NOTHROW(validate(node));

  TropicalComplex over3 = fiber(node, 0, {Rat(3)});
  REQUIRE(over3.cells.size() == 1);
  AffCondition s_lo{{Int(0), Int(1)}, Rat(0), false};
  AffCondition s_hi{{Int(0), Int(-1)}, Rat(3), false};
  AffCondition x_lo{{Int(1), Int(0)}, Rat(-3), false};
  AffCondition x_hi{{Int(-1), Int(0)}, Rat(3), false};
  Polytope segment =
      Polytope(2, {x_lo, x_hi, s_lo, s_hi});  // {3} x [0, 3]
  CHECK(same_set(over3.cells[0], segment));

  TropicalComplex over0 = fiber(node, 0, {Rat(0)});
  REQUIRE(over0.cells.size() == 1);
  CHECK(over0.cells[0].dim() == 0);
  CHECK(over0.cells[0].contains({Rat(0), Rat(0)}));

  AtlasMorphism marked = marked_point_model(ray1());
  TropicalComplex over2 = fiber(marked, 0, {Rat(2)});
  REQUIRE(over2.cells.size() == 1);
  CHECK(over2.cells[0].dim() == 1);
  CHECK(over2.cells[0].contains({Rat(2), Rat(7)}));
  CHECK_FALSE(over2.cells[0].contains({Rat(2), Rat(-1)}));

  IntAffineFunc bad{{Int(-1)}, Rat(0)};
  CHECK_THROWS_AS(node_model(ray1(), bad), invalid_input_error);
  CHECK_THROWS_AS(fiber(node, 0, {Rat(-1)}), invalid_input_error);
}

TEST_CASE("family criteria for basic morphisms") {
  AtlasMorphism sum;
  sum.source = {{quadrant()}, {}, AtlasMode::exploded};
  sum.target = {{ray1()}, {}, AtlasMode::exploded};
  sum.chart_map = {0};
  sum.maps = {linear({{Int(1), Int(1)}}, 2)};
  FamilyReport rep = family_report(sum);
  CHECK(rep.family);
  CHECK(rep.torsion.empty());

  AtlasMorphism dbl;
  dbl.source = {{ray1()}, {}, AtlasMode::exploded};
  dbl.target = {{ray1()}, {}, AtlasMode::exploded};
  dbl.chart_map = {0};
  dbl.maps = {linear({{Int(2)}}, 1)};
  rep = family_report(dbl);
  CHECK_FALSE(rep.family);
  REQUIRE_FALSE(rep.torsion.empty());
  CHECK(rep.torsion[0] == 2);

  AtlasMorphism id;
  id.source = {{ray1()}, {}, AtlasMode::exploded};
  id.target = {{ray1()}, {}, AtlasMode::exploded};
  id.chart_map = {0};
  id.maps = {identity_map(1)};
  CHECK(is_family(id));
}

TEST_CASE("families have fibers of the expected dimension") {
  IntAffineFunc rho{{Int(1)}, Rat(0)};
  AtlasMorphism models[] = {node_model(ray1(), rho),
                            marked_point_model(ray1())};
  for (const AtlasMorphism& f : models) {
    CHECK(is_family(f));
    VecQ t = f.target.charts[0].relint_witness();
    TropicalComplex fib = fiber(f, 0, t);
    REQUIRE_FALSE(fib.cells.empty());
    int expect =
        f.source.charts[0].dim() - f.target.charts[0].dim();
    CHECK(fib.cells[0].dim() == expect);
  }

  AtlasMorphism sum;
  sum.source = {{quadrant()}, {}, AtlasMode::exploded};
  sum.target = {{ray1()}, {}, AtlasMode::exploded};
  sum.chart_map = {0};
  sum.maps = {linear({{Int(1), Int(1)}}, 2)};
  TropicalComplex fib = fiber(sum, 0, {Rat(5)});
  REQUIRE(fib.cells.size() == 1);
  CHECK(fib.cells[0].dim() == 1);
}

TEST_CASE("closure of the tropical part agrees cell by cell") {
  std::mt19937_64 rng(416001);
  for (int trial = 0; trial < 20; ++trial) {
    Atlas a;
    int charts = static_cast<int>(gen::rand_int(rng, 1, 3));
    for (int i = 0; i < charts; ++i) {
      int ambient = static_cast<int>(gen::rand_int(rng, 1, 3));
      a.charts.push_back(gen::rand_polytope(rng, ambient, 4, 3));
    }
    // Add one always-consistent gluing: a duplicated chart identified with
    // the original along the whole chart.
    int dup = static_cast<int>(gen::rand_int(rng, 0, charts - 1));
    a.charts.push_back(a.charts[dup]);
    a.gluings = {{dup, 0, charts, 0, identity_map(a.charts[dup].ambient_dim())}};

    TropicalComplex c = tropical_part(a);
    TropicalComplex cl = trop_closure(c);
    REQUIRE(cl.cells.size() == a.charts.size());
    for (std::size_t i = 0; i < a.charts.size(); ++i)
      CHECK(same_set(cl.cells[i], a.charts[i].closure()));
    TropicalComplex cl2 = trop_closure(cl);
    for (std::size_t i = 0; i < cl.cells.size(); ++i)
      CHECK(same_set(cl2.cells[i], cl.cells[i]));
    CHECK(cl.attachments.size() == c.attachments.size());
  }
}

}  // TEST_SUITE
