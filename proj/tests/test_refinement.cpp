#include "doctest.h"

#include "tropex/errors.hpp"
#include "tropex/refinement.hpp"

#include <algorithm>
#include <string>
#include <vector>

using namespace tropex;

namespace {

TropicalComplex plane_complex() {
  TropicalComplex c;
  c.cells = {Polytope::full_space(2)};
  return c;
}

TropicalComplex line_complex() {
  TropicalComplex c;
  c.cells = {Polytope::full_space(1)};
  return c;
}

// The closed quadrant with the given sign pattern.
Polytope signed_quadrant(int sx, int sy) {
  AffCondition x{{Int(sx), Int(0)}, Rat(0), false};
  AffCondition y{{Int(0), Int(sy)}, Rat(0), false};
  return Polytope(2, {x, y});
}

Polytope half_plane(Int sx, Int sy, Rat c = Rat(0)) {
  AffCondition h{{sx, sy}, c, false};
  return Polytope(2, {h});
}

Polytope cone2(const VecI& a, const VecI& b) {
  return cone_from_generators({a, b}, 2);
}

Subdivision quadrant_subdivision() {
  Subdivision s;
  s.target.cells = {Polytope::full_space(2)};
  for (auto [sx, sy] : {std::pair{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}) {
    s.refined.cells.push_back(signed_quadrant(sx, sy));
    s.cell_map.push_back({0, identity_map(2)});
  }
  return s;
}

Subdivision line_split() {
  Subdivision s;
  s.target.cells = {Polytope::full_space(1)};
  s.refined.cells = {Polytope(1, {AffCondition{{Int(-1)}, Rat(0), false}}),
                     Polytope(1, {AffCondition{{Int(1)}, Rat(0), false}})};
  s.cell_map = {{0, identity_map(1)}, {0, identity_map(1)}};
  return s;
}

CurveType three_ends() {
  CurveType t;
  t.vertices = {{0}};
  t.external_edges = {{0, 0, {Int(1), Int(0)}},
                      {0, 0, {Int(0), Int(1)}},
                      {0, 0, {Int(-1), Int(-1)}}};
  return t;
}

bool has_word(const SubdivisionReport& rep, const std::string& word) {
  for (const std::string& d : rep.diagnostics)
    if (d.find(word) != std::string::npos) return true;
  return false;
}

int pieces_of_dim(const TypeRefinement& ref, int d) {
  int n = 0;
  for (const RefinedModuliPiece& p : ref.pieces)
    if (p.interior.dim() == d) ++n;
  return n;
}

int interiors_containing(const TypeRefinement& ref, const VecQ& x) {
  int n = 0;
  for (const RefinedModuliPiece& p : ref.pieces)
    if (p.interior.contains(x)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("refinement") {

TEST_CASE("closed quadrants and identities subdivide the plane") {
  Subdivision q = quadrant_subdivision();
  SubdivisionReport rep = validate_subdivision(q);
  REQUIRE(rep.valid);
  REQUIRE(rep.diagnostics.empty());

  // Lower-dimensional cells may decorate the shared boundaries.
  Subdivision dec = q;
  dec.refined.cells.push_back(cone_from_generators({{Int(1), Int(0)}}, 2));
  dec.refined.cells.push_back(cone_from_generators({}, 2));
  dec.cell_map.push_back({0, identity_map(2)});
  dec.cell_map.push_back({0, identity_map(2)});
  CHECK(validate_subdivision(dec).valid);

  CHECK(validate_subdivision(identity_subdivision(q.target)).valid);
  TropicalComplex fan;
  fan.cells = {signed_quadrant(1, 1), cone_from_generators({{Int(0), Int(1)}}, 2)};
  CHECK(validate_subdivision(identity_subdivision(fan)).valid);
}

TEST_CASE("broken subdivisions are diagnosed") {
  Subdivision s;
  s.target.cells = {Polytope::full_space(2)};

  SUBCASE("overlapping half-planes") {
    s.refined.cells = {half_plane(1, 0), half_plane(-1, 0, 1)};
    s.cell_map = {{0, identity_map(2)}, {0, identity_map(2)}};
    SubdivisionReport rep = validate_subdivision(s);
    CHECK_FALSE(rep.valid);
    CHECK(has_word(rep, "overlap"));
  }

  SUBCASE("a gap between half-planes") {
    s.refined.cells = {half_plane(1, 0, -1), half_plane(-1, 0)};
    s.cell_map = {{0, identity_map(2)}, {0, identity_map(2)}};
    SubdivisionReport rep = validate_subdivision(s);
    CHECK_FALSE(rep.valid);
    CHECK(has_word(rep, "partners"));
  }

  SUBCASE("a single unpaired half-plane") {
    s.refined.cells = {half_plane(1, 0)};
    s.cell_map = {{0, identity_map(2)}};
    SubdivisionReport rep = validate_subdivision(s);
    CHECK_FALSE(rep.valid);
    CHECK(has_word(rep, "partners"));
  }

  SUBCASE("half-open refined cells") {
    AffCondition open_x{{Int(1), Int(0)}, Rat(0), true};
    s.refined.cells = {Polytope(2, {open_x}), half_plane(-1, 0)};
    s.cell_map = {{0, identity_map(2)}, {0, identity_map(2)}};
    SubdivisionReport rep = validate_subdivision(s);
    CHECK_FALSE(rep.valid);
    CHECK(has_word(rep, "closed"));
  }

  SUBCASE("a cell escaping its target") {
    s.target.cells = {signed_quadrant(1, 1)};
    s.refined.cells = {Polytope::full_space(2)};
    s.cell_map = {{0, identity_map(2)}};
    SubdivisionReport rep = validate_subdivision(s);
    CHECK_FALSE(rep.valid);
    CHECK(has_word(rep, "land"));
  }

  SUBCASE("a line crossing the interiors") {
    s.refined.cells = {half_plane(1, 0), half_plane(-1, 0),
                       cone_from_generators({{Int(1), Int(1)}, {Int(-1), Int(-1)}}, 2)};
    s.cell_map = {{0, identity_map(2)}, {0, identity_map(2)},
                  {0, identity_map(2)}};
    SubdivisionReport rep = validate_subdivision(s);
    CHECK_FALSE(rep.valid);
    CHECK(has_word(rep, "overlap"));
  }

  SUBCASE("malformed cell maps throw") {
    s.refined.cells = {half_plane(1, 0)};
    s.cell_map = {};
    CHECK_THROWS_AS(validate_subdivision(s), invalid_input_error);
    s.cell_map = {{3, identity_map(2)}};
    CHECK_THROWS_AS(validate_subdivision(s), invalid_input_error);
    s.cell_map = {{0, identity_map(1)}};
    CHECK_THROWS_AS(validate_subdivision(s), invalid_input_error);
  }
}

TEST_CASE("stellar subdivision splits a quadrant at an interior ray") {
  TropicalComplex fan;
  fan.cells = {signed_quadrant(1, 1)};
  Subdivision s = stellar_subdivide(fan, {Int(1), Int(1)});
  REQUIRE(s.refined.cells.size() == 2);
  Polytope lo = cone2({Int(1), Int(0)}, {Int(1), Int(1)});
  Polytope hi = cone2({Int(1), Int(1)}, {Int(0), Int(1)});
  int lo_hits = 0, hi_hits = 0;
  for (const Polytope& p : s.refined.cells) {
    if (same_set(p, lo)) ++lo_hits;
    if (same_set(p, hi)) ++hi_hits;
  }
  CHECK(lo_hits == 1);
  CHECK(hi_hits == 1);
  CHECK(validate_subdivision(s).valid);

  // A non-primitive ray names the same line, hence the same pieces.
  Subdivision s2 = stellar_subdivide(fan, {Int(3), Int(3)});
  REQUIRE(s2.refined.cells.size() == 2);
  CHECK((same_set(s2.refined.cells[0], lo) || same_set(s2.refined.cells[0], hi)));
}

TEST_CASE("stellar subdivision keeps cones the ray already spans") {
  TropicalComplex fan;
  fan.cells = {signed_quadrant(1, 1)};
  for (VecI ray : {VecI{Int(1), Int(0)}, VecI{Int(3), Int(0)}}) {
    Subdivision s = stellar_subdivide(fan, ray);
    REQUIRE(s.refined.cells.size() == 1);
    CHECK(same_set(s.refined.cells[0], fan.cells[0]));
    CHECK(validate_subdivision(s).valid);
  }

  // A ray both cones already use stays put in each of them.
  TropicalComplex pair;
  pair.cells = {signed_quadrant(1, 1), signed_quadrant(-1, 1)};
  Subdivision shared = stellar_subdivide(pair, {Int(0), Int(1)});
  REQUIRE(shared.refined.cells.size() == 2);
  CHECK(same_set(shared.refined.cells[0], pair.cells[0]));
  CHECK(same_set(shared.refined.cells[1], pair.cells[1]));

  // Only the cone containing the ray is subdivided.
  Subdivision mixed = stellar_subdivide(pair, {Int(1), Int(1)});
  REQUIRE(mixed.refined.cells.size() == 3);
  CHECK(mixed.cell_map[0].target_cell == 0);
  CHECK(mixed.cell_map[1].target_cell == 0);
  CHECK(mixed.cell_map[2].target_cell == 1);
  CHECK(same_set(mixed.refined.cells[2], pair.cells[1]));
  CHECK(validate_subdivision(mixed).valid);
}

TEST_CASE("stellar subdivision splits a full plane along the ray line") {
  TropicalComplex fan = plane_complex();
  Subdivision s = stellar_subdivide(fan, {Int(1), Int(0)});
  REQUIRE(s.refined.cells.size() == 2);
  int pos = 0, neg = 0;
  for (const Polytope& p : s.refined.cells) {
    if (same_set(p, half_plane(1, 0))) ++pos;
    if (same_set(p, half_plane(-1, 0))) ++neg;
  }
  CHECK(pos == 1);
  CHECK(neg == 1);
  CHECK(validate_subdivision(s).valid);

  Subdivision t = stellar_subdivide(fan, {Int(0), Int(-3)});
  REQUIRE(t.refined.cells.size() == 2);
  CHECK((same_set(t.refined.cells[0], half_plane(0, -1)) ||
         same_set(t.refined.cells[1], half_plane(0, -1))));

  // A ray inside the lineality of a cone that is not its own span leaves
  // the cone alone.
  TropicalComplex halves;
  halves.cells = {half_plane(1, 0)};
  Subdivision u = stellar_subdivide(halves, {Int(0), Int(1)});
  REQUIRE(u.refined.cells.size() == 1);
  CHECK(same_set(u.refined.cells[0], halves.cells[0]));
}

TEST_CASE("stellar subdivision rejects bad input") {
  TropicalComplex fan;
  fan.cells = {signed_quadrant(1, 1)};
  CHECK_THROWS_AS(stellar_subdivide(fan, {Int(0), Int(0)}), invalid_input_error);
  CHECK_THROWS_AS(stellar_subdivide(fan, {Int(-1), Int(-1)}),
                  invalid_input_error);

  TropicalComplex interval;
  AffCondition lo{{Int(1)}, Rat(0), false};
  AffCondition hi{{Int(-1)}, Rat(1), false};
  interval.cells = {Polytope(1, {lo, hi})};
  CHECK_THROWS_AS(stellar_subdivide(interval, {Int(1)}), invalid_input_error);

  TropicalComplex open_cone;
  AffCondition strict_x{{Int(1), Int(0)}, Rat(0), true};
  open_cone.cells = {Polytope(2, {strict_x})};
  CHECK_THROWS_AS(stellar_subdivide(open_cone, {Int(1), Int(0)}),
                  invalid_input_error);

  // Width mismatches only rule cells out; with no matching cell the ray
  // lies outside everything.
  TropicalComplex narrow;
  narrow.cells = {Polytope::full_space(1)};
  CHECK_THROWS_AS(stellar_subdivide(narrow, {Int(1), Int(1)}),
                  invalid_input_error);
}

TEST_CASE("composed subdivisions stay subdivisions") {
  Subdivision first = quadrant_subdivision();
  Subdivision second = stellar_subdivide(first.refined, {Int(1), Int(1)});
  REQUIRE(second.refined.cells.size() == 5);
  Subdivision whole = compose(second, first);
  REQUIRE(whole.refined.cells.size() == 5);
  for (const CellImage& ci : whole.cell_map) CHECK(ci.target_cell == 0);
  CHECK(same_set(whole.target.cells[0], Polytope::full_space(2)));
  CHECK(validate_subdivision(whole).valid);

  CHECK_THROWS_AS(compose(first, first), invalid_input_error);
}

TEST_CASE("a split line refines a one-vertex type into three pieces") {
  CurveType t;
  t.vertices = {{0}};
  t.external_edges = {{0, 0, {Int(1)}}, {0, 0, {Int(-1)}}};
  TypeRefinement ref = induced_type_refinement(t, line_split());

  REQUIRE(ref.pieces.size() == 3);
  CHECK(pieces_of_dim(ref, 1) == 2);
  CHECK(pieces_of_dim(ref, 0) == 1);
  REQUIRE(ref.strata.cells.size() == 3);
  CHECK(ref.stratum_target == std::vector<int>(3, 0));
  CHECK(is_basic_space(ref.strata));
  validate(ref.strata);

  // The vertex position is the whole moduli coordinate, so the pieces
  // partition the line point by point.
  CHECK(interiors_containing(ref, {Rat(-5)}) == 1);
  CHECK(interiors_containing(ref, {Rat(0)}) == 1);
  CHECK(interiors_containing(ref, {Rat(7)}) == 1);

  SubdivisionReport rep = validate_subdivision(ref.moduli);
  REQUIRE(rep.valid);
  REQUIRE(ref.moduli.target.cells.size() == 1);
  CHECK(same_set(ref.moduli.target.cells[0], Polytope::full_space(1)));
}

TEST_CASE("quadrants refine the three-end plane type into nine pieces") {
  TypeRefinement ref =
      induced_type_refinement(three_ends(), quadrant_subdivision());

  REQUIRE(ref.pieces.size() == 9);
  CHECK(pieces_of_dim(ref, 2) == 4);
  CHECK(pieces_of_dim(ref, 1) == 4);
  CHECK(pieces_of_dim(ref, 0) == 1);
  CHECK(ref.strata.cells.size() == 9);

  // Point-by-point partition of the moduli plane.
  CHECK(interiors_containing(ref, {Rat(3), Rat(2)}) == 1);
  CHECK(interiors_containing(ref, {Rat(0), Rat(5)}) == 1);
  CHECK(interiors_containing(ref, {Rat(0), Rat(0)}) == 1);
  CHECK(interiors_containing(ref, {Rat(-1), Rat(4)}) == 1);
  CHECK(interiors_containing(ref, {Rat(-2), Rat(-2)}) == 1);

  SubdivisionReport rep = validate_subdivision(ref.moduli);
  REQUIRE(rep.valid);
  REQUIRE(rep.diagnostics.empty());
}

TEST_CASE("the trivial subdivision leaves the moduli unchanged") {
  TropicalComplex plane = plane_complex();
  TypeRefinement ref =
      induced_type_refinement(three_ends(), identity_subdivision(plane));
  REQUIRE(ref.pieces.size() == 1);
  ModuliPolytope m = moduli_polytope(three_ends(), plane);
  REQUIRE(m.polytope.has_value());
  CHECK(same_set(ref.pieces[0].interior, *m.polytope));
  CHECK(ref.strata.cells[ref.pieces[0].vertex_stratum[0]].dim() == 2);
}

TEST_CASE("an internal edge is rerouted across the subdivision") {
  // Two vertices joined by a rightward edge, with an end on either side.
  CurveType t;
  t.vertices = {{0}, {0}};
  t.internal_edges = {{0, 1, 0, {Int(1)}}};
  t.external_edges = {{0, 0, {Int(-1)}}, {1, 0, {Int(1)}}};
  TypeRefinement ref = induced_type_refinement(t, line_split());

  // Pieces by position sign pattern of (tail, head): --, -0, -+, 0+, ++.
  REQUIRE(ref.pieces.size() == 5);
  CHECK(pieces_of_dim(ref, 2) == 3);
  CHECK(pieces_of_dim(ref, 1) == 2);

  // The crossing piece threads both half-lines through the origin: its
  // chain has two carriers, an inserted switch point pinned to 0, and two
  // segment lengths that sum to the original one.
  const RefinedModuliPiece* crossing = nullptr;
  for (const RefinedModuliPiece& p : ref.pieces)
    if (p.edge_chain[0].size() == 5) {
      REQUIRE(crossing == nullptr);
      crossing = &p;
    }
  REQUIRE(crossing != nullptr);
  VecQ sample = {Rat(-2), Rat(3), Rat(0), Rat(2), Rat(3)};
  CHECK(crossing->interior.contains(sample));
  VecQ down = map_point(crossing->to_original, sample);
  REQUIRE(down.size() == 3);
  CHECK(down[0] == Rat(-2));
  CHECK(down[1] == Rat(3));
  CHECK(down[2] == Rat(5));
  ModuliPolytope m = moduli_polytope(t, line_complex());
  REQUIRE(m.polytope.has_value());
  CHECK(m.polytope->contains(down));

  SubdivisionReport rep = validate_subdivision(ref.moduli);
  REQUIRE(rep.valid);
  REQUIRE(rep.diagnostics.empty());
}

TEST_CASE("type refinement guards its inputs") {
  CHECK_THROWS_AS(
      induced_type_refinement(three_ends(), quadrant_subdivision(), 2),
      resource_limit_error);

  Subdivision broken;
  broken.target.cells = {Polytope::full_space(2)};
  broken.refined.cells = {half_plane(1, 0), half_plane(-1, 0, 1)};
  broken.cell_map = {{0, identity_map(2)}, {0, identity_map(2)}};
  CHECK_THROWS_AS(induced_type_refinement(three_ends(), broken),
                  invalid_input_error);

  CurveType loop;
  loop.vertices = {{0}};
  loop.internal_edges = {{0, 0, 0, {Int(1), Int(0)}}};
  CHECK_THROWS_AS(
      induced_type_refinement(loop,
                              identity_subdivision(plane_complex())),
      invalid_input_error);

  // A valid type whose moduli happen to be empty: a vertex pinned to the
  // corner of a quadrant with an end along the boundary ray.
  TropicalComplex pinned;
  pinned.cells = {Polytope(0, {}), signed_quadrant(1, 1)};
  IntAffineMap corner;
  corner.a = IntMat(2, 0);
  corner.b = {Rat(0), Rat(0)};
  pinned.attachments = {{0, 0, 1, corner}};
  CurveType grounded;
  grounded.vertices = {{0}};
  grounded.external_edges = {{0, 1, {Int(1), Int(0)}}};
  CHECK_THROWS_AS(
      induced_type_refinement(grounded, identity_subdivision(pinned)),
      invalid_input_error);
}

}  // TEST_SUITE
