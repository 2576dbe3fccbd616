#pragma once

#include "tropex/monoid.hpp"
#include "tropex/polytope.hpp"
#include "tropex/rational.hpp"

#include <complex>
#include <string>
#include <vector>

namespace tropex {

enum class AtlasMode { log, exploded };

// Identification of a face of one chart with a face of another by an
// integral affine isomorphism. Faces are indexed into faces_of_closure of
// the respective chart.
struct Gluing {
  int chart_a = 0;
  int face_a = 0;
  int chart_b = 0;
  int face_b = 0;
  IntAffineMap iso;  // sends face_a onto face_b
};

// Charts glued along faces. The identifications must be honest face
// isomorphisms respecting lattices, and every composite identification
// around a cycle must be the identity; validate() enforces both.
struct Atlas {
  std::vector<Polytope> charts;
  std::vector<Gluing> gluings;
  AtlasMode mode = AtlasMode::exploded;
};

void validate(const Atlas& a);

// Identifies face `face` of cell `cell` with a face of cell `target` (the
// image of iso, which must be one of the target's faces).
struct Attachment {
  int cell = 0;
  int face = 0;
  int target = 0;
  IntAffineMap iso;
};

// Polyhedral cells quotiented along face identifications.
struct TropicalComplex {
  std::vector<Polytope> cells;
  std::vector<Attachment> attachments;
};

void validate(const TropicalComplex& c);

// explodable: every chart is integrally affinely isomorphic to a cone inside
// a nonnegative orthant (equivalently: a cone containing no line).
// exploded_representable: no chart contains a line.
struct Representability {
  bool explodable = false;
  bool exploded_representable = false;
};

Representability is_log_representable(const Atlas& a);

// One cell per chart; gluings become attachments. Validates the atlas, so
// inconsistent identification cycles are reported as errors.
TropicalComplex tropical_part(const Atlas& a);

// Cell-wise closure; attachments carry over unchanged (face indexing is
// shared with the closure). Idempotent.
TropicalComplex trop_closure(const TropicalComplex& c);

// True when every cell is identified with a face of any given cell in at
// most one way under composites of the attachments, their inverses, and
// their restrictions to subfaces.
bool is_basic_space(const TropicalComplex& c);

// All attachment-induced identifications of the whole cell `from` with faces
// of the cell `to`: composites of attachment maps and their inverses, plus
// the identity when from == to. Basic complexes yield at most one map.
std::vector<IntAffineMap> cell_identifications(const TropicalComplex& c,
                                               int from, int to);

// True when `iso` maps `src` bijectively onto `dst`, carrying the integer
// direction lattice of `src` onto that of `dst`.
bool integral_iso_onto(const Polytope& src, const Polytope& dst,
                       const IntAffineMap& iso);

// quasi_generated: the candidate maps are injective on each cell.
// almost_generated: additionally every image lies in the nonnegative
// orthant of the common target.
struct ImmersionReport {
  bool quasi_generated = false;
  bool almost_generated = false;
};

// candidate: one map per cell into a common R^N, agreeing along
// attachments (disagreement is an error).
ImmersionReport verify_immersion(const TropicalComplex& c,
                                 const std::vector<IntAffineMap>& candidate);

// The cell complex of a normal-crossing configuration: one vertex, one ray
// per component, and one orthant of dimension |S| per listed intersection
// S, attached along coordinate faces. The list must contain every subset of
// size >= 2 of each of its members.
TropicalComplex dual_intersection_complex(
    int components, const std::vector<std::vector<int>>& intersections);

// A point of a chart: rational tropical coordinate plus nonzero angular
// coordinates, one per ambient dimension. Angular parts are floating-point;
// nothing downstream does exact arithmetic on them.
struct ExplodedPoint {
  int chart = 0;
  VecQ trop;
  std::vector<std::complex<double>> angular;
};

// Saturated basis of the lattice of integer vectors tangent to the relative
// interior of the face holding the point's tropical coordinate.
std::vector<VecI> integral_vectors(const Atlas& a, const ExplodedPoint& p);

// Chart-wise map between atlases: source chart i lands in target chart
// chart_map[i] via maps[i]. Must commute with the gluings on faces.
struct AtlasMorphism {
  Atlas source;
  Atlas target;
  std::vector<int> chart_map;
  std::vector<IntAffineMap> maps;
};

void validate(const AtlasMorphism& f);

// Per-chart family criterion: onto the target chart, faces onto faces, dual
// function monoid map injective, face lattice maps with torsion-free
// cokernel, and closed nonempty generic fibers. `torsion` collects the
// nontrivial elementary divisors encountered, `failures` one line per
// violated condition.
struct FamilyReport {
  bool family = false;
  std::vector<Int> torsion;
  std::vector<std::string> failures;
};

FamilyReport family_report(const AtlasMorphism& f);
bool is_family(const AtlasMorphism& f);

// The complex of per-chart preimages of the point t of the given target
// chart. Charts mapping elsewhere contribute nothing; an everywhere-empty
// preimage yields the empty complex. Attachments are inherited from source
// gluings between surviving charts when they restrict cleanly to the
// fibers.
TropicalComplex fiber(const AtlasMorphism& f, int target_chart, const VecQ& t);

// The local model of a degenerating edge over p: the region
// { (x, s) : x in p, 0 <= s <= rho(x) } projecting back to p. rho must be
// nonnegative on p.
AtlasMorphism node_model(const Polytope& p, const IntAffineFunc& rho);

// The local model of a marked point over p: p x [0, infinity) projecting
// back to p.
AtlasMorphism marked_point_model(const Polytope& p);

}  // namespace tropex
