#pragma once

#include "tropex/atlas.hpp"
#include "tropex/polytope.hpp"
#include "tropex/tropical_curves.hpp"

#include <string>
#include <vector>

namespace tropex {

// A subdivision presents each cell of a target complex as an
// interior-disjoint union of closed cells of a refined complex, each carried
// into its target cell by an integral affine inclusion.
struct CellImage {
  int target_cell = 0;
  IntAffineMap inclusion;
};

struct Subdivision {
  TropicalComplex target;
  TropicalComplex refined;
  std::vector<CellImage> cell_map;  // one entry per refined cell
};

struct SubdivisionReport {
  bool valid = false;
  std::vector<std::string> diagnostics;
};

// Checks the subdivision conditions cell by cell: inclusions are injective
// on directions and land inside the named target cell, refined cells are
// closed, relative interiors of cells over one target are pairwise
// disjoint, and the full-dimensional cells cover: each of their facets is
// either shared with exactly one other full-dimensional cell or lies in the
// boundary of the target. Lower-dimensional refined cells may decorate the
// shared boundaries but never meet another cell's interior. Failures are
// reported with the cells involved and a witness point where one exists.
SubdivisionReport validate_subdivision(const Subdivision& s);

// The subdivision of a complex by itself.
Subdivision identity_subdivision(const TropicalComplex& c);

// Star subdivision of a complex of cones at an integer ray: every cone
// containing the ray is replaced by the cones spanned by the ray together
// with the facets not containing it; a cone that is all of its own span is
// split into the two half-spaces on either side of a lattice complement of
// the ray. Cells whose ambient dimension differs from the ray's width, or
// which do not contain the ray, are kept unchanged. Throws when some cell
// is not a cone at the origin or when no cell contains the ray.
Subdivision stellar_subdivide(const TropicalComplex& fan, const VecI& ray);

// The composite subdivision: `first` refines a complex, `second` refines
// first.refined (their cells must agree set by set, in order).
Subdivision compose(const Subdivision& second, const Subdivision& first);

// One piece of a refined moduli space: strata assignments for the vertices,
// a crossing chain per internal edge (stratum, cell, stratum, ..., cell,
// stratum, alternating, describing which refined cells the edge passes
// through and on which strata it switches), the open piece itself in the
// extended coordinates, and the projection back to the original moduli
// coordinates (inserted vertex blocks are dropped and the chain lengths of
// an edge sum to its original length).
struct RefinedModuliPiece {
  std::vector<int> vertex_stratum;
  std::vector<std::vector<int>> edge_chain;
  Polytope interior;
  IntAffineMap to_original;
};

// The refinement that a subdivision of the surrounding complex induces on
// the moduli of one curve type: `strata` collects the faces of all refined
// cells (grouped by target cell, attached to one another along face
// relations), one piece is produced per feasible assignment of vertex
// strata and edge chains, and `moduli` presents the closed pieces as a
// subdivision of the closure of the original moduli polytope.
struct TypeRefinement {
  TropicalComplex strata;
  std::vector<int> stratum_target;
  std::vector<RefinedModuliPiece> pieces;
  Subdivision moduli;
};

// Enumerates the pieces. Candidates are assignments of a stratum to every
// vertex and a chain to every internal edge; enumeration stops with an
// error once more than `max_types` candidates have been generated. Throws
// when the type is invalid in s.target or has no realizations at all.
TypeRefinement induced_type_refinement(const CurveType& type,
                                       const Subdivision& s,
                                       long max_types = 10000);

}  // namespace tropex
