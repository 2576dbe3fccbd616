#pragma once

#include "tropex/atlas.hpp"
#include "tropex/polytope.hpp"
#include "tropex/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tropex {

// A combinatorial curve drawn on a tropical complex: vertices pinned to
// cells, edges pinned to cells together with a constant integer direction.
// Internal edges are oriented from `tail` to `head`; external edges are rays
// leaving a single vertex.
struct CurveVertex {
  int cell = 0;
};

struct InternalEdge {
  int tail = 0;
  int head = 0;
  int cell = 0;
  VecI u;  // direction, in the ambient coordinates of `cell`
};

struct ExternalEdge {
  int vertex = 0;
  int cell = 0;
  VecI u;
};

struct CurveType {
  std::vector<CurveVertex> vertices;
  std::vector<InternalEdge> internal_edges;
  std::vector<ExternalEdge> external_edges;
};

struct TypeReport {
  bool valid = false;
  std::vector<std::string> diagnostics;
};

// Checks a curve type against its complex: the complex must be basic, each
// vertex cell must be (identified with) a face of every incident edge cell,
// each external edge direction must be a recession direction of its cell,
// directions must be nonzero of the right width, loops are rejected, and the
// graph of vertices and internal edges must be connected. Throws on indices
// that do not resolve; all other rejections come back as diagnostics.
TypeReport validate_type(const CurveType& type, const TropicalComplex& c);

// The space of realizations of a curve type: one coordinate block per vertex
// position, then one coordinate per internal edge length. `polytope` is
// empty when no realization exists.
struct ModuliPolytope {
  std::optional<Polytope> polytope;
  std::vector<int> vertex_offset;  // start of each vertex block
  std::vector<int> vertex_width;   // ambient dimension of each vertex cell
  std::vector<int> length_offset;  // coordinate of each internal edge length
  int ambient = 0;
};

// Cuts out the realizations: vertex positions in the relative interiors of
// their cells, lengths positive, head minus tail equal to length times
// direction inside the edge cell, and every open edge segment or ray inside
// the relative interior of its cell. Requires a valid type.
ModuliPolytope moduli_polytope(const CurveType& type, const TropicalComplex& c);

VecQ vertex_position(const ModuliPolytope& m, const VecQ& point, int v);
Rat edge_length(const ModuliPolytope& m, const VecQ& point, int q);

// A single realized curve: a point of the moduli polytope.
struct TropicalCurve {
  CurveType type;
  VecQ values;
};

// Realization at a moduli point; rejects points outside the moduli polytope
// (in particular any point with a zero length).
TropicalCurve realize(const CurveType& type, const ModuliPolytope& m,
                      const VecQ& point);

// The direction vectors of a realized curve: internal edge directions as
// oriented, then external edge directions.
struct DerivativeData {
  std::vector<VecI> internal;
  std::vector<VecI> external;
};

DerivativeData derivative_data(const TropicalCurve& curve);

// The same type with one internal edge traversed the other way; the
// direction flips sign so that realizations are unchanged.
CurveType reverse_edge(CurveType type, int q);

// The family of all curves of a given type over its moduli polytope: one
// total-space cell per vertex (a copy of the base) and one per edge (the
// base thickened by an edge parameter), attached to the vertex copies at
// parameter zero and at the edge length. `projection` forgets the
// parameter; `evaluation` places each cell into the curve's complex,
// sending (point, t) to the tail position plus t times the edge direction.
struct UniversalFamily {
  TropicalComplex total;
  ModuliPolytope base;
  std::vector<IntAffineMap> projection;  // per cell, into base coordinates
  std::vector<int> evaluation_cell;      // per cell, a cell of the complex
  std::vector<IntAffineMap> evaluation;  // per cell, into that cell's ambient
  std::vector<int> cell_vertex;          // vertex realized by the cell, or -1
  std::vector<int> cell_edge;            // edge realized by the cell, or -1
                                         // (internal first, then external)
};

UniversalFamily universal_family(const CurveType& type,
                                 const TropicalComplex& c);

// A family of curves of a fixed type presented by its classifying data:
// a base polytope, the vertex positions as affine maps off the base, and
// the edge lengths as affine functions on the base.
struct FamilyCandidate {
  Polytope base;
  std::vector<IntAffineMap> vertex_eval;  // per vertex, base -> cell ambient
  std::vector<IntAffineMap> length;      // per internal edge, base -> line
};

// The classifying data of the universal family itself.
FamilyCandidate as_candidate(const UniversalFamily& f);

// Decides whether a family is the universal one: the map assembling vertex
// positions and lengths must send the base onto the moduli polytope
// bijectively, integrally, and carrying the direction lattice onto the
// moduli direction lattice.
bool is_universal(const FamilyCandidate& cand, const CurveType& type,
                  const TropicalComplex& c);

}  // namespace tropex
