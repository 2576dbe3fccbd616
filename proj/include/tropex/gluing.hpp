#pragma once

#include "tropex/atlas.hpp"
#include "tropex/monoid.hpp"
#include "tropex/polytope.hpp"
#include "tropex/tropical_curves.hpp"

#include <optional>
#include <random>
#include <vector>

namespace tropex {

// The moduli of a curve type with one marked point on every internal edge:
// the base moduli coordinates followed by one marked position per internal
// edge, constrained strictly between the edge's endpoints. Forgetting the
// marks projects back onto the base moduli.
struct MarkedModuli {
  ModuliPolytope base;
  Polytope polytope;             // base coordinates, then one mark per edge
  std::vector<int> mark_offset;  // coordinate of each internal edge's mark
  int ambient = 0;
};

// Throws when the type has no realizations.
MarkedModuli marked_moduli(const CurveType& type, const TropicalComplex& c);

// One severed internal edge, seen from the component keeping it: the stub
// points along the original direction when the component's vertex was the
// tail (outgoing) and against it otherwise.
struct CutHalfEdge {
  int vertex = 0;         // component vertex carrying the stub
  int cell = 0;           // cell of the original edge
  VecI u;                 // direction of the original edge, as oriented
  bool outgoing = true;   // true when the component vertex was the tail
  int base_edge = 0;      // internal edge of the base type that was severed
};

// A connected piece of a curve type after severing internal edges,
// anchored at a chosen vertex of the base type.
struct CutType {
  CurveType component;           // the piece as a standalone type
  int root = 0;                  // component index of the anchoring vertex
  std::vector<int> base_vertex;  // component vertex -> base type vertex
  std::vector<CutHalfEdge> cuts;
};

// Severs every internal edge and returns the piece anchored at each vertex
// in order: the vertex itself, its external edges, and one stub per severed
// edge at that vertex, keeping the base orientation.
std::vector<CutType> cut(const CurveType& type);

// The moduli of a cut piece: the component's moduli coordinates followed by
// one positive stub length per cut. Each stub's far endpoint, the component
// vertex displaced by the signed stub length along the severed direction,
// must land in the relative interior of the severed edge's cell; the
// `evaluation` maps read those endpoints off a moduli point. `polytope` is
// empty when the piece has no realizations.
struct CutModuli {
  ModuliPolytope component;
  std::optional<Polytope> polytope;
  std::vector<int> cut_offset;            // coordinate of each stub length
  std::vector<IntAffineMap> evaluation;   // per cut, into the cut cell
  int ambient = 0;
};

CutModuli cut_moduli(const CutType& ct, const TropicalComplex& c);

// Reassembly of a type's marked moduli from its cut pieces: the product of
// the per-vertex cut moduli, intersected with one equation per severed edge
// matching the outgoing evaluation with the incoming one. The dictionary
// identifies the result with the marked moduli by keeping the vertex
// positions, reading each edge length as the sum of its two stub lengths,
// and each mark as the outgoing stub length. `verified` reports whether the
// dictionary is an integral affine bijection onto the marked moduli;
// `transverse` reports whether the matching equations are independent on
// the product's direction space, which makes the dimension drop exactly the
// ambient dimension of the severed cells.
struct GlueResult {
  std::vector<CutType> cut_types;
  std::vector<CutModuli> cut_pieces;
  Polytope fiber_product;   // in the concatenated cut-moduli coordinates
  IntAffineMap dictionary;  // concatenated coordinates -> marked coordinates
  MarkedModuli marked;
  bool transverse = false;
  bool verified = false;
};

// Throws when the type has no realizations or a cut piece has empty moduli.
GlueResult glue(const CurveType& type, const TropicalComplex& c);

// The fan a complex looks like from a point: one cone of outgoing directions
// per cell reached by identifications from the given cell, translated to the
// origin, with the surviving face attachments carried over linearly. The
// point must lie in the relative interior of the given cell, and the complex
// must be basic so the identifications are unambiguous.
TropicalComplex local_fan(const TropicalComplex& c, int cell,
                          const VecQ& point);

// The exact monoid data of a severed node. `cut_monoid` is the length
// monoid of a severed edge, pairs (a, b) of naturals with b = 0 whenever
// a = 0, with every nonzero element vanishing at the distinguished point.
// `side_monoid` is the monoid of one side of the severed node: the same
// pairs with an extra free coordinate, enlarged by saturation, with the
// vanishing locus marked at a general point of the edge. `node_monoid` is
// the chart of the unsevered node, four generators with the middle products
// identified, embedded in rank three. `inclusion` restricts the node chart
// to one side; `generator_inclusion` is the same map written on generator
// exponents. `side_selector` is the lattice element whose nonnegativity
// locus cuts that side out: `verified` reports that the positive
// homomorphisms of the node chart nonnegative on the selector are exactly
// the pullbacks of the side's positive homomorphisms, as an exact equality
// of dual cones, and that the side's members match the saturation of
// cut ⊕ free on the box [0,6]^3.
struct CutEdgeMonoids {
  PiecewiseMonoid cut_monoid;
  PiecewiseMonoid side_monoid;
  PresentedMonoid node_monoid;
  IntMat generator_inclusion;  // exponents (a,b,c,d) -> (a+c, b+c, b+d)
  IntAffineMap inclusion;      // the induced map on the embedding lattices
  VecI side_selector;
  bool verified = false;
};

CutEdgeMonoids cut_edge_monoids();

// A random tree drawn on cell 0 of a plane-like complex: each vertex beyond
// the first joins a random earlier one through an edge with a random
// primitive direction (entries in [-3, 3]), plus one external edge per
// vertex. Deterministic for a fixed engine state.
CurveType random_plane_tree(std::mt19937_64& rng, int vertices);

}  // namespace tropex
