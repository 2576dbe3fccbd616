#pragma once

#include "tropex/polytope.hpp"
#include "tropex/rational.hpp"

#include <utility>
#include <vector>

namespace tropex {

// Integral affine function slope . x + constant on some ambient space.
struct IntAffineFunc {
  VecI slope;
  Rat constant = 0;
};

Rat evaluate(const IntAffineFunc& f, const VecQ& x);

// f >= 0 everywhere on p (equivalently on its closure).
bool af_contains(const Polytope& p, const IntAffineFunc& f);

// f > 0 everywhere on p (note: weaker than "f >= c > 0"; a function like x
// on (0,oo) qualifies).
bool af_strictly_positive(const Polytope& p, const IntAffineFunc& f);

// The monoid of integral linear functionals nonnegative on a cone, reported
// as the Hilbert basis of its pointed part plus the lattice directions that
// carry no sign constraint: `units` collects dual functionals of the cone's
// line directions together with a basis of functionals vanishing on the
// cone's span (both are empty for a full-dimensional pointed cone).
struct DualMonoid {
  std::vector<VecI> hilbert;
  std::vector<VecI> units;
};

// Requires the closure of p to be a cone about the origin and ambient
// dimension at most 4.
DualMonoid dual_hilbert_basis(const Polytope& p);

// Finite G such that every integral affine function nonnegative on p is a
// nonnegative rational constant plus an N-combination of members of G.
// Ambient dimension at most 4.
std::vector<IntAffineFunc> generators_mod_constants(const Polytope& p);

// Stratification records: one per face of p whose relative interior meets p,
// with the complementary dimension.
struct StratumRecord {
  Face face;
  int stratum_dim = 0;
};

// Rejects inputs containing a line (not representable).
std::vector<StratumRecord> strata(const Polytope& p);

// The function monoid attached to a face: its domain polytope and a
// generating set modulo constants.
struct AfMonoid {
  Polytope domain;
  std::vector<IntAffineFunc> generators;
};

// f must be one of faces_of_closure(p) (matched by its active set).
AfMonoid stalk_ghost(const Polytope& p, const Face& f);

// Finitely generated monoid given by generators in a fixed lattice, with
// relations realized by the embedding itself (listed pairs are validated to
// coincide). in_ideal flags the generators whose structure-map image is 0.
struct PresentedMonoid {
  int rank = 0;
  std::vector<VecI> generators;
  std::vector<bool> in_ideal;
  std::vector<std::pair<VecI, VecI>> relations;
};

void validate(const PresentedMonoid& m);

// h >= 0 on every generator and h > 0 on the in_ideal ones (sufficient over
// generators by linearity).
bool is_positive_hom(const PresentedMonoid& m, const VecQ& h);

// Monoid that need not be finitely generated: the lattice points of a union
// of half-open rational cones through the origin, plus 0 itself. in_ideal
// marks pieces whose elements map to 0 under the structure map.
struct MonoidPiece {
  Polytope cone;
  bool in_ideal = true;
};

struct PiecewiseMonoid {
  int rank = 0;
  std::vector<MonoidPiece> pieces;

  bool member(const VecI& g) const;
  bool member_ideal(const VecI& g) const;
};

void validate(const PiecewiseMonoid& m);

// The positive homomorphisms as a half-open cone in the dual: h . g >= 0 for
// every generator g of a piece closure, strict when the generator lies in an
// in_ideal piece. Throws invalid_input_error when empty (the monoid is not
// saturatable by this criterion).
Polytope positive_hom_cone(const PiecewiseMonoid& m);

bool is_positive_hom(const PiecewiseMonoid& m, const VecQ& h);

// Enlarge by every lattice element strictly positive under all positive
// homomorphisms. Idempotent.
PiecewiseMonoid r_saturate(const PiecewiseMonoid& m);

// Stock monoids used by the gluing analysis and tests.
PiecewiseMonoid cut_edge_monoid();             // {(a,b) in N^2 : a=0 => b=0}
PiecewiseMonoid free_monoid(int k);            // N^k, fully in the ideal
PiecewiseMonoid direct_sum(const PiecewiseMonoid& a, const PiecewiseMonoid& b);

}  // namespace tropex
