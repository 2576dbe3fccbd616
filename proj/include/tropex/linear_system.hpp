#pragma once

#include "tropex/rational.hpp"

#include <optional>
#include <vector>

namespace tropex {

// Relation of an affine expression against zero.
enum class Rel { Ge, Gt, Eq };

// coeffs . x + constant  REL  0
struct LinConstraint {
  VecQ coeffs;
  Rat constant = 0;
  Rel rel = Rel::Ge;
};

// A finite system of affine constraints with mixed strictness. This is the
// exact decision kernel: everything else (polytope emptiness, inclusion,
// face enumeration, projections) reduces to it.
struct LinearSystem {
  int num_vars = 0;
  std::vector<LinConstraint> constraints;
};

// Exact feasibility by variable elimination. Equalities are eliminated by
// substitution; inequalities by Fourier-Motzkin, where the consequence of a
// strict constraint is strict. Returns a rational witness when the system is
// satisfiable. Deterministic.
std::optional<VecQ> feasible(const LinearSystem& sys);

// Same decision, without reconstructing a witness (noticeably cheaper when
// only emptiness matters).
bool is_feasible(const LinearSystem& sys);

// Project the solution set onto the first `keep` variables (exact shadow,
// strictness preserved). The result may contain an unsatisfiable constant
// constraint when the input set is empty.
LinearSystem project(const LinearSystem& sys, int keep);

// Scale so coefficients and constant are coprime integers (stored as
// rationals with denominator one). Canonical form used for deduplication.
LinConstraint normalize_constraint(const LinConstraint& c);

}  // namespace tropex
