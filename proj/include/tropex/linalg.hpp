#pragma once

#include "tropex/rational.hpp"

#include <optional>
#include <vector>

namespace tropex {

// Dense integer matrix, row-major.
struct IntMat {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;  // rows * cols entries

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, Int(0)) {}

  Int& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  static IntMat identity(int n);
  static IntMat from_rows(const std::vector<VecI>& rows);
  VecI row(int i) const;
  VecI col(int j) const;
};

bool operator==(const IntMat& x, const IntMat& y);

IntMat transpose(const IntMat& m);
IntMat mul(const IntMat& x, const IntMat& y);
VecI mul(const IntMat& m, const VecI& v);
VecQ mul(const IntMat& m, const VecQ& v);

// Row-vector times matrix.
VecI left_mul(const VecI& row, const IntMat& m);

// Smith normal form: d = u * m * v with u, v unimodular and the diagonal of
// d a divisibility chain d1 | d2 | ... (nonnegative). vinv is the inverse of
// v, tracked alongside so callers get integral coordinates on the column
// side without a separate inversion.
struct SmithForm {
  IntMat u, d, v, vinv;
};

SmithForm smith_normal_form(const IntMat& m);

// Nonzero diagonal entries of the Smith form, in chain order.
std::vector<Int> elementary_divisors(const IntMat& m);

int rank_of(const IntMat& m);

// True when coker(m : Z^cols -> Z^rows) has no torsion, i.e. every
// elementary divisor is 1.
bool cokernel_is_torsion_free(const IntMat& m);

// Basis of { x in Z^cols : m x = 0 }; the lattice it spans is saturated.
std::vector<VecI> kernel_basis(const IntMat& m);

// Basis of the saturation of the row span of `rows` inside Z^n: the set of
// integer vectors some positive multiple of which lies in the span.
std::vector<VecI> saturate_lattice(const std::vector<VecI>& rows, int n);

// For a basis b1..bk of a saturated sublattice of Z^n (as rows), integer
// functionals w1..wk with wi(bj) = [i == j]. Throws when the rows are not a
// basis of a saturated lattice.
std::vector<VecI> dual_functionals(const std::vector<VecI>& basis, int n);

// Exact solve m x = rhs over the rationals; empty when inconsistent.
std::optional<VecQ> solve_rational(const IntMat& m, const VecQ& rhs);

// Inverse of a square rational matrix (row-major), empty when singular.
std::optional<std::vector<VecQ>> invert_rational(const std::vector<VecQ>& m);

}  // namespace tropex
