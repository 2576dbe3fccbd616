#pragma once

// Independent reference implementations used to cross-check the library.
// Deliberately written with different algorithms (and no shared state) from
// the production code: first-nonzero pivots and a gcd/lcm chain fixup here
// versus minimal-pivot selection there; exhaustive search here versus
// double description there.

#include "tropex/linalg.hpp"
#include "tropex/linear_system.hpp"
#include "tropex/rational.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace oracle {

using tropex::Int;
using tropex::IntMat;
using tropex::Rat;
using tropex::VecI;
using tropex::VecQ;

// Diagonal of the Smith form via plain Euclidean row/column reduction with
// first-nonzero pivots, then a pairwise gcd/lcm pass to impose the
// divisibility chain (diag(a, b) is equivalent to diag(gcd, lcm)).
inline std::vector<Int> smith_diagonal(IntMat m) {
  int steps = std::min(m.rows, m.cols);
  for (int t = 0; t < steps; ++t) {
    // Bring any nonzero entry of the trailing block to (t, t).
    int pi = -1, pj = -1;
    for (int i = t; i < m.rows && pi < 0; ++i)
      for (int j = t; j < m.cols; ++j)
        if (m.at(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(t, j), m.at(pi, j));
    for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, t), m.at(i, pj));

    bool again = true;
    while (again) {
      again = false;
      for (int i = t + 1; i < m.rows; ++i)
        while (m.at(i, t) != 0) {
          Int q = m.at(i, t) / m.at(t, t);
          for (int j = 0; j < m.cols; ++j) m.at(i, j) -= q * m.at(t, j);
          if (m.at(i, t) != 0) {  // remainder becomes the new pivot
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(t, j), m.at(i, j));
            again = true;
          }
        }
      for (int j = t + 1; j < m.cols; ++j)
        while (m.at(t, j) != 0) {
          Int q = m.at(t, j) / m.at(t, t);
          for (int i = 0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, t);
          if (m.at(t, j) != 0) {
            for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, t), m.at(i, j));
            again = true;
          }
        }
    }
  }
  std::vector<Int> diag;
  for (int t = 0; t < steps; ++t)
    if (m.at(t, t) != 0) diag.push_back(tropex::iabs(m.at(t, t)));
  // Chain fixup.
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
      if (diag[i + 1] % diag[i] == 0) continue;
      Int g = tropex::gcd(diag[i], diag[i + 1]);
      Int l = diag[i] / g * diag[i + 1];
      diag[i] = g;
      diag[i + 1] = l;
      moved = true;
    }
  }
  return diag;
}

// Is y a nonnegative rational combination of the given generators? Decided
// by feasibility of the multiplier system.
inline bool in_cone_hull(const std::vector<VecI>& gens, const VecI& y) {
  int n = static_cast<int>(y.size());
  int k = static_cast<int>(gens.size());
  tropex::LinearSystem sys;
  sys.num_vars = k;
  for (int v = 0; v < k; ++v) {
    tropex::LinConstraint nonneg;
    nonneg.coeffs.assign(k, Rat(0));
    nonneg.coeffs[v] = 1;
    sys.constraints.push_back(std::move(nonneg));
  }
  for (int i = 0; i < n; ++i) {
    tropex::LinConstraint row;
    row.coeffs.assign(k, Rat(0));
    for (int v = 0; v < k; ++v) row.coeffs[v] = Rat(gens[v][i]);
    row.constant = Rat(-y[i]);
    row.rel = tropex::Rel::Eq;
    sys.constraints.push_back(std::move(row));
  }
  return tropex::is_feasible(sys);
}

// Exhaustive Hilbert basis of the monoid of lattice points in the cone
// spanned by `gens`, with membership decided by `member`: enumerate lattice
// points of the box hull of the generator parallelotope that lie in the
// monoid, then keep the ones that are not a sum of two nonzero members.
inline std::vector<VecI> hilbert_by_search(
    const std::vector<VecI>& gens,
    const std::function<bool(const VecI&)>& member) {
  if (gens.empty()) return {};
  int n = static_cast<int>(gens[0].size());
  VecI lo(n, Int(0)), hi(n, Int(0));
  for (const VecI& g : gens)
    for (int i = 0; i < n; ++i) {
      if (g[i] < 0) lo[i] += g[i];
      if (g[i] > 0) hi[i] += g[i];
    }
  std::vector<VecI> points;  // nonzero monoid points in the box
  VecI cur = lo;
  for (;;) {
    if (!std::all_of(cur.begin(), cur.end(),
                     [](const Int& x) { return x == 0; }) &&
        member(cur))
      points.push_back(cur);
    int i = 0;
    while (i < n && cur[i] == hi[i]) cur[i] = lo[i], ++i;
    if (i == n) break;
    ++cur[i];
  }
  std::vector<VecI> basis;
  for (const VecI& y : points) {
    bool reducible = false;
    for (const VecI& z : points) {
      if (z == y) continue;
      VecI rest(n);
      bool all_zero = true;
      for (int i = 0; i < n; ++i) {
        rest[i] = y[i] - z[i];
        if (rest[i] != 0) all_zero = false;
      }
      if (all_zero) continue;
      if (member(rest)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.push_back(y);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

inline std::vector<VecI> hilbert_by_search(const std::vector<VecI>& gens) {
  return hilbert_by_search(
      gens, [&](const VecI& y) { return in_cone_hull(gens, y); });
}

}  // namespace oracle
