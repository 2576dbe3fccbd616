#include "tropex/linalg.hpp"

#include "tropex/errors.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace tropex {

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::from_rows(const std::vector<VecI>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  IntMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw invalid_input_error("ragged matrix rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

VecI IntMat::row(int i) const {
  VecI v(cols);
  for (int j = 0; j < cols; ++j) v[j] = at(i, j);
  return v;
}

VecI IntMat::col(int j) const {
  VecI v(rows);
  for (int i = 0; i < rows; ++i) v[i] = at(i, j);
  return v;
}

bool operator==(const IntMat& x, const IntMat& y) {
  return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

IntMat transpose(const IntMat& m) {
  IntMat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

IntMat mul(const IntMat& x, const IntMat& y) {
  if (x.cols != y.rows) throw invalid_input_error("matrix size mismatch");
  IntMat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int& f = x.at(i, k);
      if (f == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += f * y.at(k, j);
    }
  return z;
}

VecI mul(const IntMat& m, const VecI& v) {
  if (m.cols != static_cast<int>(v.size()))
    throw invalid_input_error("matrix size mismatch");
  VecI out(m.rows, Int(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out[i] += m.at(i, j) * v[j];
  return out;
}

VecQ mul(const IntMat& m, const VecQ& v) {
  if (m.cols != static_cast<int>(v.size()))
    throw invalid_input_error("matrix size mismatch");
  VecQ out(m.rows, Rat(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out[i] += Rat(m.at(i, j)) * v[j];
  return out;
}

VecI left_mul(const VecI& row, const IntMat& m) {
  if (m.rows != static_cast<int>(row.size()))
    throw invalid_input_error("matrix size mismatch");
  VecI out(m.cols, Int(0));
  for (int i = 0; i < m.rows; ++i) {
    if (row[i] == 0) continue;
    for (int j = 0; j < m.cols; ++j) out[j] += row[i] * m.at(i, j);
  }
  return out;
}

SmithForm smith_normal_form(const IntMat& m) {
  SmithForm s;
  s.d = m;
  s.u = IntMat::identity(m.rows);
  s.v = IntMat::identity(m.cols);
  s.vinv = IntMat::identity(m.cols);
  IntMat& d = s.d;

  // Row operations act on d and u alike; column operations act on d and v,
  // with the inverse operation applied to the rows of vinv so that
  // v * vinv = I is maintained.
  auto row_swap = [&](int i, int k) {
    if (i == k) return;
    for (int j = 0; j < d.cols; ++j) std::swap(d.at(i, j), d.at(k, j));
    for (int j = 0; j < s.u.cols; ++j) std::swap(s.u.at(i, j), s.u.at(k, j));
  };
  auto row_addmul = [&](int i, int k, const Int& f) {
    if (f == 0) return;
    for (int j = 0; j < d.cols; ++j) d.at(i, j) += f * d.at(k, j);
    for (int j = 0; j < s.u.cols; ++j) s.u.at(i, j) += f * s.u.at(k, j);
  };
  auto row_negate = [&](int i) {
    for (int j = 0; j < d.cols; ++j) d.at(i, j) = -d.at(i, j);
    for (int j = 0; j < s.u.cols; ++j) s.u.at(i, j) = -s.u.at(i, j);
  };
  auto col_swap = [&](int j, int l) {
    if (j == l) return;
    for (int i = 0; i < d.rows; ++i) std::swap(d.at(i, j), d.at(i, l));
    for (int i = 0; i < s.v.rows; ++i) std::swap(s.v.at(i, j), s.v.at(i, l));
    for (int c = 0; c < s.vinv.cols; ++c)
      std::swap(s.vinv.at(j, c), s.vinv.at(l, c));
  };
  // col j += f * col l  <=>  right-multiply by E = I + f*e(l,j);
  // E^-1 = I - f*e(l,j) acts on vinv from the left: row l -= f * row j.
  auto col_addmul = [&](int j, int l, const Int& f) {
    if (f == 0) return;
    for (int i = 0; i < d.rows; ++i) d.at(i, j) += f * d.at(i, l);
    for (int i = 0; i < s.v.rows; ++i) s.v.at(i, j) += f * s.v.at(i, l);
    for (int c = 0; c < s.vinv.cols; ++c)
      s.vinv.at(l, c) -= f * s.vinv.at(j, c);
  };

  int steps = std::min(m.rows, m.cols);
  for (int t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      int pi = -1, pj = -1;
      for (int i = t; i < d.rows; ++i)
        for (int j = t; j < d.cols; ++j) {
          const Int& x = d.at(i, j);
          if (x == 0) continue;
          if (pi < 0 || iabs(x) < iabs(d.at(pi, pj))) {
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) {
        t = steps;  // trailing block is zero; diagonalization is complete
        break;
      }
      row_swap(t, pi);
      col_swap(t, pj);

      bool dirty = false;
      for (int i = t + 1; i < d.rows; ++i) {
        if (d.at(i, t) == 0) continue;
        Int q = d.at(i, t) / d.at(t, t);
        row_addmul(i, t, -q);
        if (d.at(i, t) != 0) dirty = true;
      }
      for (int j = t + 1; j < d.cols; ++j) {
        if (d.at(t, j) == 0) continue;
        Int q = d.at(t, j) / d.at(t, t);
        col_addmul(j, t, -q);
        if (d.at(t, j) != 0) dirty = true;
      }
      if (dirty) continue;  // a smaller remainder appeared; re-pick

      // Pivot must divide the whole trailing block for the chain property.
      bool fixed = false;
      for (int i = t + 1; i < d.rows && !fixed; ++i)
        for (int j = t + 1; j < d.cols && !fixed; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            row_addmul(t, i, Int(1));
            fixed = true;
          }
      if (fixed) continue;

      if (d.at(t, t) < 0) row_negate(t);
      break;
    }
    if (t >= steps) break;
  }
  return s;
}

std::vector<Int> elementary_divisors(const IntMat& m) {
  SmithForm s = smith_normal_form(m);
  std::vector<Int> out;
  int steps = std::min(m.rows, m.cols);
  for (int t = 0; t < steps; ++t)
    if (s.d.at(t, t) != 0) out.push_back(s.d.at(t, t));
  return out;
}

int rank_of(const IntMat& m) {
  return static_cast<int>(elementary_divisors(m).size());
}

bool cokernel_is_torsion_free(const IntMat& m) {
  for (const Int& d : elementary_divisors(m))
    if (d != 1) return false;
  return true;
}

std::vector<VecI> kernel_basis(const IntMat& m) {
  SmithForm s = smith_normal_form(m);
  int r = 0;
  int steps = std::min(m.rows, m.cols);
  for (int t = 0; t < steps; ++t)
    if (s.d.at(t, t) != 0) ++r;
  std::vector<VecI> out;
  for (int j = r; j < m.cols; ++j) out.push_back(s.v.col(j));
  return out;
}

std::vector<VecI> saturate_lattice(const std::vector<VecI>& rows, int n) {
  IntMat m(static_cast<int>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw invalid_input_error("vector width mismatch");
    for (int j = 0; j < n; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
  }
  SmithForm s = smith_normal_form(m);
  int r = 0;
  int steps = std::min(m.rows, m.cols);
  for (int t = 0; t < steps; ++t)
    if (s.d.at(t, t) != 0) ++r;
  // m = u^-1 d v^-1, so over the rationals the row span of m equals the span
  // of the first r rows of v^-1; those rows extend to a basis of the full
  // lattice (v^-1 is unimodular), hence they generate the saturation.
  std::vector<VecI> out;
  for (int i = 0; i < r; ++i) out.push_back(s.vinv.row(i));
  return out;
}

std::vector<VecI> dual_functionals(const std::vector<VecI>& basis, int n) {
  int k = static_cast<int>(basis.size());
  IntMat b(k, n);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(basis[i].size()) != n)
      throw invalid_input_error("vector width mismatch");
    for (int j = 0; j < n; ++j) b.at(i, j) = basis[i][j];
  }
  SmithForm s = smith_normal_form(b);
  for (int t = 0; t < k; ++t) {
    if (t >= std::min(b.rows, b.cols) || s.d.at(t, t) != 1)
      throw invalid_input_error(
          "rows do not form a basis of a saturated lattice");
  }
  // b = u^-1 [I|0] v^-1, so w^T = (first k columns of v) * u satisfies
  // b w^T = I.
  IntMat vk(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) vk.at(i, j) = s.v.at(i, j);
  IntMat wt = mul(vk, s.u);
  std::vector<VecI> out;
  for (int j = 0; j < k; ++j) out.push_back(wt.col(j));
  return out;
}

std::optional<VecQ> solve_rational(const IntMat& m, const VecQ& rhs) {
  if (static_cast<int>(rhs.size()) != m.rows)
    throw invalid_input_error("right-hand side width mismatch");
  int r = m.rows, c = m.cols;
  std::vector<VecQ> aug(r, VecQ(c + 1, Rat(0)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) aug[i][j] = Rat(m.at(i, j));
    aug[i][c] = rhs[i];
  }
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < c && row < r; ++col) {
    int sel = -1;
    for (int i = row; i < r; ++i)
      if (aug[i][col] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(aug[row], aug[sel]);
    Rat p = aug[row][col];
    for (int j = col; j <= c; ++j) aug[row][j] /= p;
    for (int i = 0; i < r; ++i) {
      if (i == row || aug[i][col] == 0) continue;
      Rat f = aug[i][col];
      for (int j = col; j <= c; ++j) aug[i][j] -= f * aug[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int i = row; i < r; ++i)
    if (aug[i][c] != 0) return std::nullopt;
  VecQ x(c, Rat(0));
  for (int i = 0; i < row; ++i) x[pivot_col[i]] = aug[i][c];
  return x;
}

std::optional<std::vector<VecQ>> invert_rational(const std::vector<VecQ>& m) {
  int n = static_cast<int>(m.size());
  std::vector<VecQ> aug(n, VecQ(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[i].size()) != n)
      throw invalid_input_error("matrix is not square");
    for (int j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int sel = -1;
    for (int i = col; i < n; ++i)
      if (aug[i][col] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) return std::nullopt;
    std::swap(aug[col], aug[sel]);
    Rat p = aug[col][col];
    for (int j = 0; j < 2 * n; ++j) aug[col][j] /= p;
    for (int i = 0; i < n; ++i) {
      if (i == col || aug[i][col] == 0) continue;
      Rat f = aug[i][col];
      for (int j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[col][j];
    }
  }
  std::vector<VecQ> inv(n, VecQ(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

}  // namespace tropex
