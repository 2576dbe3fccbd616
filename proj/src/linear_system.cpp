#include "tropex/linear_system.hpp"

#include "tropex/errors.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <utility>

namespace tropex {

namespace {

// Hard ceiling on the working set during elimination. Fourier-Motzkin can
// blow up quadratically per round; anything in our input range stays far
// below this, so hitting it means the request is out of scope.
constexpr std::size_t kMaxConstraints = 100000;

// One elimination event, kept so a satisfying point can be rebuilt by
// walking the log backwards.
struct Step {
  int var = -1;
  bool is_subst = false;
  // Substitution: x_var = expr_coeffs . x + expr_const (only variables that
  // were still present at the time have nonzero entries).
  VecQ expr_coeffs;
  Rat expr_const;
  // Fourier-Motzkin: the constraints that bounded x_var from below/above.
  std::vector<LinConstraint> lowers;
  std::vector<LinConstraint> uppers;
};

enum class RowKind { Keep, Drop, Infeasible };

// Classify a constraint whose coefficients are all zero.
RowKind classify_constant_row(const LinConstraint& c) {
  switch (c.rel) {
    case Rel::Ge:
      return c.constant >= 0 ? RowKind::Drop : RowKind::Infeasible;
    case Rel::Gt:
      return c.constant > 0 ? RowKind::Drop : RowKind::Infeasible;
    case Rel::Eq:
      return c.constant == 0 ? RowKind::Drop : RowKind::Infeasible;
  }
  return RowKind::Keep;
}

bool all_zero(const VecQ& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// Integer image of a normalized constraint, used as a dedup key.
std::vector<Int> row_key(const LinConstraint& c) {
  std::vector<Int> key;
  key.reserve(c.coeffs.size() + 1);
  for (const Rat& q : c.coeffs) key.push_back(num(q));
  key.push_back(num(c.constant));
  return key;
}

// Canonicalize, fold constant rows, drop duplicates (a strict row absorbs an
// identical weak one, an equality absorbs an identical weak inequality).
// Returns false when a constant row is unsatisfiable.
bool tidy(std::vector<LinConstraint>& rows) {
  std::map<std::vector<Int>, std::size_t> eqs;    // key -> index into out
  std::map<std::vector<Int>, std::size_t> ineqs;  // key -> index into out
  std::vector<LinConstraint> out;
  out.reserve(rows.size());
  for (auto& raw : rows) {
    LinConstraint c = normalize_constraint(raw);
    if (all_zero(c.coeffs)) {
      RowKind k = classify_constant_row(c);
      if (k == RowKind::Infeasible) return false;
      continue;
    }
    if (c.rel == Rel::Eq) {
      // Sign-canonical so f = 0 and -f = 0 collide.
      auto first_nonzero =
          std::find_if(c.coeffs.begin(), c.coeffs.end(),
                       [](const Rat& x) { return x != 0; });
      if (*first_nonzero < 0) {
        for (Rat& x : c.coeffs) x = -x;
        c.constant = -c.constant;
      }
      auto key = row_key(c);
      if (eqs.find(key) == eqs.end()) {
        eqs.emplace(std::move(key), out.size());
        out.push_back(std::move(c));
      }
      continue;
    }
    auto key = row_key(c);
    auto it = ineqs.find(key);
    if (it == ineqs.end()) {
      ineqs.emplace(std::move(key), out.size());
      out.push_back(std::move(c));
    } else if (c.rel == Rel::Gt) {
      out[it->second].rel = Rel::Gt;
    }
  }
  // An inequality row identical to an equality row is implied by it (weak
  // case) and can go; the strict case stays so infeasibility surfaces later.
  std::vector<LinConstraint> kept;
  kept.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const LinConstraint& c = out[i];
    if (c.rel == Rel::Ge) {
      auto key = row_key(c);
      auto it = eqs.find(key);
      if (it != eqs.end()) continue;
    }
    kept.push_back(out[i]);
  }
  rows = std::move(kept);
  if (rows.size() > kMaxConstraints)
    throw resource_limit_error("constraint system grew past the supported size");
  return true;
}

struct ElimOutcome {
  bool ok = false;  // false: detected unsatisfiable
  std::vector<LinConstraint> remaining;
  std::vector<Step> steps;
};

// Eliminate variables keep..num_vars-1. Equalities are always used by
// substitution when one mentions a target variable (exact, no growth);
// otherwise the variable with the cheapest lower*upper product is projected
// out by Fourier-Motzkin, a strict parent making the consequence strict.
ElimOutcome eliminate(const LinearSystem& sys, int keep, bool record_steps) {
  for (const auto& c : sys.constraints)
    if (static_cast<int>(c.coeffs.size()) != sys.num_vars)
      throw invalid_input_error("constraint width does not match variable count");

  ElimOutcome res;
  std::vector<LinConstraint> work = sys.constraints;
  if (!tidy(work)) return res;

  std::vector<int> targets;
  for (int v = keep; v < sys.num_vars; ++v) targets.push_back(v);

  while (!targets.empty()) {
    // Substitution first: any equality touching a target variable.
    int sub_var = -1;
    std::size_t sub_row = 0;
    std::size_t sub_nonzeros = 0;
    Int sub_coeff_abs = 0;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i].rel != Rel::Eq) continue;
      std::size_t nz = 0;
      for (const Rat& x : work[i].coeffs) nz += (x != 0);
      for (int v : targets) {
        const Rat& a = work[i].coeffs[v];
        if (a == 0) continue;
        Int ca = iabs(num(a));  // normalized rows have integer entries
        bool better = sub_var < 0 || nz < sub_nonzeros ||
                      (nz == sub_nonzeros && ca < sub_coeff_abs);
        if (better) {
          sub_var = v;
          sub_row = i;
          sub_nonzeros = nz;
          sub_coeff_abs = ca;
        }
      }
    }

    if (sub_var >= 0) {
      const LinConstraint eq = work[sub_row];
      const Rat a = eq.coeffs[sub_var];
      Step step;
      step.var = sub_var;
      step.is_subst = true;
      step.expr_coeffs.assign(sys.num_vars, Rat(0));
      for (int j = 0; j < sys.num_vars; ++j)
        if (j != sub_var) step.expr_coeffs[j] = -eq.coeffs[j] / a;
      step.expr_const = -eq.constant / a;

      std::vector<LinConstraint> next;
      next.reserve(work.size());
      for (std::size_t i = 0; i < work.size(); ++i) {
        if (i == sub_row) continue;
        LinConstraint d = work[i];
        const Rat b = d.coeffs[sub_var];
        if (b != 0) {
          for (int j = 0; j < sys.num_vars; ++j)
            d.coeffs[j] += b * step.expr_coeffs[j];
          d.constant += b * step.expr_const;
          d.coeffs[sub_var] = 0;
        }
        next.push_back(std::move(d));
      }
      if (record_steps) res.steps.push_back(std::move(step));
      if (!tidy(next)) return res;
      work = std::move(next);
      targets.erase(std::find(targets.begin(), targets.end(), sub_var));
      continue;
    }

    // Fourier-Motzkin on the cheapest target.
    int best_var = -1;
    std::size_t best_cost = 0;
    for (int v : targets) {
      std::size_t lo = 0, hi = 0;
      for (const auto& c : work) {
        if (c.coeffs[v] > 0) ++lo;
        else if (c.coeffs[v] < 0) ++hi;
      }
      std::size_t cost = lo * hi;
      if (best_var < 0 || cost < best_cost) {
        best_var = v;
        best_cost = cost;
      }
    }

    Step step;
    step.var = best_var;
    std::vector<LinConstraint> next;
    for (auto& c : work) {
      const Rat& a = c.coeffs[best_var];
      if (a > 0) step.lowers.push_back(c);
      else if (a < 0) step.uppers.push_back(c);
      else next.push_back(std::move(c));
    }
    for (const auto& lo : step.lowers) {
      const Rat a = lo.coeffs[best_var];
      for (const auto& up : step.uppers) {
        const Rat b = up.coeffs[best_var];  // b < 0
        LinConstraint combo;
        combo.coeffs.assign(sys.num_vars, Rat(0));
        for (int j = 0; j < sys.num_vars; ++j)
          combo.coeffs[j] = a * up.coeffs[j] - b * lo.coeffs[j];
        combo.constant = a * up.constant - b * lo.constant;
        combo.rel = (lo.rel == Rel::Gt || up.rel == Rel::Gt) ? Rel::Gt : Rel::Ge;
        next.push_back(std::move(combo));
        if (next.size() > kMaxConstraints)
          throw resource_limit_error(
              "constraint system grew past the supported size");
      }
    }
    if (record_steps) res.steps.push_back(std::move(step));
    if (!tidy(next)) return res;
    work = std::move(next);
    targets.erase(std::find(targets.begin(), targets.end(), best_var));
  }

  res.ok = true;
  res.remaining = std::move(work);
  return res;
}

// Value of the bound a constraint imposes on x_var once every other
// variable is pinned by w.
Rat bound_value(const LinConstraint& c, int var, const VecQ& w) {
  Rat rest = c.constant;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j)
    if (static_cast<int>(j) != var) rest += c.coeffs[j] * w[j];
  return -rest / c.coeffs[var];
}

}  // namespace

LinConstraint normalize_constraint(const LinConstraint& c) {
  LinConstraint out = c;
  // Clear denominators.
  Int d = den(out.constant);
  for (const Rat& q : out.coeffs) d = lcm(d, den(q));
  if (d != 1) {
    Rat f(d);
    for (Rat& q : out.coeffs) q *= f;
    out.constant *= f;
  }
  // Divide by the content.
  Int g = iabs(num(out.constant));
  for (const Rat& q : out.coeffs) g = gcd(g, iabs(num(q)));
  if (g > 1) {
    Rat f(g);
    for (Rat& q : out.coeffs) q /= f;
    out.constant /= f;
  }
  return out;
}

bool is_feasible(const LinearSystem& sys) {
  return eliminate(sys, 0, false).ok;
}

std::optional<VecQ> feasible(const LinearSystem& sys) {
  ElimOutcome out = eliminate(sys, 0, true);
  if (!out.ok) return std::nullopt;

  VecQ w(sys.num_vars, Rat(0));
  for (auto it = out.steps.rbegin(); it != out.steps.rend(); ++it) {
    const Step& s = *it;
    if (s.is_subst) {
      w[s.var] = dot(s.expr_coeffs, w) + s.expr_const;
      continue;
    }
    bool has_lo = false, has_hi = false, lo_strict = false, hi_strict = false;
    Rat lo, hi;
    for (const auto& c : s.lowers) {
      Rat b = bound_value(c, s.var, w);
      bool strict = c.rel == Rel::Gt;
      if (!has_lo || b > lo || (b == lo && strict)) {
        lo = b;
        lo_strict = strict;
      }
      has_lo = true;
    }
    for (const auto& c : s.uppers) {
      Rat b = bound_value(c, s.var, w);
      bool strict = c.rel == Rel::Gt;
      if (!has_hi || b < hi || (b == hi && strict)) {
        hi = b;
        hi_strict = strict;
      }
      has_hi = true;
    }
    if (has_lo && has_hi) {
      // Elimination already certified the interval is nonempty.
      assert(lo < hi || (lo == hi && !lo_strict && !hi_strict));
      w[s.var] = lo == hi ? lo : (lo + hi) / 2;
    } else if (has_lo) {
      w[s.var] = lo_strict ? lo + 1 : lo;
    } else if (has_hi) {
      w[s.var] = hi_strict ? hi - 1 : hi;
    } else {
      w[s.var] = 0;
    }
  }
  return w;
}

LinearSystem project(const LinearSystem& sys, int keep) {
  if (keep < 0 || keep > sys.num_vars)
    throw invalid_input_error("projection width out of range");
  ElimOutcome out = eliminate(sys, keep, false);
  LinearSystem res;
  res.num_vars = keep;
  if (!out.ok) {
    LinConstraint never;
    never.coeffs.assign(keep, Rat(0));
    never.constant = -1;
    never.rel = Rel::Ge;
    res.constraints.push_back(std::move(never));
    return res;
  }
  for (auto& c : out.remaining) {
    c.coeffs.resize(keep);
    res.constraints.push_back(std::move(c));
  }
  return res;
}

}  // namespace tropex
