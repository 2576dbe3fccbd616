#include "tropex/polytope.hpp"

#include "tropex/errors.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <utility>

namespace tropex {

namespace {

constexpr std::size_t kMaxGenerators = 20000;

Rat cond_value(const AffCondition& c, const VecQ& x) {
  return dot(c.slope, x) + c.constant;
}

bool cond_holds(const AffCondition& c, const VecQ& x) {
  Rat v = cond_value(c, x);
  return c.strict ? v > 0 : v >= 0;
}

// Scale so the slope is integral and primitive jointly with the constant.
AffCondition normalize_condition(AffCondition c) {
  Int d = den(c.constant);
  if (d != 1) {
    for (Int& s : c.slope) s *= d;
    c.constant *= Rat(d);
  }
  Int g = iabs(num(c.constant));
  for (const Int& s : c.slope) g = gcd(g, iabs(s));
  if (g > 1) {
    for (Int& s : c.slope) s /= g;
    c.constant /= Rat(g);
  }
  return c;
}

// Keep one row per (slope, constant), a strict copy winning over a weak one.
// Tautological rows (zero slope, satisfied) are dropped; violated constant
// rows are kept so emptiness surfaces.
std::vector<AffCondition> canonical_rows(int ambient,
                                         std::vector<AffCondition> rows) {
  std::map<std::pair<VecI, Rat>, std::size_t> seen;
  std::vector<AffCondition> out;
  for (auto& raw : rows) {
    if (static_cast<int>(raw.slope.size()) != ambient)
      throw invalid_input_error("condition width does not match ambient dim");
    AffCondition c = normalize_condition(std::move(raw));
    if (is_zero(c.slope)) {
      bool holds = c.strict ? c.constant > 0 : c.constant >= 0;
      if (holds) continue;
    }
    auto key = std::make_pair(c.slope, c.constant);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), out.size());
      out.push_back(std::move(c));
    } else if (c.strict) {
      out[it->second].strict = true;
    }
  }
  return out;
}

LinConstraint to_lin(const AffCondition& c, int width, int offset = 0) {
  LinConstraint lc;
  lc.coeffs.assign(width, Rat(0));
  for (std::size_t j = 0; j < c.slope.size(); ++j)
    lc.coeffs[offset + j] = Rat(c.slope[j]);
  lc.constant = c.constant;
  lc.rel = c.strict ? Rel::Gt : Rel::Ge;
  return lc;
}

// Negation of a condition, for inclusion tests by infeasibility.
LinConstraint negated(const AffCondition& c, int width) {
  LinConstraint lc;
  lc.coeffs.assign(width, Rat(0));
  for (std::size_t j = 0; j < c.slope.size(); ++j)
    lc.coeffs[j] = Rat(-c.slope[j]);
  lc.constant = -c.constant;
  lc.rel = c.strict ? Rel::Ge : Rel::Gt;  // not(f > 0) is -f >= 0, etc.
  return lc;
}

// Rational linear row -> integral-slope condition.
AffCondition from_lin_row(const VecQ& coeffs, const Rat& constant,
                          bool strict) {
  AffCondition c;
  Int d = den(constant);
  for (const Rat& q : coeffs) d = lcm(d, den(q));
  c.slope.reserve(coeffs.size());
  for (const Rat& q : coeffs) c.slope.push_back(num(q) * (d / den(q)));
  c.constant = constant * Rat(d);
  c.strict = strict;
  return c;
}

std::vector<AffCondition> from_system(const LinearSystem& sys) {
  std::vector<AffCondition> out;
  for (const auto& row : sys.constraints) {
    if (row.rel == Rel::Eq) {
      AffCondition a = from_lin_row(row.coeffs, row.constant, false);
      AffCondition b = a;
      for (Int& s : b.slope) s = -s;
      b.constant = -b.constant;
      out.push_back(std::move(a));
      out.push_back(std::move(b));
    } else {
      out.push_back(from_lin_row(row.coeffs, row.constant, row.rel == Rel::Gt));
    }
  }
  return out;
}

// Indices of closure rows that vanish at x.
std::vector<int> active_pattern(const Polytope& cl, const VecQ& x) {
  std::vector<int> out;
  const auto& rows = cl.conditions();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (cond_value(rows[i], x) == 0) out.push_back(static_cast<int>(i));
  return out;
}

// Closure rows with the rows in `active` pinned to zero.
std::vector<AffCondition> pinned_rows(const Polytope& cl,
                                      const std::vector<int>& active) {
  std::vector<AffCondition> rows = cl.conditions();
  for (int i : active) {
    AffCondition flip = rows[i];
    for (Int& s : flip.slope) s = -s;
    flip.constant = -flip.constant;
    rows.push_back(std::move(flip));
  }
  return rows;
}

}  // namespace

IntAffineMap identity_map(int n) {
  IntAffineMap f;
  f.a = IntMat::identity(n);
  f.b.assign(n, Rat(0));
  return f;
}

IntAffineMap compose(const IntAffineMap& outer, const IntAffineMap& inner) {
  if (outer.source_dim() != inner.target_dim())
    throw invalid_input_error("map composition dimension mismatch");
  IntAffineMap f;
  f.a = mul(outer.a, inner.a);
  f.b = mul(outer.a, inner.b);
  for (int i = 0; i < outer.target_dim(); ++i) f.b[i] += outer.b[i];
  return f;
}

VecQ map_point(const IntAffineMap& f, const VecQ& x) {
  VecQ y = mul(f.a, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += f.b[i];
  return y;
}

Polytope::Polytope(int ambient_dim, std::vector<AffCondition> conditions)
    : ambient_(ambient_dim),
      conds_(canonical_rows(ambient_dim, std::move(conditions))) {
  auto w = feasible(as_system());
  if (!w) throw invalid_input_error("conditions have no common solution");
  witness_ = std::move(*w);
}

std::optional<Polytope> Polytope::try_make(
    int ambient_dim, std::vector<AffCondition> conditions) {
  std::vector<AffCondition> rows =
      canonical_rows(ambient_dim, std::move(conditions));
  LinearSystem sys;
  sys.num_vars = ambient_dim;
  for (const auto& c : rows) sys.constraints.push_back(to_lin(c, ambient_dim));
  auto w = feasible(sys);
  if (!w) return std::nullopt;
  Polytope p;
  p.ambient_ = ambient_dim;
  p.conds_ = std::move(rows);
  p.witness_ = std::move(*w);
  return p;
}

Polytope Polytope::with_witness(int ambient_dim,
                                std::vector<AffCondition> conditions, VecQ w) {
  Polytope p;
  p.ambient_ = ambient_dim;
  p.conds_ = canonical_rows(ambient_dim, std::move(conditions));
  if (static_cast<int>(w.size()) != ambient_dim)
    throw invalid_input_error("witness width does not match ambient dim");
  for (const auto& c : p.conds_)
    if (!cond_holds(c, w))
      throw invalid_input_error("witness violates a condition");
  p.witness_ = std::move(w);
  return p;
}

Polytope Polytope::full_space(int ambient_dim) {
  return with_witness(ambient_dim, {}, VecQ(ambient_dim, Rat(0)));
}

VecQ Polytope::witness() const { return witness_; }

bool Polytope::contains(const VecQ& x) const {
  if (static_cast<int>(x.size()) != ambient_)
    throw invalid_input_error("point width does not match ambient dim");
  for (const auto& c : conds_)
    if (!cond_holds(c, x)) return false;
  return true;
}

LinearSystem Polytope::as_system() const {
  LinearSystem sys;
  sys.num_vars = ambient_;
  for (const auto& c : conds_) sys.constraints.push_back(to_lin(c, ambient_));
  return sys;
}

Polytope Polytope::closure() const {
  std::vector<AffCondition> rows = conds_;
  for (auto& c : rows) c.strict = false;
  return with_witness(ambient_, std::move(rows), witness_);
}

std::vector<VecI> Polytope::span_equations_slopes() const {
  Polytope cl = closure();
  LinearSystem sys = cl.as_system();
  std::vector<VecI> out;
  for (const auto& c : cl.conditions()) {
    LinearSystem probe = sys;
    LinConstraint pos = to_lin(c, ambient_);
    pos.rel = Rel::Gt;
    probe.constraints.push_back(std::move(pos));
    if (!is_feasible(probe)) out.push_back(c.slope);
  }
  return out;
}

int Polytope::dim() const {
  std::vector<VecI> eq = span_equations_slopes();
  if (eq.empty()) return ambient_;
  IntMat m = IntMat::from_rows(eq);
  return ambient_ - rank_of(m);
}

Polytope Polytope::relative_interior() const {
  Polytope cl = closure();
  LinearSystem sys = cl.as_system();
  std::vector<AffCondition> rows;
  for (const auto& c : cl.conditions()) {
    LinearSystem probe = sys;
    LinConstraint pos = to_lin(c, ambient_);
    pos.rel = Rel::Gt;
    probe.constraints.push_back(std::move(pos));
    if (!is_feasible(probe)) {
      // Implied equality: pin with an opposite pair of weak rows.
      AffCondition flip = c;
      for (Int& s : flip.slope) s = -s;
      flip.constant = -flip.constant;
      rows.push_back(c);
      rows.push_back(std::move(flip));
    } else {
      AffCondition s = c;
      s.strict = true;
      rows.push_back(std::move(s));
    }
  }
  return Polytope(ambient_, std::move(rows));
}

VecQ Polytope::relint_witness() const { return relative_interior().witness(); }

std::vector<VecI> Polytope::direction_basis() const {
  std::vector<VecI> eq = span_equations_slopes();
  IntMat m(static_cast<int>(eq.size()), ambient_);
  for (std::size_t i = 0; i < eq.size(); ++i)
    for (int j = 0; j < ambient_; ++j) m.at(static_cast<int>(i), j) = eq[i][j];
  return kernel_basis(m);
}

bool Polytope::contains_line() const {
  std::vector<VecI> slopes;
  for (const auto& c : conds_) slopes.push_back(c.slope);
  IntMat m(static_cast<int>(slopes.size()), ambient_);
  for (std::size_t i = 0; i < slopes.size(); ++i)
    for (int j = 0; j < ambient_; ++j)
      m.at(static_cast<int>(i), j) = slopes[i][j];
  return rank_of(m) < ambient_;
}

std::optional<Polytope> Polytope::recession_cone() const {
  std::vector<AffCondition> rows;
  for (const auto& c : conds_) {
    AffCondition r;
    r.slope = c.slope;
    r.constant = 0;
    r.strict = c.strict;
    rows.push_back(std::move(r));
  }
  return try_make(ambient_, std::move(rows));
}

bool Polytope::is_cone_at(const VecQ& apex) const {
  if (static_cast<int>(apex.size()) != ambient_)
    throw invalid_input_error("apex width does not match ambient dim");
  // Shift the apex to the origin, then compare against the doubled set; for
  // convex sets, invariance under doubling is invariance under every
  // positive scaling.
  std::vector<AffCondition> shifted, doubled;
  for (const auto& c : conds_) {
    AffCondition s = c;
    s.constant = c.constant + dot(c.slope, apex);
    doubled.push_back(s);
    doubled.back().constant *= 2;
    shifted.push_back(std::move(s));
  }
  VecQ w = witness_;
  for (int i = 0; i < ambient_; ++i) w[i] -= apex[i];
  VecQ w2 = w;
  for (int i = 0; i < ambient_; ++i) w2[i] *= 2;
  Polytope q = with_witness(ambient_, std::move(shifted), std::move(w));
  Polytope q2 = with_witness(ambient_, std::move(doubled), std::move(w2));
  return same_set(q, q2);
}

bool Polytope::is_cone() const {
  // Descend to a minimal face of the closure; when the set is a cone about
  // any point, that face is exactly the apex set, so testing one of its
  // points decides conehood and the apex set is a lattice-solvability
  // question from there.
  Polytope cl = closure();
  LinearSystem sys = cl.as_system();
  for (const auto& c : cl.conditions()) {
    LinConstraint pin = to_lin(c, ambient_);
    pin.rel = Rel::Eq;
    LinearSystem probe = sys;
    probe.constraints.push_back(pin);
    if (is_feasible(probe)) sys = std::move(probe);
  }
  VecQ apex = *feasible(sys);
  if (!is_cone_at(apex)) return false;

  // Integral apex exists iff m z = m apex has an integer solution, where m
  // stacks every slope (the apex set is apex + ker m).
  IntMat m(static_cast<int>(conds_.size()), ambient_);
  for (std::size_t i = 0; i < conds_.size(); ++i)
    for (int j = 0; j < ambient_; ++j)
      m.at(static_cast<int>(i), j) = conds_[i].slope[j];
  VecQ b = mul(m, apex);
  for (const Rat& x : b)
    if (den(x) != 1) return false;
  SmithForm s = smith_normal_form(m);
  VecQ c(m.rows, Rat(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.rows; ++j) c[i] += Rat(s.u.at(i, j)) * b[j];
  int steps = std::min(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i) {
    Int di = i < steps ? s.d.at(i, i) : Int(0);
    if (di == 0) {
      if (c[i] != 0) return false;
    } else if (num(c[i]) % di != 0) {
      return false;
    }
  }
  return true;
}

bool subset_of(const Polytope& p, const Polytope& q) {
  if (p.ambient_dim() != q.ambient_dim())
    throw invalid_input_error("ambient dimension mismatch");
  LinearSystem sys = p.as_system();
  for (const auto& c : q.conditions()) {
    LinearSystem probe = sys;
    probe.constraints.push_back(negated(c, p.ambient_dim()));
    if (is_feasible(probe)) return false;
  }
  return true;
}

bool same_set(const Polytope& p, const Polytope& q) {
  return subset_of(p, q) && subset_of(q, p);
}

bool relint_contains(const Polytope& p, const VecQ& x) {
  return p.relative_interior().contains(x);
}

std::vector<Face> faces_of_closure(const Polytope& p) {
  Polytope cl = p.closure();
  const auto& rows = cl.conditions();
  int n = cl.ambient_dim();

  // Closure rows with the rows listed in `pins` (sorted) forced to zero.
  auto pinned_sys = [&](const std::vector<int>& pins) {
    LinearSystem sys;
    sys.num_vars = n;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      LinConstraint lc = to_lin(rows[j], n);
      if (std::binary_search(pins.begin(), pins.end(), static_cast<int>(j)))
        lc.rel = Rel::Eq;
      sys.constraints.push_back(std::move(lc));
    }
    return sys;
  };

  // Breadth-first over maximal active sets, pinning one extra row at a time.
  std::map<std::vector<int>, Polytope> found;
  std::set<std::vector<int>> explored;  // pin sets already expanded
  std::queue<std::vector<int>> todo;

  // `pins` is sorted and cuts out a nonempty face. Saturate it to the
  // maximal active set of that face: every further row identically zero on
  // the pinned region. One emptiness check per row is cheaper than
  // recovering a relative-interior witness per probe.
  auto visit = [&](const std::vector<int>& pins) {
    LinearSystem base = pinned_sys(pins);
    std::vector<int> key = pins;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (std::binary_search(pins.begin(), pins.end(), static_cast<int>(j)))
        continue;
      LinearSystem probe = base;
      LinConstraint lc = to_lin(rows[j], n);
      lc.rel = Rel::Gt;
      probe.constraints.push_back(std::move(lc));
      if (!is_feasible(probe)) key.push_back(static_cast<int>(j));
    }
    std::sort(key.begin(), key.end());
    if (found.find(key) != found.end()) return;
    std::optional<VecQ> w = feasible(pinned_sys(key));
    found.emplace(key, Polytope::with_witness(n, pinned_rows(cl, key), *w));
    todo.push(key);
  };

  visit({});
  while (!todo.empty()) {
    std::vector<int> key = todo.front();
    todo.pop();
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (std::binary_search(key.begin(), key.end(), static_cast<int>(j)))
        continue;
      std::vector<int> pins = key;
      pins.push_back(static_cast<int>(j));
      std::sort(pins.begin(), pins.end());
      if (!explored.insert(pins).second) continue;
      if (is_feasible(pinned_sys(pins))) visit(pins);
    }
  }

  // The active rows of a face span the complement of its affine hull, so the
  // dimension falls out of an integer rank computation instead of a probe.
  std::vector<Face> out;
  for (auto& [key, poly] : found) {
    int dim = n;
    if (!key.empty()) {
      std::vector<VecI> slopes;
      for (int i : key) slopes.push_back(rows[i].slope);
      dim = n - rank_of(IntMat::from_rows(slopes));
    }
    out.push_back(Face{std::move(poly), key, dim});
  }
  std::stable_sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    return a.active < b.active;
  });
  return out;
}

int face_through(const Polytope& p, const std::vector<Face>& faces,
                 const VecQ& x) {
  Polytope cl = p.closure();
  if (!cl.contains(x)) return -1;
  std::vector<int> key = active_pattern(cl, x);
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].active == key) return static_cast<int>(i);
  return -1;
}

std::optional<Polytope> intersect(const Polytope& p, const Polytope& q) {
  if (p.ambient_dim() != q.ambient_dim())
    throw invalid_input_error("ambient dimension mismatch");
  std::vector<AffCondition> rows = p.conditions();
  for (const auto& c : q.conditions()) rows.push_back(c);
  return Polytope::try_make(p.ambient_dim(), std::move(rows));
}

Polytope product(const Polytope& p, const Polytope& q) {
  int n = p.ambient_dim(), m = q.ambient_dim();
  std::vector<AffCondition> rows;
  for (const auto& c : p.conditions()) {
    AffCondition r = c;
    r.slope.resize(n + m, Int(0));
    rows.push_back(std::move(r));
  }
  for (const auto& c : q.conditions()) {
    AffCondition r;
    r.slope.assign(n + m, Int(0));
    for (int j = 0; j < m; ++j) r.slope[n + j] = c.slope[j];
    r.constant = c.constant;
    r.strict = c.strict;
    rows.push_back(std::move(r));
  }
  VecQ w = p.witness();
  VecQ wq = q.witness();
  w.insert(w.end(), wq.begin(), wq.end());
  return Polytope::with_witness(n + m, std::move(rows), std::move(w));
}

std::optional<Polytope> fiber_product(const Polytope& p, const IntAffineMap& f,
                                      const Polytope& q,
                                      const IntAffineMap& g) {
  if (f.source_dim() != p.ambient_dim() || g.source_dim() != q.ambient_dim())
    throw invalid_input_error("map source does not match polytope");
  if (f.target_dim() != g.target_dim())
    throw invalid_input_error("map targets differ");
  Polytope prod = product(p, q);
  int n = p.ambient_dim(), m = q.ambient_dim();
  std::vector<AffCondition> rows = prod.conditions();
  for (int i = 0; i < f.target_dim(); ++i) {
    AffCondition eq;
    eq.slope.assign(n + m, Int(0));
    for (int j = 0; j < n; ++j) eq.slope[j] = f.a.at(i, j);
    for (int j = 0; j < m; ++j) eq.slope[n + j] = -g.a.at(i, j);
    eq.constant = f.b[i] - g.b[i];
    AffCondition flip = eq;
    for (Int& s : flip.slope) s = -s;
    flip.constant = -flip.constant;
    rows.push_back(std::move(eq));
    rows.push_back(std::move(flip));
  }
  return Polytope::try_make(n + m, std::move(rows));
}

std::optional<Polytope> preimage(const IntAffineMap& f, const Polytope& p) {
  if (f.target_dim() != p.ambient_dim())
    throw invalid_input_error("map target does not match polytope");
  int n = f.source_dim();
  std::vector<AffCondition> rows;
  for (const auto& c : p.conditions()) {
    AffCondition r;
    r.slope = left_mul(c.slope, f.a);
    r.constant = c.constant + dot(c.slope, f.b);
    r.strict = c.strict;
    rows.push_back(std::move(r));
  }
  return Polytope::try_make(n, std::move(rows));
}

Polytope affine_image(const IntAffineMap& f, const Polytope& p) {
  if (f.source_dim() != p.ambient_dim())
    throw invalid_input_error("map source does not match polytope");
  int n = p.ambient_dim(), m = f.target_dim();

  if (n == m) {
    std::vector<VecQ> a(n, VecQ(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i][j] = Rat(f.a.at(i, j));
    auto inv = invert_rational(a);
    if (inv) {
      // y = a x + b  =>  rows transport exactly through a^-1.
      std::vector<AffCondition> rows;
      for (const auto& c : p.conditions()) {
        VecQ t(n, Rat(0));  // t = slope . a^-1
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) t[j] += Rat(c.slope[i]) * (*inv)[i][j];
        Rat k = c.constant - dot(t, f.b);
        rows.push_back(from_lin_row(t, k, c.strict));
      }
      return Polytope::with_witness(m, std::move(rows), map_point(f, p.witness()));
    }
  }

  // General case: project the graph { (y, x) : x in p, y = f(x) } onto y.
  LinearSystem sys;
  sys.num_vars = m + n;
  for (const auto& c : p.conditions())
    sys.constraints.push_back(to_lin(c, m + n, m));
  for (int i = 0; i < m; ++i) {
    LinConstraint eq;
    eq.coeffs.assign(m + n, Rat(0));
    eq.coeffs[i] = 1;
    for (int j = 0; j < n; ++j) eq.coeffs[m + j] = Rat(-f.a.at(i, j));
    eq.constant = -f.b[i];
    eq.rel = Rel::Eq;
    sys.constraints.push_back(std::move(eq));
  }
  LinearSystem shadow = project(sys, m);
  return Polytope::with_witness(m, from_system(shadow), map_point(f, p.witness()));
}

std::vector<VecI> generators_of_cone(const Polytope& cone) {
  int n = cone.ambient_dim();
  // Double description with the lineality space tracked separately: the
  // state is a spanning set of the lineality space plus one representative
  // per extreme ray of the pointed quotient. Cutting with a halfspace that
  // the lineality survives is a pure ray step, where only adjacent ray pairs
  // combine (zero-set test), keeping the representation minimal throughout.
  std::vector<VecI> lin;
  for (int i = 0; i < n; ++i) {
    VecI e(n, Int(0));
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<VecI> rays;
  std::vector<VecI> processed;  // slopes already cut, for zero-set tests
  for (const auto& c : cone.conditions()) {
    const VecI& a = c.slope;
    if (is_zero(a)) continue;
    std::size_t pivot = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        pivot = i;
        break;
      }
    if (pivot < lin.size()) {
      // The halfspace cuts the lineality space: one direction becomes an
      // extreme ray, the rest of the lineality and every existing ray are
      // sheared into the boundary hyperplane.
      VecI l0 = lin[pivot];
      if (dot(a, l0) < 0)
        for (Int& x : l0) x = -x;
      const Int av = dot(a, l0);
      std::vector<VecI> kept;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pivot) continue;
        VecI l = lin[i];
        const Int v = dot(a, l);
        for (int j = 0; j < n; ++j) l[j] = av * l[j] - v * l0[j];
        if (!is_zero(l)) kept.push_back(primitive(l));
      }
      lin = std::move(kept);
      for (VecI& r : rays) {
        const Int v = dot(a, r);
        for (int j = 0; j < n; ++j) r[j] = av * r[j] - v * l0[j];
        r = primitive(r);
      }
      rays.push_back(std::move(l0));
    } else {
      std::vector<std::vector<int>> zsets(rays.size());
      std::vector<Int> vals(rays.size());
      for (std::size_t i = 0; i < rays.size(); ++i) {
        vals[i] = dot(a, rays[i]);
        for (std::size_t k = 0; k < processed.size(); ++k)
          if (dot(processed[k], rays[i]) == 0)
            zsets[i].push_back(static_cast<int>(k));
      }
      std::vector<VecI> next;
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (vals[i] >= 0) next.push_back(rays[i]);
      for (std::size_t i = 0; i < rays.size(); ++i) {
        if (vals[i] <= 0) continue;
        for (std::size_t j = 0; j < rays.size(); ++j) {
          if (vals[j] >= 0) continue;
          // Adjacency: no third extreme ray may vanish on everything the
          // pair has in common, otherwise their smallest common face is
          // more than two-dimensional and the combination is redundant.
          std::vector<int> common;
          std::set_intersection(zsets[i].begin(), zsets[i].end(),
                                zsets[j].begin(), zsets[j].end(),
                                std::back_inserter(common));
          bool adjacent = true;
          for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
            if (k == i || k == j) continue;
            if (std::includes(zsets[k].begin(), zsets[k].end(),
                              common.begin(), common.end()))
              adjacent = false;
          }
          if (!adjacent) continue;
          VecI r(n);
          for (int t = 0; t < n; ++t)
            r[t] = vals[i] * rays[j][t] - vals[j] * rays[i][t];
          next.push_back(primitive(r));
          if (next.size() > kMaxGenerators)
            throw resource_limit_error(
                "cone generator set grew past the limit");
        }
      }
      rays = std::move(next);
    }
    processed.push_back(a);
  }
  std::set<VecI> out(rays.begin(), rays.end());
  for (const VecI& l : lin) {
    out.insert(l);
    VecI m = l;
    for (Int& x : m) x = -x;
    out.insert(std::move(m));
  }
  return std::vector<VecI>(out.begin(), out.end());
}

Polytope cone_from_generators(const std::vector<VecI>& rays, int ambient_dim) {
  // Dualize twice: the dual cone is cut out by the rays as slopes, and its
  // generators cut out the original hull.
  std::vector<AffCondition> dual_rows;
  for (const VecI& r : rays) {
    if (static_cast<int>(r.size()) != ambient_dim)
      throw invalid_input_error("ray width does not match ambient dim");
    AffCondition c;
    c.slope = r;
    dual_rows.push_back(std::move(c));
  }
  Polytope dual = Polytope::with_witness(ambient_dim, std::move(dual_rows),
                                         VecQ(ambient_dim, Rat(0)));
  std::vector<AffCondition> rows;
  for (const VecI& g : generators_of_cone(dual)) {
    AffCondition c;
    c.slope = g;
    rows.push_back(std::move(c));
  }
  return Polytope::with_witness(ambient_dim, std::move(rows),
                                VecQ(ambient_dim, Rat(0)));
}

Polytope translate(const Polytope& p, const VecQ& t) {
  if (static_cast<int>(t.size()) != p.ambient_dim())
    throw invalid_input_error("translation width does not match ambient dim");
  std::vector<AffCondition> rows;
  for (const auto& c : p.conditions()) {
    AffCondition r = c;
    r.constant = c.constant - dot(c.slope, t);
    rows.push_back(std::move(r));
  }
  VecQ w = p.witness();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += t[i];
  return Polytope::with_witness(p.ambient_dim(), std::move(rows),
                                std::move(w));
}

}  // namespace tropex
