#include "tropex/monoid.hpp"

#include "tropex/errors.hpp"
#include "tropex/linalg.hpp"
#include "tropex/linear_system.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

namespace tropex {
namespace {

// Above this many box points the Hilbert-basis enumeration refuses to run.
const Int kMaxHilbertBox = 2000000;

Rat dot_iq(const VecI& a, const VecQ& x) { return dot(a, x); }

// Is y a nonnegative combination of gens? Decided by the lambda-feasibility
// system.
bool in_conical_hull(const std::vector<VecI>& gens, const VecI& y) {
  if (gens.empty()) return is_zero(y);
  int dim = int(gens.front().size());
  LinearSystem sys;
  sys.num_vars = int(gens.size());
  for (int i = 0; i < sys.num_vars; ++i) {
    LinConstraint c;
    c.coeffs.assign(sys.num_vars, Rat(0));
    c.coeffs[i] = 1;
    sys.constraints.push_back(std::move(c));
  }
  for (int k = 0; k < dim; ++k) {
    LinConstraint c;
    c.coeffs.assign(sys.num_vars, Rat(0));
    for (int i = 0; i < sys.num_vars; ++i) c.coeffs[i] = Rat(gens[i][k]);
    c.constant = -Rat(y[k]);
    c.rel = Rel::Eq;
    sys.constraints.push_back(std::move(c));
  }
  return is_feasible(sys);
}

// Keep only generators not in the conical hull of the others (the box for
// the Hilbert search shrinks accordingly).
std::vector<VecI> irredundant_generators(std::vector<VecI> gens) {
  std::set<VecI> seen;
  std::vector<VecI> uniq;
  for (auto& g : gens) {
    VecI p = primitive(g);
    if (!is_zero(p) && seen.insert(p).second) uniq.push_back(p);
  }
  for (size_t i = 0; i < uniq.size();) {
    std::vector<VecI> others = uniq;
    others.erase(others.begin() + i);
    if (in_conical_hull(others, uniq[i]))
      uniq = std::move(others);
    else
      ++i;
  }
  return uniq;
}

// Hilbert basis of a pointed cone monoid: `gens` generate the cone and lie
// in the monoid, `member` decides monoid membership anywhere. Irreducible
// elements all lie in the box of the generator zonotope, so enumerating it
// suffices.
std::vector<VecI> hilbert_pointed(int dim, const std::vector<VecI>& gens,
                                  const std::function<bool(const VecI&)>& member) {
  if (dim == 0 || gens.empty()) return {};
  VecI lo(dim, Int(0)), hi(dim, Int(0));
  for (const auto& g : gens)
    for (int i = 0; i < dim; ++i) {
      if (g[i] < 0)
        lo[i] += g[i];
      else
        hi[i] += g[i];
    }
  Int count = 1;
  for (int i = 0; i < dim; ++i) count *= hi[i] - lo[i] + 1;
  if (count > kMaxHilbertBox)
    throw resource_limit_error("hilbert basis: generator box too large");

  std::vector<VecI> cands;
  VecI cur = lo;
  while (true) {
    if (!is_zero(cur) && member(cur)) cands.push_back(cur);
    int k = 0;
    while (k < dim) {
      cur[k] += 1;
      if (cur[k] <= hi[k]) break;
      cur[k] = lo[k];
      ++k;
    }
    if (k == dim) break;
  }

  std::vector<VecI> basis;
  for (const auto& y : cands) {
    bool reducible = false;
    for (const auto& z : cands) {
      if (z == y) continue;
      if (member(sub(y, z))) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.push_back(y);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

std::vector<AffCondition> embed_rows(const Polytope& p, int total, int at) {
  std::vector<AffCondition> out;
  for (const auto& c : p.conditions()) {
    AffCondition r;
    r.slope.assign(total, Int(0));
    for (int i = 0; i < p.ambient_dim(); ++i) r.slope[at + i] = c.slope[i];
    r.constant = c.constant;
    r.strict = c.strict;
    out.push_back(std::move(r));
  }
  return out;
}

void pin_coordinates(std::vector<AffCondition>& rows, int total, int from,
                     int upto) {
  for (int i = from; i < upto; ++i) {
    AffCondition a, b;
    a.slope.assign(total, Int(0));
    a.slope[i] = 1;
    b.slope.assign(total, Int(0));
    b.slope[i] = -1;
    rows.push_back(std::move(a));
    rows.push_back(std::move(b));
  }
}

}  // namespace

Rat evaluate(const IntAffineFunc& f, const VecQ& x) {
  return dot(f.slope, x) + f.constant;
}

bool af_contains(const Polytope& p, const IntAffineFunc& f) {
  if (int(f.slope.size()) != p.ambient_dim())
    throw invalid_input_error("af_contains: dimension mismatch");
  LinearSystem sys = p.as_system();
  LinConstraint bad;  // f < 0 somewhere?
  bad.coeffs = to_rational(negate(f.slope));
  bad.constant = -f.constant;
  bad.rel = Rel::Gt;
  sys.constraints.push_back(std::move(bad));
  return !is_feasible(sys);
}

bool af_strictly_positive(const Polytope& p, const IntAffineFunc& f) {
  if (int(f.slope.size()) != p.ambient_dim())
    throw invalid_input_error("af_strictly_positive: dimension mismatch");
  LinearSystem sys = p.as_system();
  LinConstraint bad;  // f <= 0 somewhere?
  bad.coeffs = to_rational(negate(f.slope));
  bad.constant = -f.constant;
  bad.rel = Rel::Ge;
  sys.constraints.push_back(std::move(bad));
  return !is_feasible(sys);
}

DualMonoid dual_hilbert_basis(const Polytope& p) {
  const int n = p.ambient_dim();
  if (n > 4)
    throw invalid_input_error("dual_hilbert_basis: ambient dimension above 4");
  Polytope cl = p.closure();
  if (!cl.is_cone_at(VecQ(n, Rat(0))))
    throw invalid_input_error(
        "dual_hilbert_basis: closure must be a cone about the origin");

  DualMonoid out;

  // Directions carrying no sign constraint, reported instead of being fed to
  // the Hilbert search: dual functionals of the line directions, plus
  // functionals vanishing on the whole span when the cone is lower
  // dimensional (the latter are two-sided elements of the dual monoid).
  std::vector<VecI> slopes;
  for (const auto& c : cl.conditions()) slopes.push_back(c.slope);
  std::vector<VecI> lines = slopes.empty()
                                ? [&] {
                                    std::vector<VecI> all;
                                    for (int i = 0; i < n; ++i) {
                                      VecI e(n, Int(0));
                                      e[i] = 1;
                                      all.push_back(e);
                                    }
                                    return all;
                                  }()
                                : kernel_basis(IntMat::from_rows(slopes));
  if (!lines.empty())
    for (auto& w : dual_functionals(lines, n)) out.units.push_back(w);

  std::vector<VecI> dirs = cl.direction_basis();
  std::vector<VecI> perp;
  if (dirs.empty()) {
    for (int i = 0; i < n; ++i) {
      VecI e(n, Int(0));
      e[i] = 1;
      perp.push_back(e);
    }
  } else if (int(dirs.size()) < n) {
    perp = kernel_basis(IntMat::from_rows(dirs));
  }
  for (const auto& f : perp) out.units.push_back(f);

  std::vector<VecI> primal = generators_of_cone(cl);
  auto member = [&](const VecI& y) {
    for (const auto& g : primal)
      if (dot(y, g) < 0) return false;
    return true;
  };
  std::vector<VecI> dual_gens = irredundant_generators(slopes);

  if (perp.empty()) {
    out.hilbert = hilbert_pointed(n, dual_gens, member);
    return out;
  }

  // Quotient out the two-sided part: change coordinates so it occupies the
  // first u slots, run the pointed search on the tail, and lift back with
  // zero head (the canonical representatives).
  SmithForm s = smith_normal_form(IntMat::from_rows(perp));
  const int u = int(perp.size());
  const int tail = n - u;
  auto to_tail = [&](const VecI& y) {
    VecI c = left_mul(y, s.v);
    return VecI(c.begin() + u, c.end());
  };
  auto from_tail = [&](const VecI& t) {
    VecI c(n, Int(0));
    for (int i = 0; i < tail; ++i) c[u + i] = t[i];
    return left_mul(c, s.vinv);
  };
  std::vector<VecI> tail_gens;
  for (const auto& g : dual_gens) tail_gens.push_back(to_tail(g));
  tail_gens = irredundant_generators(tail_gens);
  auto member_bar = [&](const VecI& t) { return member(from_tail(t)); };
  for (const auto& h : hilbert_pointed(tail, tail_gens, member_bar))
    out.hilbert.push_back(from_tail(h));
  std::sort(out.hilbert.begin(), out.hilbert.end());
  return out;
}

std::vector<IntAffineFunc> generators_mod_constants(const Polytope& p) {
  const int n = p.ambient_dim();
  if (n > 4)
    throw invalid_input_error(
        "generators_mod_constants: ambient dimension above 4");
  const int d = p.dim();
  if (d == 0) return {};

  // Work on the span in its own lattice coordinates, where the set is full
  // dimensional; functions on p modulo constants correspond one-to-one.
  std::vector<VecI> basis = p.direction_basis();
  IntMat bmat(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) bmat.at(i, j) = basis[j][i];
  std::vector<VecI> duals = dual_functionals(basis, n);
  IntMat wmat = IntMat::from_rows(duals);
  IntAffineMap chart{bmat, p.witness()};
  auto reduced_opt = preimage(chart, p);
  if (!reduced_opt)
    throw verification_error("generators_mod_constants: span chart misses p");
  Polytope reduced = *reduced_opt;
  Polytope cl = reduced.closure();

  // Vertices and recession rays of the closure, via its homogenization.
  std::vector<AffCondition> hrows;
  {
    AffCondition t;
    t.slope.assign(d + 1, Int(0));
    t.slope[d] = 1;
    hrows.push_back(std::move(t));
  }
  for (const auto& c : cl.conditions()) {
    AffCondition r;
    r.slope.assign(d + 1, Int(0));
    Int dn = den(c.constant);
    for (int i = 0; i < d; ++i) r.slope[i] = c.slope[i] * dn;
    r.slope[d] = num(c.constant);
    r.slope = primitive(r.slope);
    hrows.push_back(std::move(r));
  }
  VecQ hwit = cl.witness();
  hwit.push_back(1);
  Polytope homog = Polytope::with_witness(d + 1, std::move(hrows), hwit);

  std::set<VecQ> point_set;
  std::vector<VecI> rays;
  for (const auto& g : generators_of_cone(homog)) {
    if (is_zero(g)) continue;
    if (g[d] == 0) {
      rays.push_back(VecI(g.begin(), g.begin() + d));
    } else {
      VecQ pt(d);
      for (int i = 0; i < d; ++i) pt[i] = Rat(g[i], g[d]);
      point_set.insert(std::move(pt));
    }
  }
  std::vector<VecQ> points(point_set.begin(), point_set.end());
  if (points.empty())
    throw verification_error("generators_mod_constants: no vertex found");

  std::set<std::pair<VecI, Rat>> found;
  for (size_t j = 0; j < points.size(); ++j) {
    // Slopes whose minimum over the set is attained at points[j]: a pointed
    // cone because vertices and rays of a full-dimensional set span it.
    std::vector<AffCondition> rows;
    for (size_t l = 0; l < points.size(); ++l) {
      if (l == j) continue;
      VecQ diff(d);
      for (int i = 0; i < d; ++i) diff[i] = points[l][i] - points[j][i];
      Int dn = common_denominator(diff);
      AffCondition c;
      c.slope.resize(d);
      for (int i = 0; i < d; ++i) c.slope[i] = num(diff[i] * dn);
      c.slope = primitive(c.slope);
      if (is_zero(c.slope)) continue;
      rows.push_back(std::move(c));
    }
    for (const auto& r : rays) {
      AffCondition c;
      c.slope = r;
      rows.push_back(std::move(c));
    }
    Polytope region = Polytope::with_witness(d, rows, VecQ(d, Rat(0)));
    auto member = [&](const VecI& s) {
      for (size_t l = 0; l < points.size(); ++l) {
        if (l == j) continue;
        if (dot_iq(s, points[l]) < dot_iq(s, points[j])) return false;
      }
      for (const auto& r : rays)
        if (dot(s, r) < 0) return false;
      return true;
    };
    std::vector<VecI> gens =
        irredundant_generators(generators_of_cone(region));
    for (const auto& h : hilbert_pointed(d, gens, member)) {
      VecI slope = left_mul(h, wmat);
      Rat c = -dot_iq(h, points[j]) - dot_iq(slope, p.witness());
      found.insert({std::move(slope), std::move(c)});
    }
  }

  std::vector<IntAffineFunc> out;
  for (const auto& [slope, c] : found) out.push_back({slope, c});
  return out;
}

std::vector<StratumRecord> strata(const Polytope& p) {
  if (p.contains_line())
    throw invalid_input_error("strata: the set contains a line");
  Polytope cl = p.closure();
  const auto& rows = cl.conditions();
  std::vector<StratumRecord> out;
  const int d = p.dim();
  for (const auto& f : faces_of_closure(p)) {
    // The face's relative interior is where its active rows vanish and the
    // remaining closure rows stay strictly positive, so one joint system
    // decides whether it meets the set.
    LinearSystem sys = p.as_system();
    for (std::size_t j = 0; j < rows.size(); ++j) {
      bool active = std::binary_search(f.active.begin(), f.active.end(),
                                       static_cast<int>(j));
      LinConstraint lc;
      lc.coeffs = to_rational(rows[j].slope);
      lc.constant = rows[j].constant;
      lc.rel = active ? Rel::Eq : Rel::Gt;
      sys.constraints.push_back(std::move(lc));
    }
    if (!is_feasible(sys)) continue;
    out.push_back({f, d - f.dim});
  }
  return out;
}

AfMonoid stalk_ghost(const Polytope& p, const Face& f) {
  for (const auto& cand : faces_of_closure(p)) {
    if (cand.active == f.active && same_set(cand.poly, f.poly))
      return {f.poly, generators_mod_constants(f.poly)};
  }
  throw invalid_input_error("stalk_ghost: not a face of the given set");
}

void validate(const PresentedMonoid& m) {
  if (m.rank < 0) throw invalid_input_error("presented monoid: negative rank");
  if (m.in_ideal.size() != m.generators.size())
    throw invalid_input_error("presented monoid: ideal flags mismatch");
  for (const auto& g : m.generators)
    if (int(g.size()) != m.rank)
      throw invalid_input_error("presented monoid: generator rank mismatch");
  for (const auto& [lhs, rhs] : m.relations) {
    if (lhs.size() != m.generators.size() || rhs.size() != m.generators.size())
      throw invalid_input_error("presented monoid: relation arity mismatch");
    VecI a(m.rank, Int(0)), b(m.rank, Int(0));
    for (size_t i = 0; i < m.generators.size(); ++i) {
      if (lhs[i] < 0 || rhs[i] < 0)
        throw invalid_input_error("presented monoid: negative exponent");
      a = add(a, scale(lhs[i], m.generators[i]));
      b = add(b, scale(rhs[i], m.generators[i]));
    }
    if (a != b)
      throw invalid_input_error(
          "presented monoid: relation not satisfied by the embedding");
  }
}

bool is_positive_hom(const PresentedMonoid& m, const VecQ& h) {
  validate(m);
  if (int(h.size()) != m.rank)
    throw invalid_input_error("is_positive_hom: dimension mismatch");
  for (size_t i = 0; i < m.generators.size(); ++i) {
    Rat v = dot(m.generators[i], h);
    if (v < 0) return false;
    if (m.in_ideal[i] && v <= 0) return false;
  }
  return true;
}

bool PiecewiseMonoid::member(const VecI& g) const {
  if (int(g.size()) != rank)
    throw invalid_input_error("piecewise monoid: dimension mismatch");
  if (is_zero(g)) return true;
  VecQ x = to_rational(g);
  for (const auto& piece : pieces)
    if (piece.cone.contains(x)) return true;
  return false;
}

bool PiecewiseMonoid::member_ideal(const VecI& g) const {
  if (int(g.size()) != rank)
    throw invalid_input_error("piecewise monoid: dimension mismatch");
  if (is_zero(g)) return false;
  VecQ x = to_rational(g);
  for (const auto& piece : pieces)
    if (piece.in_ideal && piece.cone.contains(x)) return true;
  return false;
}

void validate(const PiecewiseMonoid& m) {
  if (m.rank < 0) throw invalid_input_error("piecewise monoid: negative rank");
  for (const auto& piece : m.pieces) {
    if (piece.cone.ambient_dim() != m.rank)
      throw invalid_input_error("piecewise monoid: piece rank mismatch");
    if (!piece.cone.is_cone_at(VecQ(m.rank, Rat(0))))
      throw invalid_input_error(
          "piecewise monoid: piece is not a cone about the origin");
  }
}

Polytope positive_hom_cone(const PiecewiseMonoid& m) {
  validate(m);
  std::vector<AffCondition> rows;
  for (const auto& piece : m.pieces) {
    for (const auto& g : generators_of_cone(piece.cone)) {
      if (is_zero(g)) continue;
      AffCondition c;
      c.slope = g;
      c.strict = piece.in_ideal && piece.cone.contains(to_rational(g));
      rows.push_back(std::move(c));
    }
  }
  auto cone = Polytope::try_make(m.rank, std::move(rows));
  if (!cone)
    throw invalid_input_error(
        "positive_hom_cone: no positive homomorphism exists");
  return *cone;
}

bool is_positive_hom(const PiecewiseMonoid& m, const VecQ& h) {
  if (int(h.size()) != m.rank)
    throw invalid_input_error("is_positive_hom: dimension mismatch");
  return positive_hom_cone(m).contains(h);
}

PiecewiseMonoid r_saturate(const PiecewiseMonoid& m) {
  Polytope hom = positive_hom_cone(m);
  std::vector<VecI> gens = generators_of_cone(hom);
  PiecewiseMonoid out = m;

  // Elements to adjoin: g with h(g) > 0 for every positive hom h. For fixed
  // g the functional h -> h(g) is nonnegative on cl(hom) exactly when
  // g . w >= 0 for all generators w, and vanishes on a face; g qualifies
  // exactly when that face misses hom. Group by which face that is.
  for (const auto& face : faces_of_closure(hom)) {
    if (intersect(face.poly, hom)) continue;
    std::vector<AffCondition> rows;
    for (const auto& w : gens) {
      if (is_zero(w)) continue;
      AffCondition c;
      c.slope = w;
      if (face.poly.contains(to_rational(w))) {
        AffCondition opp;
        opp.slope = negate(w);
        rows.push_back(std::move(c));
        rows.push_back(std::move(opp));
      } else {
        c.strict = true;
        rows.push_back(std::move(c));
      }
    }
    auto piece = Polytope::try_make(m.rank, std::move(rows));
    if (!piece) continue;
    bool covered = false;
    for (const auto& existing : out.pieces)
      if (subset_of(*piece, existing.cone)) {
        covered = true;
        break;
      }
    if (!covered) out.pieces.push_back({*piece, true});
  }
  return out;
}

PiecewiseMonoid cut_edge_monoid() {
  std::vector<AffCondition> rows(2);
  rows[0].slope = {1, 0};
  rows[0].strict = true;
  rows[1].slope = {0, 1};
  Polytope piece = Polytope::with_witness(2, std::move(rows), {1, 0});
  return {2, {{piece, true}}};
}

PiecewiseMonoid free_monoid(int k) {
  PiecewiseMonoid out;
  out.rank = k;
  for (int i = 0; i < k; ++i) {
    std::vector<AffCondition> rows;
    for (int j = 0; j < k; ++j) {
      AffCondition c;
      c.slope.assign(k, Int(0));
      c.slope[j] = 1;
      c.strict = (j == i);
      rows.push_back(std::move(c));
    }
    VecQ w(k, Rat(0));
    w[i] = 1;
    out.pieces.push_back(
        {Polytope::with_witness(k, std::move(rows), std::move(w)), true});
  }
  return out;
}

PiecewiseMonoid direct_sum(const PiecewiseMonoid& a, const PiecewiseMonoid& b) {
  PiecewiseMonoid out;
  out.rank = a.rank + b.rank;
  for (const auto& pa : a.pieces)
    for (const auto& pb : b.pieces)
      out.pieces.push_back(
          {product(pa.cone, pb.cone), pa.in_ideal || pb.in_ideal});
  for (const auto& pa : a.pieces) {
    std::vector<AffCondition> rows = embed_rows(pa.cone, out.rank, 0);
    pin_coordinates(rows, out.rank, a.rank, out.rank);
    VecQ w = pa.cone.witness();
    w.resize(out.rank, Rat(0));
    out.pieces.push_back(
        {Polytope::with_witness(out.rank, std::move(rows), std::move(w)),
         pa.in_ideal});
  }
  for (const auto& pb : b.pieces) {
    std::vector<AffCondition> rows = embed_rows(pb.cone, out.rank, a.rank);
    pin_coordinates(rows, out.rank, 0, a.rank);
    VecQ w(a.rank, Rat(0));
    for (const auto& q : pb.cone.witness()) w.push_back(q);
    out.pieces.push_back(
        {Polytope::with_witness(out.rank, std::move(rows), std::move(w)),
         pb.in_ideal});
  }
  return out;
}

}  // namespace tropex
