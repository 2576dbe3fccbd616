#include "tropex/atlas.hpp"

#include "tropex/errors.hpp"
#include "tropex/linalg.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>

namespace tropex {

namespace {

Polytope orthant(int n) {
  std::vector<AffCondition> rows;
  for (int i = 0; i < n; ++i) {
    AffCondition c;
    c.slope.assign(n, Int(0));
    c.slope[i] = 1;
    rows.push_back(std::move(c));
  }
  return Polytope::with_witness(n, std::move(rows), VecQ(n, Rat(0)));
}

// Affine maps agree on the affine hull of `face` iff they agree at one point
// and on a basis of the direction space.
bool agree_on(const IntAffineMap& m1, const IntAffineMap& m2,
              const Polytope& face) {
  if (map_point(m1, face.witness()) != map_point(m2, face.witness()))
    return false;
  for (const VecI& d : face.direction_basis())
    if (mul(m1.a, d) != mul(m2.a, d)) return false;
  return true;
}

// Index of the face whose solution set equals `poly`, or -1.
int find_face(const std::vector<Face>& faces, const Polytope& poly) {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].dim == poly.dim() && same_set(faces[i].poly, poly))
      return static_cast<int>(i);
  return -1;
}

// Coordinates of a * (each src direction) in the target direction basis;
// empty when some image leaves the target lattice.
std::optional<IntMat> lattice_map_matrix(const std::vector<VecI>& d_src,
                                         const std::vector<VecI>& d_tgt,
                                         const IntMat& a) {
  if (d_tgt.empty()) {
    for (const VecI& d : d_src)
      for (const Int& x : mul(a, d))
        if (x != 0) return std::nullopt;
    return IntMat(0, static_cast<int>(d_src.size()));
  }
  IntMat t = transpose(IntMat::from_rows(d_tgt));
  IntMat out(static_cast<int>(d_tgt.size()), static_cast<int>(d_src.size()));
  for (std::size_t k = 0; k < d_src.size(); ++k) {
    auto x = solve_rational(t, to_rational(mul(a, d_src[k])));
    if (!x) return std::nullopt;
    for (std::size_t r = 0; r < x->size(); ++r) {
      if (den((*x)[r]) != 1) return std::nullopt;
      out.at(static_cast<int>(r), static_cast<int>(k)) = num((*x)[r]);
    }
  }
  return out;
}

// Does `iso` send src_face onto dst_face bijectively, carrying the src
// face's direction lattice onto the dst face's?
bool unimodular_between(const Polytope& src_face, const Polytope& dst_face,
                        const IntAffineMap& iso) {
  std::vector<VecI> ds = src_face.direction_basis();
  std::vector<VecI> dt = dst_face.direction_basis();
  if (ds.size() != dt.size()) return false;
  if (ds.empty()) return true;
  auto m = lattice_map_matrix(ds, dt, iso.a);
  if (!m) return false;
  for (const Int& e : elementary_divisors(*m))
    if (e != 1) return false;
  return rank_of(*m) == static_cast<int>(ds.size());
}

// Inverse of `iso` as an integral affine map valid on iso's image of
// src_face (and its affine hull). Requires the restriction to be
// unimodular, which makes the image directions a saturated basis.
IntAffineMap face_inverse(const Polytope& src_face, const IntAffineMap& iso) {
  int n_src = src_face.ambient_dim();
  int n_tgt = iso.target_dim();
  std::vector<VecI> ds = src_face.direction_basis();
  VecQ w = src_face.witness();
  IntAffineMap inv;
  inv.a = IntMat(n_src, n_tgt);
  if (!ds.empty()) {
    std::vector<VecI> us;
    for (const VecI& d : ds) us.push_back(mul(iso.a, d));
    std::vector<VecI> fn = dual_functionals(us, n_tgt);
    for (int r = 0; r < n_src; ++r)
      for (int c = 0; c < n_tgt; ++c) {
        Int s = 0;
        for (std::size_t k = 0; k < ds.size(); ++k)
          s += ds[k][r] * fn[k][c];
        inv.a.at(r, c) = s;
      }
  }
  VecQ back = mul(inv.a, map_point(iso, w));
  inv.b.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) inv.b[i] = w[i] - back[i];
  return inv;
}

// One face-to-face identification, with faces resolved to indices.
struct Ident {
  int e1, f1, e2, f2;
  IntAffineMap iso;
};

using Node = std::pair<int, int>;  // (entity, face index)
using ArrowMap = std::map<Node, std::vector<std::pair<Node, IntAffineMap>>>;

// Expand identifications to every subface (the restriction of a face
// isomorphism to a subface is again one, landing on a face of the target)
// and add inverses, so that plain endpoint-matching composition generates
// every composite identification.
ArrowMap build_arrows(const std::vector<std::vector<Face>>& faces,
                      const std::vector<Ident>& idents) {
  ArrowMap arrows;
  for (const Ident& id : idents) {
    const Face& top = faces[id.e1][id.f1];
    for (std::size_t fi = 0; fi < faces[id.e1].size(); ++fi) {
      const Face& sub = faces[id.e1][fi];
      if (!std::includes(sub.active.begin(), sub.active.end(),
                         top.active.begin(), top.active.end()))
        continue;
      Polytope img = affine_image(id.iso, sub.poly);
      int gi = find_face(faces[id.e2], img);
      if (gi < 0)
        throw invalid_input_error(
            "identification does not carry faces to faces");
      arrows[{id.e1, static_cast<int>(fi)}].push_back({{id.e2, gi}, id.iso});
      arrows[{id.e2, gi}].push_back(
          {{id.e1, static_cast<int>(fi)}, face_inverse(sub.poly, id.iso)});
    }
  }
  return arrows;
}

// Every composite identification around a cycle must restrict to the
// identity; equivalently, any two composites between the same pair of faces
// must agree.
void check_cycles(const std::vector<Polytope>& entities,
                  const std::vector<std::vector<Face>>& faces,
                  const ArrowMap& arrows) {
  std::set<Node> visited;
  for (const auto& [root, unused] : arrows) {
    if (visited.count(root)) continue;
    const Polytope& root_face = faces[root.first][root.second].poly;
    std::map<Node, IntAffineMap> reached;
    reached.emplace(root, identity_map(entities[root.first].ambient_dim()));
    std::queue<Node> todo;
    todo.push(root);
    visited.insert(root);
    while (!todo.empty()) {
      Node u = todo.front();
      todo.pop();
      auto it = arrows.find(u);
      if (it == arrows.end()) continue;
      for (const auto& [v, m] : it->second) {
        IntAffineMap cand = compose(m, reached.at(u));
        auto found = reached.find(v);
        if (found == reached.end()) {
          reached.emplace(v, std::move(cand));
          visited.insert(v);
          todo.push(v);
        } else if (!agree_on(found->second, cand, root_face)) {
          throw invalid_input_error(
              "inconsistent gluing cycle through chart " +
              std::to_string(v.first) + " face " + std::to_string(v.second));
        }
      }
    }
  }
}

void check_map_shape(const IntAffineMap& m, int src, int tgt,
                     const char* what) {
  if (m.source_dim() != src || m.target_dim() != tgt ||
      static_cast<int>(m.b.size()) != tgt)
    throw invalid_input_error(std::string(what) +
                              " has mismatched dimensions");
}

std::vector<std::vector<Face>> face_cache(const std::vector<Polytope>& ps) {
  std::vector<std::vector<Face>> out;
  out.reserve(ps.size());
  for (const Polytope& p : ps) out.push_back(faces_of_closure(p));
  return out;
}

}  // namespace

void validate(const Atlas& a) {
  auto faces = face_cache(a.charts);
  std::vector<Ident> idents;
  for (const Gluing& g : a.gluings) {
    if (g.chart_a < 0 || g.chart_a >= static_cast<int>(a.charts.size()) ||
        g.chart_b < 0 || g.chart_b >= static_cast<int>(a.charts.size()))
      throw invalid_input_error("gluing chart index out of range");
    if (g.face_a < 0 ||
        g.face_a >= static_cast<int>(faces[g.chart_a].size()) ||
        g.face_b < 0 || g.face_b >= static_cast<int>(faces[g.chart_b].size()))
      throw invalid_input_error("gluing face index out of range");
    check_map_shape(g.iso, a.charts[g.chart_a].ambient_dim(),
                    a.charts[g.chart_b].ambient_dim(), "gluing map");
    const Face& fa = faces[g.chart_a][g.face_a];
    const Face& fb = faces[g.chart_b][g.face_b];
    if (!same_set(affine_image(g.iso, fa.poly), fb.poly))
      throw invalid_input_error("gluing image is not the stated face");
    if (!unimodular_between(fa.poly, fb.poly, g.iso))
      throw invalid_input_error("gluing does not respect the face lattices");
    idents.push_back({g.chart_a, g.face_a, g.chart_b, g.face_b, g.iso});
  }
  check_cycles(a.charts, faces, build_arrows(faces, idents));
}

void validate(const TropicalComplex& c) {
  auto faces = face_cache(c.cells);
  for (const Attachment& at : c.attachments) {
    if (at.cell < 0 || at.cell >= static_cast<int>(c.cells.size()) ||
        at.target < 0 || at.target >= static_cast<int>(c.cells.size()))
      throw invalid_input_error("attachment cell index out of range");
    if (at.face < 0 || at.face >= static_cast<int>(faces[at.cell].size()))
      throw invalid_input_error("attachment face index out of range");
    check_map_shape(at.iso, c.cells[at.cell].ambient_dim(),
                    c.cells[at.target].ambient_dim(), "attachment map");
    const Face& fa = faces[at.cell][at.face];
    Polytope img = affine_image(at.iso, fa.poly);
    int gi = find_face(faces[at.target], img);
    if (gi < 0)
      throw invalid_input_error(
          "attachment image is not a face of the target cell");
    if (!unimodular_between(fa.poly, faces[at.target][gi].poly, at.iso))
      throw invalid_input_error(
          "attachment does not respect the face lattices");
  }
}

Representability is_log_representable(const Atlas& a) {
  Representability r{true, true};
  for (const Polytope& p : a.charts) {
    bool line = p.contains_line();
    if (line) r.exploded_representable = false;
    if (line || !p.is_cone()) r.explodable = false;
  }
  return r;
}

TropicalComplex tropical_part(const Atlas& a) {
  validate(a);
  TropicalComplex out;
  out.cells = a.charts;
  for (const Gluing& g : a.gluings)
    out.attachments.push_back({g.chart_a, g.face_a, g.chart_b, g.iso});
  return out;
}

TropicalComplex trop_closure(const TropicalComplex& c) {
  TropicalComplex out;
  for (const Polytope& p : c.cells) out.cells.push_back(p.closure());
  out.attachments = c.attachments;  // closure shares all closure faces
  return out;
}

bool is_basic_space(const TropicalComplex& c) {
  validate(c);
  auto faces = face_cache(c.cells);
  std::vector<Ident> idents;
  for (const Attachment& at : c.attachments) {
    Polytope img =
        affine_image(at.iso, faces[at.cell][at.face].poly);
    idents.push_back({at.cell, at.face, at.target,
                      find_face(faces[at.target], img), at.iso});
  }
  ArrowMap arrows = build_arrows(faces, idents);
  for (std::size_t cell = 0; cell < c.cells.size(); ++cell) {
    // Walk every composite identification of this whole cell (its top face,
    // index 0) with faces of other cells; two distinct arrivals in one cell
    // are two distinct identifications.
    Node root{static_cast<int>(cell), 0};
    const Polytope& root_face = faces[cell][0].poly;
    std::map<Node, IntAffineMap> reached;
    reached.emplace(root, identity_map(c.cells[cell].ambient_dim()));
    std::map<int, int> per_cell;
    per_cell[root.first] = 1;
    std::queue<Node> todo;
    todo.push(root);
    while (!todo.empty()) {
      Node u = todo.front();
      todo.pop();
      auto it = arrows.find(u);
      if (it == arrows.end()) continue;
      for (const auto& [v, m] : it->second) {
        IntAffineMap cand = compose(m, reached.at(u));
        auto found = reached.find(v);
        if (found == reached.end()) {
          if (++per_cell[v.first] > 1) return false;
          reached.emplace(v, std::move(cand));
          todo.push(v);
        } else if (!agree_on(found->second, cand, root_face)) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<IntAffineMap> cell_identifications(const TropicalComplex& c,
                                               int from, int to) {
  validate(c);
  if (from < 0 || from >= static_cast<int>(c.cells.size()) || to < 0 ||
      to >= static_cast<int>(c.cells.size()))
    throw invalid_input_error("cell index out of range");
  auto faces = face_cache(c.cells);
  std::vector<Ident> idents;
  for (const Attachment& at : c.attachments) {
    Polytope img = affine_image(at.iso, faces[at.cell][at.face].poly);
    idents.push_back({at.cell, at.face, at.target,
                      find_face(faces[at.target], img), at.iso});
  }
  ArrowMap arrows = build_arrows(faces, idents);
  Node root{from, 0};
  std::map<Node, IntAffineMap> reached;
  reached.emplace(root, identity_map(c.cells[from].ambient_dim()));
  std::queue<Node> todo;
  todo.push(root);
  while (!todo.empty()) {
    Node u = todo.front();
    todo.pop();
    auto it = arrows.find(u);
    if (it == arrows.end()) continue;
    for (const auto& [v, m] : it->second) {
      if (reached.find(v) != reached.end()) continue;
      reached.emplace(v, compose(m, reached.at(u)));
      todo.push(v);
    }
  }
  std::vector<IntAffineMap> out;
  for (const auto& [node, map] : reached)
    if (node.first == to) out.push_back(map);
  return out;
}

bool integral_iso_onto(const Polytope& src, const Polytope& dst,
                       const IntAffineMap& iso) {
  if (iso.source_dim() != src.ambient_dim() ||
      iso.target_dim() != dst.ambient_dim() ||
      static_cast<int>(iso.b.size()) != dst.ambient_dim())
    return false;
  return same_set(affine_image(iso, src), dst) &&
         unimodular_between(src, dst, iso);
}

ImmersionReport verify_immersion(const TropicalComplex& c,
                                 const std::vector<IntAffineMap>& candidate) {
  validate(c);
  if (candidate.size() != c.cells.size())
    throw invalid_input_error("one candidate map per cell is required");
  int n = candidate.empty() ? 0 : candidate[0].target_dim();
  for (std::size_t i = 0; i < candidate.size(); ++i)
    check_map_shape(candidate[i], c.cells[i].ambient_dim(), n,
                    "candidate map");
  auto faces = face_cache(c.cells);
  for (const Attachment& at : c.attachments)
    if (!agree_on(candidate[at.cell], compose(candidate[at.target], at.iso),
                  faces[at.cell][at.face].poly))
      throw invalid_input_error(
          "candidate maps disagree along an attachment");

  ImmersionReport rep;
  rep.quasi_generated = true;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    std::vector<VecI> imgs;
    for (const VecI& d : c.cells[i].direction_basis())
      imgs.push_back(mul(candidate[i].a, d));
    if (rank_of(IntMat::from_rows(imgs)) != static_cast<int>(imgs.size()))
      rep.quasi_generated = false;
  }
  rep.almost_generated = rep.quasi_generated;
  if (rep.almost_generated) {
    Polytope target = orthant(n);
    for (std::size_t i = 0; i < c.cells.size(); ++i)
      if (!subset_of(affine_image(candidate[i], c.cells[i]), target))
        rep.almost_generated = false;
  }
  return rep;
}

TropicalComplex dual_intersection_complex(
    int components, const std::vector<std::vector<int>>& intersections) {
  if (components < 0) throw invalid_input_error("negative component count");
  std::set<std::vector<int>> listed;
  std::vector<std::vector<int>> sets;
  for (std::vector<int> s : intersections) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int i : s)
      if (i < 0 || i >= components)
        throw invalid_input_error("intersection names a missing component");
    if (s.size() < 2)
      throw invalid_input_error(
          "an intersection must involve at least two components");
    if (!listed.insert(s).second)
      throw invalid_input_error("duplicate intersection");
    sets.push_back(std::move(s));
  }
  for (const auto& s : sets) {
    int k = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::vector<int> sub;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) sub.push_back(s[i]);
      if (sub.size() >= 2 && !listed.count(sub))
        throw invalid_input_error(
            "intersection list is not closed under subsets");
    }
  }
  std::sort(sets.begin(), sets.end(),
            [](const std::vector<int>& x, const std::vector<int>& y) {
              if (x.size() != y.size()) return x.size() < y.size();
              return x < y;
            });

  TropicalComplex out;
  out.cells.push_back(Polytope(0, {}));  // the interior vertex
  for (int i = 0; i < components; ++i) out.cells.push_back(orthant(1));
  std::map<std::vector<int>, int> cell_of;
  for (const auto& s : sets) {
    cell_of[s] = static_cast<int>(out.cells.size());
    out.cells.push_back(orthant(static_cast<int>(s.size())));
  }

  auto axis_map = [](const std::vector<int>& sub,
                     const std::vector<int>& super) {
    IntAffineMap m;
    m.a = IntMat(static_cast<int>(super.size()),
                 static_cast<int>(sub.size()));
    for (std::size_t k = 0; k < sub.size(); ++k) {
      int pos = static_cast<int>(
          std::lower_bound(super.begin(), super.end(), sub[k]) -
          super.begin());
      m.a.at(pos, static_cast<int>(k)) = 1;
    }
    m.b.assign(super.size(), Rat(0));
    return m;
  };

  for (int i = 0; i < components; ++i) {
    IntAffineMap m;
    m.a = IntMat(1, 0);
    m.b = {Rat(0)};
    out.attachments.push_back({0, 0, 1 + i, m});
  }
  for (const auto& s : sets) {
    for (int i : s) out.attachments.push_back({1 + i, 0, cell_of[s], axis_map({i}, s)});
    for (const auto& t : sets)
      if (t.size() < s.size() &&
          std::includes(s.begin(), s.end(), t.begin(), t.end()))
        out.attachments.push_back({cell_of[t], 0, cell_of[s], axis_map(t, s)});
  }
  return out;
}

std::vector<VecI> integral_vectors(const Atlas& a, const ExplodedPoint& p) {
  if (p.chart < 0 || p.chart >= static_cast<int>(a.charts.size()))
    throw invalid_input_error("point names a missing chart");
  const Polytope& chart = a.charts[p.chart];
  if (static_cast<int>(p.trop.size()) != chart.ambient_dim())
    throw invalid_input_error("tropical coordinate width mismatch");
  if (!chart.contains(p.trop))
    throw invalid_input_error("tropical coordinate lies outside the chart");
  if (static_cast<int>(p.angular.size()) != chart.ambient_dim())
    throw invalid_input_error("one angular coordinate per dimension");
  for (const auto& z : p.angular)
    if (z == std::complex<double>(0.0, 0.0))
      throw invalid_input_error("angular coordinates must be nonzero");
  auto faces = faces_of_closure(chart);
  int idx = face_through(chart, faces, p.trop);
  return faces[idx].poly.direction_basis();
}

void validate(const AtlasMorphism& f) {
  validate(f.source);
  validate(f.target);
  if (f.chart_map.size() != f.source.charts.size() ||
      f.maps.size() != f.source.charts.size())
    throw invalid_input_error("one chart assignment and map per chart");
  for (std::size_t i = 0; i < f.source.charts.size(); ++i) {
    int t = f.chart_map[i];
    if (t < 0 || t >= static_cast<int>(f.target.charts.size()))
      throw invalid_input_error("morphism targets a missing chart");
    check_map_shape(f.maps[i], f.source.charts[i].ambient_dim(),
                    f.target.charts[t].ambient_dim(), "morphism map");
    if (!subset_of(affine_image(f.maps[i], f.source.charts[i]),
                   f.target.charts[t]))
      throw invalid_input_error("chart image leaves the target chart");
  }
  // Each source gluing must commute with some identification on the target
  // side (the identity when both charts share a target).
  auto src_faces = face_cache(f.source.charts);
  auto tgt_faces = face_cache(f.target.charts);
  for (const Gluing& g : f.source.gluings) {
    const Polytope& fa = src_faces[g.chart_a][g.face_a].poly;
    int ta = f.chart_map[g.chart_a], tb = f.chart_map[g.chart_b];
    IntAffineMap lhs = compose(f.maps[g.chart_b], g.iso);
    bool ok = false;
    if (ta == tb) ok = agree_on(lhs, f.maps[g.chart_a], fa);
    for (const Gluing& h : f.target.gluings) {
      if (ok) break;
      if (h.chart_a == ta && h.chart_b == tb)
        ok = agree_on(lhs, compose(h.iso, f.maps[g.chart_a]), fa);
      if (h.chart_a == tb && h.chart_b == ta)
        ok = agree_on(
            lhs,
            compose(face_inverse(tgt_faces[h.chart_a][h.face_a].poly, h.iso),
                    f.maps[g.chart_a]),
            fa);
    }
    if (!ok)
      throw invalid_input_error("morphism does not commute with a gluing");
  }
}

FamilyReport family_report(const AtlasMorphism& f) {
  validate(f);
  FamilyReport rep;
  auto fail = [&](std::size_t chart, const std::string& what) {
    rep.failures.push_back("chart " + std::to_string(chart) + ": " + what);
  };
  for (std::size_t i = 0; i < f.source.charts.size(); ++i) {
    const Polytope& src = f.source.charts[i];
    const Polytope& tgt = f.target.charts[f.chart_map[i]];
    const IntAffineMap& m = f.maps[i];
    if (!same_set(affine_image(m, src), tgt))
      fail(i, "does not map onto the target chart");

    // Faces must land on faces.
    auto tfaces = faces_of_closure(tgt);
    for (const Face& face : faces_of_closure(src))
      if (find_face(tfaces, affine_image(m, face.poly)) < 0)
        fail(i, "a face maps to a non-face");

    // The map of direction lattices must have torsion-free cokernel, so
    // every integer tangent vector downstairs is hit by one upstairs.
    auto lm = lattice_map_matrix(src.direction_basis(),
                                 tgt.direction_basis(), m.a);
    if (!lm) {
      fail(i, "the direction lattice map is not integral");
    } else {
      bool bad = false;
      for (const Int& e : elementary_divisors(*lm))
        if (e != 1) {
          rep.torsion.push_back(e);
          bad = true;
        }
      if (bad) fail(i, "the direction lattice map has torsion");
    }

    // The pullback on affine functions must be injective on the span of the
    // target's function monoid, i.e. on functionals vanishing on the
    // lineality directions of the target.
    Polytope tcl = tgt.closure();
    std::vector<VecI> slopes;
    for (const auto& c : tcl.conditions()) slopes.push_back(c.slope);
    std::vector<VecI> lineality =
        slopes.empty()
            ? [&] {
                std::vector<VecI> full;
                for (int k = 0; k < tgt.ambient_dim(); ++k) {
                  VecI e(tgt.ambient_dim(), Int(0));
                  e[k] = 1;
                  full.push_back(std::move(e));
                }
                return full;
              }()
            : kernel_basis(IntMat::from_rows(slopes));
    std::vector<VecI> span;
    if (lineality.empty()) {
      for (int k = 0; k < tgt.ambient_dim(); ++k) {
        VecI e(tgt.ambient_dim(), Int(0));
        e[k] = 1;
        span.push_back(std::move(e));
      }
    } else {
      span = kernel_basis(IntMat::from_rows(lineality));
    }
    std::vector<VecI> pulled;
    for (const VecI& w : span) pulled.push_back(left_mul(w, m.a));
    if (rank_of(IntMat::from_rows(pulled)) != static_cast<int>(span.size()))
      fail(i, "dual function map is not injective");

    // Completeness on the tropical side: the generic fiber is closed (and
    // nonempty, which surjectivity already gives).
    VecQ t = tgt.relint_witness();
    std::vector<AffCondition> rows = src.conditions();
    for (int k = 0; k < m.target_dim(); ++k) {
      AffCondition lo, hi;
      lo.slope = m.a.row(k);
      lo.constant = m.b[k] - t[k];
      hi.slope = lo.slope;
      for (Int& x : hi.slope) x = -x;
      hi.constant = t[k] - m.b[k];
      rows.push_back(std::move(lo));
      rows.push_back(std::move(hi));
    }
    auto fib = Polytope::try_make(src.ambient_dim(), std::move(rows));
    if (!fib)
      fail(i, "empty generic fiber");
    else if (!same_set(*fib, fib->closure()))
      fail(i, "generic fiber is not closed");
  }
  rep.family = rep.failures.empty();
  return rep;
}

bool is_family(const AtlasMorphism& f) { return family_report(f).family; }

TropicalComplex fiber(const AtlasMorphism& f, int target_chart,
                      const VecQ& t) {
  validate(f);
  if (target_chart < 0 ||
      target_chart >= static_cast<int>(f.target.charts.size()))
    throw invalid_input_error("fiber over a missing chart");
  const Polytope& tgt = f.target.charts[target_chart];
  if (static_cast<int>(t.size()) != tgt.ambient_dim())
    throw invalid_input_error("fiber point width mismatch");
  if (!tgt.contains(t))
    throw invalid_input_error("fiber point lies outside the target chart");

  TropicalComplex out;
  std::vector<int> cell_of(f.source.charts.size(), -1);
  for (std::size_t i = 0; i < f.source.charts.size(); ++i) {
    if (f.chart_map[i] != target_chart) continue;
    const Polytope& src = f.source.charts[i];
    const IntAffineMap& m = f.maps[i];
    std::vector<AffCondition> rows = src.conditions();
    for (int k = 0; k < m.target_dim(); ++k) {
      AffCondition lo, hi;
      lo.slope = m.a.row(k);
      lo.constant = m.b[k] - t[k];
      hi.slope = lo.slope;
      for (Int& x : hi.slope) x = -x;
      hi.constant = t[k] - m.b[k];
      rows.push_back(std::move(lo));
      rows.push_back(std::move(hi));
    }
    auto cell = Polytope::try_make(src.ambient_dim(), std::move(rows));
    if (!cell) continue;
    cell_of[i] = static_cast<int>(out.cells.size());
    out.cells.push_back(std::move(*cell));
  }

  // A gluing between surviving charts restricts to the fibers whenever the
  // glued face still meets both; keep the restriction when it is a face of
  // each fiber, which is the clean (and generic) situation.
  auto src_faces = face_cache(f.source.charts);
  for (const Gluing& g : f.source.gluings) {
    int ca = cell_of[g.chart_a], cb = cell_of[g.chart_b];
    if (ca < 0 || cb < 0) continue;
    auto cut = intersect(out.cells[ca], src_faces[g.chart_a][g.face_a].poly);
    if (!cut) continue;
    auto fa = faces_of_closure(out.cells[ca]);
    int fi = find_face(fa, *cut);
    if (fi < 0) continue;
    Polytope img = affine_image(g.iso, *cut);
    if (find_face(faces_of_closure(out.cells[cb]), img) < 0) continue;
    out.attachments.push_back({ca, fi, cb, g.iso});
  }
  return out;
}

AtlasMorphism node_model(const Polytope& p, const IntAffineFunc& rho) {
  if (!af_contains(p, rho))
    throw invalid_input_error(
        "node model needs a nonnegative length function");
  int m = p.ambient_dim();
  std::vector<AffCondition> rows;
  for (const auto& c : p.conditions()) {
    AffCondition r = c;
    r.slope.push_back(Int(0));
    rows.push_back(std::move(r));
  }
  AffCondition lo;
  lo.slope.assign(m + 1, Int(0));
  lo.slope[m] = 1;
  rows.push_back(std::move(lo));
  AffCondition hi;
  hi.slope = rho.slope;
  hi.slope.push_back(Int(-1));
  hi.constant = rho.constant;
  rows.push_back(std::move(hi));
  VecQ w = p.witness();
  w.push_back(Rat(0));
  Polytope total = Polytope::with_witness(m + 1, std::move(rows), std::move(w));

  AtlasMorphism f;
  f.source = {{std::move(total)}, {}, AtlasMode::exploded};
  f.target = {{p}, {}, AtlasMode::exploded};
  f.chart_map = {0};
  IntAffineMap proj;
  proj.a = IntMat(m, m + 1);
  for (int i = 0; i < m; ++i) proj.a.at(i, i) = 1;
  proj.b.assign(m, Rat(0));
  f.maps = {std::move(proj)};
  return f;
}

AtlasMorphism marked_point_model(const Polytope& p) {
  int m = p.ambient_dim();
  AtlasMorphism f;
  f.source = {{product(p, orthant(1))}, {}, AtlasMode::exploded};
  f.target = {{p}, {}, AtlasMode::exploded};
  f.chart_map = {0};
  IntAffineMap proj;
  proj.a = IntMat(m, m + 1);
  for (int i = 0; i < m; ++i) proj.a.at(i, i) = 1;
  proj.b.assign(m, Rat(0));
  f.maps = {std::move(proj)};
  return f;
}

}  // namespace tropex
