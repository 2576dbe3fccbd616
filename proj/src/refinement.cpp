#include "tropex/refinement.hpp"

#include "tropex/errors.hpp"
#include "tropex/linalg.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

namespace tropex {

namespace {

std::string point_str(const VecQ& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += rat_to_string(x[i]);
  }
  return out + ")";
}

// An affine expression for a point of some cell in terms of the refined
// moduli coordinates: x |-> a x + b with a integral.
struct PointExpr {
  IntMat a;
  VecQ b;
};

PointExpr expr_through(const IntAffineMap& inc, int offset, int ambient) {
  PointExpr e;
  e.a = IntMat(inc.target_dim(), ambient);
  for (int k = 0; k < inc.target_dim(); ++k)
    for (int j = 0; j < inc.source_dim(); ++j)
      e.a.at(k, offset + j) = inc.a.at(k, j);
  e.b = inc.b;
  return e;
}

PointExpr expr_block(int width, int offset, int ambient) {
  PointExpr e;
  e.a = IntMat(width, ambient);
  for (int k = 0; k < width; ++k) e.a.at(k, offset + k) = 1;
  e.b.assign(width, Rat(0));
  return e;
}

// cond evaluated at the expression: slope . (a x + b) + constant REL 0.
AffCondition at_expr(const AffCondition& cond, const PointExpr& e) {
  AffCondition out;
  out.slope = left_mul(cond.slope, e.a);
  out.constant = cond.constant + dot(cond.slope, e.b);
  out.strict = cond.strict;
  return out;
}

// cond evaluated at the midpoint of two expressed points, doubled to keep
// integral slopes: slope . (p(x) + q(x)) + 2 constant REL 0.
AffCondition at_midpoint(const AffCondition& cond, const PointExpr& p,
                         const PointExpr& q) {
  AffCondition out;
  out.slope = add(left_mul(cond.slope, p.a), left_mul(cond.slope, q.a));
  out.constant =
      cond.constant * 2 + dot(cond.slope, p.b) + dot(cond.slope, q.b);
  out.strict = cond.strict;
  return out;
}

void append_membership(std::vector<AffCondition>& rows, const Polytope& set,
                       const PointExpr& e) {
  for (const AffCondition& cond : set.conditions())
    rows.push_back(at_expr(cond, e));
}

bool direction_lost(const Polytope& cell, const IntAffineMap& inc) {
  std::vector<VecI> dirs = cell.direction_basis();
  std::vector<VecI> images;
  images.reserve(dirs.size());
  for (const VecI& d : dirs) images.push_back(mul(inc.a, d));
  return rank_of(IntMat::from_rows(images)) != static_cast<int>(dirs.size());
}

}  // namespace

SubdivisionReport validate_subdivision(const Subdivision& s) {
  int nt = static_cast<int>(s.target.cells.size());
  int nr = static_cast<int>(s.refined.cells.size());
  if (static_cast<int>(s.cell_map.size()) != nr)
    throw invalid_input_error(
        "the cell map must name a target for every refined cell");
  for (int r = 0; r < nr; ++r) {
    const CellImage& ci = s.cell_map[r];
    if (ci.target_cell < 0 || ci.target_cell >= nt)
      throw invalid_input_error("the cell map names a missing target cell");
    if (ci.inclusion.source_dim() != s.refined.cells[r].ambient_dim() ||
        ci.inclusion.target_dim() !=
            s.target.cells[ci.target_cell].ambient_dim())
      throw invalid_input_error("an inclusion has mismatched dimensions");
  }

  SubdivisionReport rep;
  rep.valid = true;
  auto complain = [&](std::string what) {
    rep.valid = false;
    rep.diagnostics.push_back(std::move(what));
  };

  // Per-cell conditions: closedness, injectivity on directions, containment.
  std::vector<Polytope> image;
  std::vector<std::vector<int>> group(nt);
  image.reserve(nr);
  for (int r = 0; r < nr; ++r) {
    const Polytope& cell = s.refined.cells[r];
    const std::string tag = "refined cell " + std::to_string(r);
    Polytope cl = cell.closure();
    if (!same_set(cell, cl)) complain(tag + " is not closed");
    if (direction_lost(cell, s.cell_map[r].inclusion))
      complain("the inclusion of " + tag + " collapses directions");
    Polytope img = affine_image(s.cell_map[r].inclusion, cell);
    if (!subset_of(img, s.target.cells[s.cell_map[r].target_cell]))
      complain(tag + " does not land inside target cell " +
               std::to_string(s.cell_map[r].target_cell));
    group[s.cell_map[r].target_cell].push_back(r);
    image.push_back(std::move(img));
  }
  if (!rep.valid) return rep;

  for (int t = 0; t < nt; ++t) {
    const std::string tname = "target cell " + std::to_string(t);
    if (group[t].empty()) {
      complain(tname + " is covered by no refined cell");
      continue;
    }
    int tdim = s.target.cells[t].dim();
    Polytope trel = s.target.cells[t].relative_interior();

    // Pairwise disjoint relative interiors.
    std::vector<Polytope> rel;
    rel.reserve(group[t].size());
    for (int r : group[t]) rel.push_back(image[r].relative_interior());
    for (std::size_t i = 0; i < group[t].size(); ++i)
      for (std::size_t j = i + 1; j < group[t].size(); ++j)
        if (auto meet = intersect(rel[i], rel[j]))
          complain("refined cells " + std::to_string(group[t][i]) + " and " +
                   std::to_string(group[t][j]) + " overlap inside " + tname +
                   " at " + point_str(meet->witness()));

    // The full-dimensional cells must cover: every facet that reaches the
    // interior of the target is shared with exactly one other
    // full-dimensional cell. Together with disjointness this pins the union
    // of the closed cells to the whole target, because an uncovered region
    // would have a codimension-one boundary inside the target, yet every
    // interior facet point is covered from both sides by the facet's two
    // cells. Lower-dimensional refined cells only decorate the shared
    // boundaries and carry no facet obligations.
    std::vector<int> tops;
    for (int r : group[t])
      if (image[r].dim() == tdim) tops.push_back(r);
    if (tops.empty()) {
      complain(tname + " has no full-dimensional refined cell");
      continue;
    }
    struct FacetRef {
      int cell;
      Polytope poly;
    };
    std::vector<FacetRef> facets;
    for (int r : tops) {
      std::vector<Face> faces = faces_of_closure(image[r]);
      for (Face& f : faces)
        if (f.dim == tdim - 1) facets.push_back({r, std::move(f.poly)});
    }
    for (const FacetRef& f : facets) {
      if (!intersect(f.poly, trel)) continue;  // lies in the boundary
      int partners = 0;
      for (const FacetRef& g : facets)
        if (g.cell != f.cell && same_set(g.poly, f.poly)) ++partners;
      if (partners != 1)
        complain("a facet of refined cell " + std::to_string(f.cell) +
                 " near " + point_str(f.poly.relint_witness()) + " in " +
                 tname + " has " + std::to_string(partners) +
                 " partners; interior facets need exactly one");
    }
  }
  return rep;
}

Subdivision identity_subdivision(const TropicalComplex& c) {
  Subdivision s;
  s.target = c;
  s.refined = c;
  for (std::size_t i = 0; i < c.cells.size(); ++i)
    s.cell_map.push_back(
        {static_cast<int>(i), identity_map(c.cells[i].ambient_dim())});
  return s;
}

Subdivision stellar_subdivide(const TropicalComplex& fan, const VecI& ray) {
  if (ray.empty() || is_zero(ray))
    throw invalid_input_error("the ray must be a nonzero integer vector");
  VecQ rq = to_rational(ray);
  Subdivision out;
  out.target = fan;
  bool hit = false;
  for (std::size_t t = 0; t < fan.cells.size(); ++t) {
    const Polytope& cell = fan.cells[t];
    int n = cell.ambient_dim();
    VecQ origin(n, Rat(0));
    if (!cell.is_cone_at(origin))
      throw invalid_input_error(
          "stellar subdivision needs cones at the origin");
    Polytope cl = cell.closure();
    if (!same_set(cell, cl))
      throw invalid_input_error("stellar subdivision needs closed cones");
    bool inside = n == static_cast<int>(ray.size()) && cell.contains(rq);
    if (!inside) {
      out.refined.cells.push_back(cell);
      out.cell_map.push_back({static_cast<int>(t), identity_map(n)});
      continue;
    }
    hit = true;

    std::vector<Face> faces = faces_of_closure(cell);
    int d = cell.dim();
    std::vector<Polytope> pieces;
    bool have_facet = false;
    for (const Face& f : faces) {
      if (f.dim != d - 1) continue;
      have_facet = true;
      if (f.poly.contains(rq)) continue;
      std::vector<VecI> gens = generators_of_cone(f.poly);
      gens.push_back(primitive(ray));
      pieces.push_back(cone_from_generators(gens, n));
    }
    if (!have_facet) {
      // The cone is its own span, so no facet can anchor the ray; split into
      // the two closed halves of a coordinate functional that is positive on
      // the ray. Their common boundary is a lattice hyperplane of the span
      // complementary to the ray.
      int i = 0;
      while (ray[i] == 0) ++i;
      Int lead = ray[i] > 0 ? Int(1) : Int(-1);
      for (int side : {0, 1}) {
        std::vector<AffCondition> conds = cell.conditions();
        AffCondition h;
        h.slope.assign(n, Int(0));
        h.slope[i] = side == 0 ? lead : -lead;
        conds.push_back(std::move(h));
        pieces.push_back(Polytope(n, std::move(conds)));
      }
    } else if (pieces.empty()) {
      // Every facet contains the ray, which therefore lies in the lineality
      // of the cone; there is nothing to split.
      pieces.push_back(cell);
    }
    for (Polytope& p : pieces) {
      out.refined.cells.push_back(std::move(p));
      out.cell_map.push_back({static_cast<int>(t), identity_map(n)});
    }
  }
  if (!hit) throw invalid_input_error("the ray lies outside every cell");
  return out;
}

Subdivision compose(const Subdivision& second, const Subdivision& first) {
  if (second.target.cells.size() != first.refined.cells.size())
    throw invalid_input_error(
        "the second subdivision must refine the cells the first produced");
  for (std::size_t i = 0; i < second.target.cells.size(); ++i)
    if (!same_set(second.target.cells[i], first.refined.cells[i]))
      throw invalid_input_error(
          "the second subdivision must refine the cells the first produced");
  Subdivision out;
  out.target = first.target;
  out.refined = second.refined;
  for (std::size_t r = 0; r < second.refined.cells.size(); ++r) {
    const CellImage& fine = second.cell_map[r];
    const CellImage& coarse = first.cell_map[fine.target_cell];
    out.cell_map.push_back(
        {coarse.target_cell, compose(coarse.inclusion, fine.inclusion)});
  }
  return out;
}

namespace {

// Chains describe how one internal edge threads through the strata of its
// cell's subdivision: stratum, carrier, stratum, ..., carrier, stratum,
// alternating. Each open subsegment travels inside the relative interior of
// its carrier and each switch point sits on a stratum that is a proper face
// of the carriers on both sides. A straight segment meets every convex
// stratum in a connected piece, so no carrier repeats, which bounds the
// search. Chains are stored as index sequences of odd length >= 3.
struct ChainSearch {
  const std::vector<char>* carrier_ok;
  const std::vector<std::vector<char>>* face_of;  // strict face relation
  long bound = 0;
  std::vector<std::vector<int>> chains;

  void grow(std::vector<int>& path, std::vector<char>& used, int carrier) {
    int n = static_cast<int>(carrier_ok->size());
    for (int i = 0; i < n; ++i) {
      if (i != carrier && !(*face_of)[i][carrier]) continue;
      path.push_back(i);
      chains.push_back(path);
      path.pop_back();
      if (static_cast<long>(chains.size()) > bound)
        throw resource_limit_error(
            "edge chain enumeration exceeds the candidate bound of " +
            std::to_string(bound));
      if (i == carrier) continue;  // interior endpoints end the chain
      for (int m = 0; m < n; ++m) {
        if (used[m] || !(*carrier_ok)[m] || m == i) continue;
        if (!(*face_of)[i][m]) continue;
        path.push_back(i);
        path.push_back(m);
        used[m] = 1;
        grow(path, used, m);
        used[m] = 0;
        path.pop_back();
        path.pop_back();
      }
    }
  }
};

}  // namespace

TypeRefinement induced_type_refinement(const CurveType& type,
                                       const Subdivision& s, long max_types) {
  SubdivisionReport srep = validate_subdivision(s);
  if (!srep.valid)
    throw invalid_input_error("invalid subdivision: " + srep.diagnostics[0]);
  const TropicalComplex& tc = s.target;
  TypeReport trep = validate_type(type, tc);
  if (!trep.valid)
    throw invalid_input_error("invalid curve type: " + trep.diagnostics[0]);
  ModuliPolytope orig = moduli_polytope(type, tc);
  if (!orig.polytope)
    throw invalid_input_error("the type has no realizations");

  int nt = static_cast<int>(tc.cells.size());
  TypeRefinement out;

  // Strata: the faces of all refined-cell images, deduplicated per target
  // cell and attached to one another along face relations.
  std::vector<std::vector<int>> strata_of(nt);
  for (std::size_t r = 0; r < s.refined.cells.size(); ++r) {
    int t = s.cell_map[r].target_cell;
    Polytope img = affine_image(s.cell_map[r].inclusion, s.refined.cells[r]);
    std::vector<Face> faces = faces_of_closure(img);
    for (const Face& f : faces) {
      bool known = false;
      for (int si : strata_of[t])
        if (same_set(out.strata.cells[si], f.poly)) {
          known = true;
          break;
        }
      if (!known) {
        strata_of[t].push_back(static_cast<int>(out.strata.cells.size()));
        out.strata.cells.push_back(f.poly);
        out.stratum_target.push_back(t);
      }
    }
  }
  int ns = static_cast<int>(out.strata.cells.size());
  std::vector<std::vector<char>> face_of(ns, std::vector<char>(ns, 0));
  for (int t = 0; t < nt; ++t)
    for (int a : strata_of[t])
      for (int b : strata_of[t]) {
        if (a == b || !subset_of(out.strata.cells[a], out.strata.cells[b]))
          continue;
        std::vector<Face> bf = faces_of_closure(out.strata.cells[b]);
        for (const Face& f : bf)
          if (f.dim == out.strata.cells[a].dim() &&
              same_set(f.poly, out.strata.cells[a])) {
            face_of[a][b] = 1;
            out.strata.attachments.push_back(
                {a, 0, b, identity_map(tc.cells[t].ambient_dim())});
            break;
          }
      }

  // Candidate strata per vertex: those whose relative interior meets the
  // relative interior of the vertex cell, so that the original membership
  // conditions can still hold.
  std::vector<std::vector<int>> vertex_candidates(type.vertices.size());
  for (std::size_t v = 0; v < type.vertices.size(); ++v) {
    int cv = type.vertices[v].cell;
    Polytope vrel = tc.cells[cv].relative_interior();
    for (int si : strata_of[cv]) {
      Polytope srel = out.strata.cells[si].relative_interior();
      if (intersect(srel, vrel)) vertex_candidates[v].push_back(si);
    }
  }

  // Incidence maps of the original type (unique because the complex is
  // basic, which validate_type has already confirmed).
  std::vector<std::pair<IntAffineMap, IntAffineMap>> inc_internal;
  for (const InternalEdge& e : type.internal_edges)
    inc_internal.push_back(
        {cell_identifications(tc, type.vertices[e.tail].cell, e.cell).front(),
         cell_identifications(tc, type.vertices[e.head].cell, e.cell)
             .front()});
  std::vector<IntAffineMap> inc_external;
  for (const ExternalEdge& e : type.external_edges)
    inc_external.push_back(
        cell_identifications(tc, type.vertices[e.vertex].cell, e.cell)
            .front());

  // Candidate chains per internal edge. A carrier must span the direction
  // of travel, otherwise no subsegment can move inside it.
  std::vector<std::vector<std::vector<int>>> edge_chains(
      type.internal_edges.size());
  for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
    const InternalEdge& e = type.internal_edges[q];
    const std::vector<int>& ss = strata_of[e.cell];
    std::vector<char> carrier_ok(ss.size(), 0);
    for (std::size_t m = 0; m < ss.size(); ++m) {
      std::vector<VecI> dirs = out.strata.cells[ss[m]].direction_basis();
      if (dirs.empty()) continue;
      IntMat cols = transpose(IntMat::from_rows(dirs));
      carrier_ok[m] = solve_rational(cols, to_rational(e.u)).has_value();
    }
    std::vector<std::vector<char>> local_face(
        ss.size(), std::vector<char>(ss.size(), 0));
    for (std::size_t a = 0; a < ss.size(); ++a)
      for (std::size_t b = 0; b < ss.size(); ++b)
        local_face[a][b] = face_of[ss[a]][ss[b]];
    ChainSearch search;
    search.carrier_ok = &carrier_ok;
    search.face_of = &local_face;
    search.bound = max_types;
    for (std::size_t s0 = 0; s0 < ss.size(); ++s0)
      for (std::size_t m = 0; m < ss.size(); ++m) {
        if (!carrier_ok[m]) continue;
        if (s0 != m && !local_face[s0][m]) continue;
        std::vector<int> path = {static_cast<int>(s0), static_cast<int>(m)};
        std::vector<char> used(ss.size(), 0);
        used[m] = 1;
        search.grow(path, used, static_cast<int>(m));
      }
    // Translate local stratum positions back to global stratum names.
    for (std::vector<int>& chain : search.chains)
      for (int& x : chain) x = ss[x];
    edge_chains[q] = std::move(search.chains);
  }

  // The candidate count is the product of the per-vertex and per-edge
  // choices; refuse to enumerate past the bound.
  Int total = 1;
  for (const std::vector<int>& cand : vertex_candidates)
    total *= Int(cand.size());
  for (const std::vector<std::vector<int>>& chains : edge_chains)
    total *= Int(chains.size());
  if (total > Int(max_types))
    throw resource_limit_error("the refinement enumerates " + total.str() +
                               " candidate types, more than the bound of " +
                               std::to_string(max_types));

  // Original-cell interiors, reused across candidates.
  std::vector<Polytope> cell_relint;
  for (const Polytope& cell : tc.cells)
    cell_relint.push_back(cell.relative_interior());

  int pos_end = 0;
  for (std::size_t v = 0; v < type.vertices.size(); ++v)
    pos_end = orig.vertex_offset[v] + orig.vertex_width[v];

  std::vector<std::size_t> pick(type.vertices.size() +
                                type.internal_edges.size());
  auto limit_of = [&](std::size_t i) {
    return i < type.vertices.size()
               ? vertex_candidates[i].size()
               : edge_chains[i - type.vertices.size()].size();
  };
  bool any = total > 0;

  while (any) {
    std::vector<int> vertex_stratum;
    for (std::size_t v = 0; v < type.vertices.size(); ++v)
      vertex_stratum.push_back(vertex_candidates[v][pick[v]]);
    std::vector<std::vector<int>> edge_chain;
    for (std::size_t q = 0; q < type.internal_edges.size(); ++q)
      edge_chain.push_back(edge_chains[q][pick[type.vertices.size() + q]]);

    // Extended layout: original vertex blocks, inserted switch-point blocks
    // per edge, then the per-segment lengths per edge.
    std::vector<int> ins_off(type.internal_edges.size());
    int at = pos_end;
    for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
      int segments = static_cast<int>(edge_chain[q].size()) / 2;
      ins_off[q] = at;
      at +=
          (segments - 1) * tc.cells[type.internal_edges[q].cell].ambient_dim();
    }
    std::vector<int> len_off(type.internal_edges.size());
    for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
      len_off[q] = at;
      at += static_cast<int>(edge_chain[q].size()) / 2;
    }
    int ext_amb = at;

    std::vector<AffCondition> rows;

    // Vertices: inside the relative interior of their cell and of their
    // assigned stratum.
    for (std::size_t v = 0; v < type.vertices.size(); ++v) {
      PointExpr pv =
          expr_block(orig.vertex_width[v], orig.vertex_offset[v], ext_amb);
      append_membership(rows, cell_relint[type.vertices[v].cell], pv);
      Polytope srel =
          out.strata.cells[vertex_stratum[v]].relative_interior();
      append_membership(rows, srel, pv);
    }

    // Internal edges: one straight subsegment per carrier. The endpoints of
    // a subsegment lie in the closure of the carrier because their strata
    // are faces of it, so placing the doubled midpoint inside the doubled
    // relative interior keeps the whole open subsegment there by convexity.
    // Switch points are interior points of the composed segment and so must
    // also stay inside the relative interior of the original edge cell.
    for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
      const InternalEdge& e = type.internal_edges[q];
      const std::vector<int>& chain = edge_chain[q];
      int segments = static_cast<int>(chain.size()) / 2;
      int amb = tc.cells[e.cell].ambient_dim();

      std::vector<PointExpr> stop;  // switch points w_0 .. w_segments
      stop.push_back(expr_through(inc_internal[q].first,
                                  orig.vertex_offset[e.tail], ext_amb));
      for (int i = 1; i < segments; ++i)
        stop.push_back(expr_block(amb, ins_off[q] + (i - 1) * amb, ext_amb));
      stop.push_back(expr_through(inc_internal[q].second,
                                  orig.vertex_offset[e.head], ext_amb));

      for (int i = 0; i < segments; ++i) {
        int li = len_off[q] + i;

        AffCondition pos;
        pos.slope.assign(ext_amb, Int(0));
        pos.slope[li] = 1;
        pos.strict = true;
        rows.push_back(std::move(pos));

        // w_{i+1} - w_i = l_i u, as opposite pairs of weak rows.
        for (int k = 0; k < amb; ++k) {
          AffCondition eq;
          eq.slope.assign(ext_amb, Int(0));
          for (int j = 0; j < ext_amb; ++j)
            eq.slope[j] = stop[i + 1].a.at(k, j) - stop[i].a.at(k, j);
          eq.slope[li] -= e.u[k];
          eq.constant = stop[i + 1].b[k] - stop[i].b[k];
          AffCondition opp = eq;
          for (Int& x : opp.slope) x = -x;
          opp.constant = -eq.constant;
          rows.push_back(std::move(eq));
          rows.push_back(std::move(opp));
        }

        Polytope crel =
            out.strata.cells[chain[2 * i + 1]].relative_interior();
        for (const AffCondition& cond : crel.conditions())
          rows.push_back(at_midpoint(cond, stop[i], stop[i + 1]));
        for (const AffCondition& cond : cell_relint[e.cell].conditions())
          rows.push_back(at_midpoint(cond, stop[i], stop[i + 1]));
      }
      for (int i = 0; i <= segments; ++i) {
        Polytope srel = out.strata.cells[chain[2 * i]].relative_interior();
        append_membership(rows, srel, stop[i]);
        if (i > 0 && i < segments)
          append_membership(rows, cell_relint[e.cell], stop[i]);
      }
    }

    // External edges keep the conditions of the original type: the point
    // one step along the direction lies in the relative interior of the
    // original edge cell, which recedes along the direction.
    for (std::size_t k = 0; k < type.external_edges.size(); ++k) {
      const ExternalEdge& e = type.external_edges[k];
      PointExpr pe = expr_through(inc_external[k],
                                  orig.vertex_offset[e.vertex], ext_amb);
      for (const AffCondition& cond : cell_relint[e.cell].conditions()) {
        AffCondition row = at_expr(cond, pe);
        row.constant += Rat(dot(cond.slope, e.u));
        rows.push_back(std::move(row));
      }
    }

    if (auto p = Polytope::try_make(ext_amb, std::move(rows))) {
      IntAffineMap proj;
      proj.a = IntMat(orig.ambient, ext_amb);
      proj.b.assign(orig.ambient, Rat(0));
      for (int j = 0; j < pos_end; ++j) proj.a.at(j, j) = 1;
      for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
        int segments = static_cast<int>(edge_chain[q].size()) / 2;
        for (int i = 0; i < segments; ++i)
          proj.a.at(orig.length_offset[q], len_off[q] + i) = 1;
      }
      out.pieces.push_back({std::move(vertex_stratum), std::move(edge_chain),
                            std::move(*p), std::move(proj)});
    }

    // Next candidate.
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < limit_of(i)) break;
      pick[i] = 0;
    }
    if (i == pick.size()) any = false;
  }

  out.moduli.target.cells.push_back(orig.polytope->closure());
  for (const RefinedModuliPiece& piece : out.pieces) {
    out.moduli.refined.cells.push_back(piece.interior.closure());
    out.moduli.cell_map.push_back({0, piece.to_original});
  }
  return out;
}

}  // namespace tropex
