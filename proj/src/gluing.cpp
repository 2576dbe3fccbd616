#include "tropex/gluing.hpp"

#include "tropex/errors.hpp"
#include "tropex/linalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tropex {

namespace {

AffCondition zero_extend(const AffCondition& cond, int ambient) {
  AffCondition out;
  out.slope = cond.slope;
  out.slope.resize(ambient, Int(0));
  out.constant = cond.constant;
  out.strict = cond.strict;
  return out;
}

// A condition on a cell, read through an affine map of the big coordinates
// into that cell.
AffCondition through_map(const AffCondition& cond, const IntAffineMap& f) {
  AffCondition out;
  out.slope = left_mul(cond.slope, f.a);
  out.constant = cond.constant + dot(cond.slope, f.b);
  out.strict = cond.strict;
  return out;
}

// The cone of directions entering the closure of p at one of its points:
// conditions inactive at the point fall away, active ones lose their
// constants.
Polytope tangent_cone(const Polytope& p, const VecQ& x) {
  Polytope cl = p.closure();
  std::vector<AffCondition> rows;
  for (const AffCondition& cond : cl.conditions()) {
    if (dot(cond.slope, x) + cond.constant != Rat(0)) continue;
    AffCondition row;
    row.slope = cond.slope;
    rows.push_back(std::move(row));
  }
  return Polytope(p.ambient_dim(), std::move(rows));
}

}  // namespace

MarkedModuli marked_moduli(const CurveType& type, const TropicalComplex& c) {
  ModuliPolytope base = moduli_polytope(type, c);
  if (!base.polytope) throw invalid_input_error("the type has no realizations");
  int k = static_cast<int>(type.internal_edges.size());
  int n = base.ambient + k;

  std::vector<AffCondition> rows;
  for (const AffCondition& cond : base.polytope->conditions())
    rows.push_back(zero_extend(cond, n));

  std::vector<int> marks;
  for (int q = 0; q < k; ++q) {
    int tq = base.ambient + q;
    marks.push_back(tq);
    AffCondition lo;
    lo.slope.assign(n, Int(0));
    lo.slope[tq] = 1;
    lo.strict = true;
    rows.push_back(std::move(lo));
    AffCondition hi;
    hi.slope.assign(n, Int(0));
    hi.slope[base.length_offset[q]] = 1;
    hi.slope[tq] = -1;
    hi.strict = true;
    rows.push_back(std::move(hi));
  }
  return {std::move(base), Polytope(n, std::move(rows)), std::move(marks), n};
}

std::vector<CutType> cut(const CurveType& type) {
  std::vector<CutType> out;
  for (std::size_t v = 0; v < type.vertices.size(); ++v) {
    CutType ct;
    ct.component.vertices = {type.vertices[v]};
    ct.root = 0;
    ct.base_vertex = {static_cast<int>(v)};
    for (const ExternalEdge& e : type.external_edges)
      if (e.vertex == static_cast<int>(v))
        ct.component.external_edges.push_back({0, e.cell, e.u});
    for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
      const InternalEdge& e = type.internal_edges[q];
      if (e.tail == static_cast<int>(v))
        ct.cuts.push_back({0, e.cell, e.u, true, static_cast<int>(q)});
      if (e.head == static_cast<int>(v))
        ct.cuts.push_back({0, e.cell, e.u, false, static_cast<int>(q)});
    }
    out.push_back(std::move(ct));
  }
  return out;
}

CutModuli cut_moduli(const CutType& ct, const TropicalComplex& c) {
  int cells = static_cast<int>(c.cells.size());
  int verts = static_cast<int>(ct.component.vertices.size());
  for (const CutHalfEdge& h : ct.cuts) {
    if (h.cell < 0 || h.cell >= cells)
      throw invalid_input_error("cut stub names a missing cell");
    if (h.vertex < 0 || h.vertex >= verts)
      throw invalid_input_error("cut stub names a missing vertex");
    int amb = c.cells[h.cell].ambient_dim();
    if (static_cast<int>(h.u.size()) != amb || is_zero(h.u))
      throw invalid_input_error(
          "cut stub needs a nonzero direction in its cell");
  }

  ModuliPolytope m = moduli_polytope(ct.component, c);
  int k = static_cast<int>(ct.cuts.size());
  int n = m.ambient + k;

  CutModuli out;
  out.ambient = n;
  for (int i = 0; i < k; ++i) out.cut_offset.push_back(m.ambient + i);

  // The far endpoint of each stub: the vertex, displaced by the stub length
  // along the severed direction (against it for incoming stubs).
  for (int i = 0; i < k; ++i) {
    const CutHalfEdge& h = ct.cuts[i];
    std::vector<IntAffineMap> ids =
        cell_identifications(c, ct.component.vertices[h.vertex].cell, h.cell);
    if (ids.empty())
      throw invalid_input_error(
          "cut stub " + std::to_string(i) +
          ": the vertex cell is not a face of the cut cell");
    const IntAffineMap& inc = ids.front();
    int amb = c.cells[h.cell].ambient_dim();
    IntAffineMap ev;
    ev.a = IntMat(amb, n);
    ev.b = inc.b;
    for (int r = 0; r < amb; ++r) {
      for (int j = 0; j < inc.source_dim(); ++j)
        ev.a.at(r, m.vertex_offset[h.vertex] + j) = inc.a.at(r, j);
      ev.a.at(r, out.cut_offset[i]) = h.outgoing ? h.u[r] : -h.u[r];
    }
    out.evaluation.push_back(std::move(ev));
  }

  if (m.polytope) {
    std::vector<AffCondition> rows;
    for (const AffCondition& cond : m.polytope->conditions())
      rows.push_back(zero_extend(cond, n));
    for (int i = 0; i < k; ++i) {
      AffCondition pos;
      pos.slope.assign(n, Int(0));
      pos.slope[out.cut_offset[i]] = 1;
      pos.strict = true;
      rows.push_back(std::move(pos));

      // The far endpoint lies in the relative interior of the severed cell;
      // the stub between it and the vertex follows by convexity, since the
      // vertex occupies a face of that cell's closure.
      Polytope ri = c.cells[ct.cuts[i].cell].relative_interior();
      for (const AffCondition& cond : ri.conditions())
        rows.push_back(through_map(cond, out.evaluation[i]));
    }
    out.polytope = Polytope::try_make(n, std::move(rows));
  }
  out.component = std::move(m);
  return out;
}

GlueResult glue(const CurveType& type, const TropicalComplex& c) {
  MarkedModuli marked = marked_moduli(type, c);
  std::vector<CutType> cts = cut(type);
  std::vector<CutModuli> cms;
  std::vector<int> block;
  int n = 0;
  for (std::size_t v = 0; v < cts.size(); ++v) {
    cms.push_back(cut_moduli(cts[v], c));
    if (!cms.back().polytope)
      throw invalid_input_error("the cut piece at vertex " +
                                std::to_string(v) + " has empty moduli");
    block.push_back(n);
    n += cms.back().ambient;
  }

  Polytope prod = *cms[0].polytope;
  for (std::size_t v = 1; v < cms.size(); ++v)
    prod = product(prod, *cms[v].polytope);

  // The two stubs of every severed edge, widened to the product coordinates.
  auto widen = [&](const IntAffineMap& e, int v) {
    IntAffineMap w;
    w.a = IntMat(e.target_dim(), n);
    w.b = e.b;
    for (int r = 0; r < e.target_dim(); ++r)
      for (int j = 0; j < e.source_dim(); ++j)
        w.a.at(r, block[v] + j) = e.a.at(r, j);
    return w;
  };

  int k = static_cast<int>(type.internal_edges.size());
  std::vector<AffCondition> eqs;
  std::vector<VecI> matching;  // linear parts, for the independence check
  std::vector<int> out_stub(k, -1), in_stub(k, -1);
  for (int q = 0; q < k; ++q) {
    const InternalEdge& e = type.internal_edges[q];
    for (std::size_t i = 0; i < cts[e.tail].cuts.size(); ++i)
      if (cts[e.tail].cuts[i].base_edge == q && cts[e.tail].cuts[i].outgoing)
        out_stub[q] = static_cast<int>(i);
    for (std::size_t i = 0; i < cts[e.head].cuts.size(); ++i)
      if (cts[e.head].cuts[i].base_edge == q && !cts[e.head].cuts[i].outgoing)
        in_stub[q] = static_cast<int>(i);

    IntAffineMap eo = widen(cms[e.tail].evaluation[out_stub[q]], e.tail);
    IntAffineMap ei = widen(cms[e.head].evaluation[in_stub[q]], e.head);
    for (int r = 0; r < eo.target_dim(); ++r) {
      AffCondition eq;
      eq.slope.assign(n, Int(0));
      for (int j = 0; j < n; ++j) eq.slope[j] = eo.a.at(r, j) - ei.a.at(r, j);
      eq.constant = eo.b[r] - ei.b[r];
      matching.push_back(eq.slope);
      AffCondition opp;
      opp.slope = negate(eq.slope);
      opp.constant = -eq.constant;
      eqs.push_back(std::move(eq));
      eqs.push_back(std::move(opp));
    }
  }

  std::optional<Polytope> fib = intersect(prod, Polytope(n, std::move(eqs)));
  if (!fib)
    throw verification_error(
        "matching the stub endpoints empties the product of the cut moduli");

  // The dictionary: vertex positions pass through, each length is the sum of
  // its two stub lengths, each mark is the outgoing one.
  IntAffineMap dict;
  dict.a = IntMat(marked.ambient, n);
  dict.b = VecQ(marked.ambient, Rat(0));
  for (std::size_t v = 0; v < cts.size(); ++v) {
    int src = block[v] + cms[v].component.vertex_offset[cts[v].root];
    for (int j = 0; j < marked.base.vertex_width[v]; ++j)
      dict.a.at(marked.base.vertex_offset[v] + j, src + j) = 1;
  }
  for (int q = 0; q < k; ++q) {
    const InternalEdge& e = type.internal_edges[q];
    int so = block[e.tail] + cms[e.tail].cut_offset[out_stub[q]];
    int si = block[e.head] + cms[e.head].cut_offset[in_stub[q]];
    dict.a.at(marked.base.length_offset[q], so) = 1;
    dict.a.at(marked.base.length_offset[q], si) = 1;
    dict.a.at(marked.mark_offset[q], so) = 1;
  }

  // Independence of the matching equations on the product's directions: the
  // dimension then drops by exactly the ambient dimension of every severed
  // cell.
  bool transverse = true;
  if (!matching.empty()) {
    std::vector<VecI> dirs = prod.direction_basis();
    IntMat pairing(static_cast<int>(matching.size()),
                   static_cast<int>(dirs.size()));
    for (std::size_t r = 0; r < matching.size(); ++r)
      for (std::size_t d = 0; d < dirs.size(); ++d)
        pairing.at(static_cast<int>(r), static_cast<int>(d)) =
            dot(matching[r], dirs[d]);
    transverse = rank_of(pairing) == static_cast<int>(matching.size());
  }

  bool verified = integral_iso_onto(*fib, marked.polytope, dict);
  return GlueResult{std::move(cts),  std::move(cms),    std::move(*fib),
                    std::move(dict), std::move(marked), transverse,
                    verified};
}

TropicalComplex local_fan(const TropicalComplex& c, int cell,
                          const VecQ& point) {
  if (cell < 0 || cell >= static_cast<int>(c.cells.size()))
    throw invalid_input_error("local fan: no such cell");
  if (static_cast<int>(point.size()) != c.cells[cell].ambient_dim())
    throw invalid_input_error("local fan: the point has the wrong width");
  if (!relint_contains(c.cells[cell], point))
    throw invalid_input_error(
        "local fan: the point must lie in the relative interior of its cell");
  if (!is_basic_space(c))
    throw invalid_input_error(
        "local fan: the complex is not basic, so face identifications are "
        "ambiguous");

  TropicalComplex out;
  std::vector<int> out_index(c.cells.size(), -1);
  std::vector<VecQ> at_point(c.cells.size());
  for (std::size_t t = 0; t < c.cells.size(); ++t) {
    std::vector<IntAffineMap> ids =
        cell_identifications(c, cell, static_cast<int>(t));
    if (ids.empty()) continue;
    at_point[t] = map_point(ids.front(), point);
    out_index[t] = static_cast<int>(out.cells.size());
    out.cells.push_back(tangent_cone(c.cells[t], at_point[t]));
  }

  // Attachments between surviving cells carry over with their translations
  // dropped, provided the attached face is seen by the point.
  for (const Attachment& at : c.attachments) {
    int ci = out_index[at.cell], ti = out_index[at.target];
    if (ci < 0 || ti < 0) continue;
    std::vector<Face> faces = faces_of_closure(c.cells[at.cell]);
    const Polytope& fp = faces[at.face].poly;
    if (!fp.contains(at_point[at.cell])) continue;
    Polytope tf = tangent_cone(fp, at_point[at.cell]);
    std::vector<Face> nf = faces_of_closure(out.cells[ci]);
    int idx = -1;
    for (std::size_t i = 0; i < nf.size(); ++i)
      if (same_set(nf[i].poly, tf)) {
        idx = static_cast<int>(i);
        break;
      }
    if (idx < 0)
      throw verification_error(
          "local fan: a surviving face has no counterpart cone");
    IntAffineMap iso;
    iso.a = at.iso.a;
    iso.b = VecQ(at.iso.target_dim(), Rat(0));
    out.attachments.push_back({ci, idx, ti, std::move(iso)});
  }
  return out;
}

CutEdgeMonoids cut_edge_monoids() {
  CutEdgeMonoids out;
  out.cut_monoid = cut_edge_monoid();

  // One side of the severed node, in coordinates (a, b, c): powers of the
  // coordinate function alone, anything that vanishes away from the node
  // (positive b or c), and the diagonal witness a = b that pins the joint
  // vanishing of the first two exponents. At a general point of the edge
  // only the first piece survives the structure map.
  {
    auto weak = [](VecI s) {
      AffCondition c;
      c.slope = std::move(s);
      return c;
    };
    auto strict = [](VecI s) {
      AffCondition c;
      c.slope = std::move(s);
      c.strict = true;
      return c;
    };
    Polytope alone = Polytope::with_witness(
        3,
        {strict({1, 0, 0}), weak({0, 1, 0}), weak({0, -1, 0}),
         weak({0, 0, 1}), weak({0, 0, -1})},
        {1, 0, 0});
    Polytope off = Polytope::with_witness(
        3,
        {strict({1, 0, 0}), weak({0, 1, 0}), weak({0, 0, 1}),
         strict({0, 1, 1})},
        {1, 1, 1});
    Polytope far = Polytope::with_witness(
        3, {weak({1, 0, 0}), weak({-1, 0, 0}), weak({0, 1, 0}),
            strict({0, 0, 1})},
        {0, 0, 1});
    Polytope diag = Polytope::with_witness(
        3, {weak({1, -1, 0}), weak({-1, 1, 0}), strict({1, 0, 0}),
            weak({0, 0, 1})},
        {1, 1, 0});
    out.side_monoid.rank = 3;
    out.side_monoid.pieces = {{std::move(alone), false},
                              {std::move(off), true},
                              {std::move(far), true},
                              {std::move(diag), true}};
  }

  out.node_monoid.rank = 3;
  out.node_monoid.generators = {
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}};
  out.node_monoid.in_ideal = {false, false, true, true};
  out.node_monoid.relations = {{{1, 1, 0, 0}, {0, 0, 1, 1}}};
  validate(out.node_monoid);

  out.generator_inclusion =
      IntMat::from_rows({{1, 0, 1, 0}, {0, 1, 1, 0}, {0, 1, 0, 1}});
  out.inclusion.a = IntMat::from_rows({{1, 0, 1}, {0, 1, 1}, {0, 1, 0}});
  out.inclusion.b = VecQ(3, Rat(0));
  out.side_selector = {-1, 0, 1};

  // The lattice map must realize the exponent map on every generator.
  for (std::size_t i = 0; i < out.node_monoid.generators.size(); ++i)
    for (int r = 0; r < 3; ++r) {
      Int got = 0;
      for (int j = 0; j < 3; ++j)
        got += out.inclusion.a.at(r, j) * out.node_monoid.generators[i][j];
      if (got != out.generator_inclusion.at(r, static_cast<int>(i)))
        throw verification_error(
            "cut edge monoids: the inclusion disagrees with its exponent "
            "form");
    }

  // The node homomorphisms nonnegative on the selector...
  std::vector<AffCondition> lhs_rows;
  for (std::size_t i = 0; i < out.node_monoid.generators.size(); ++i) {
    AffCondition row;
    row.slope = out.node_monoid.generators[i];
    row.strict = out.node_monoid.in_ideal[i];
    lhs_rows.push_back(std::move(row));
  }
  {
    AffCondition sel;
    sel.slope = out.side_selector;
    lhs_rows.push_back(std::move(sel));
  }
  Polytope lhs = Polytope::with_witness(3, std::move(lhs_rows), {1, 1, 1});

  // ...must be exactly the pullbacks of the side's positive homomorphisms.
  Polytope side_homs = positive_hom_cone(out.side_monoid);
  IntAffineMap pull;
  pull.a = transpose(out.inclusion.a);
  pull.b = VecQ(3, Rat(0));
  bool cones_match = same_set(lhs, affine_image(pull, side_homs));

  // The side members must agree with the saturated sum on a lattice box.
  PiecewiseMonoid sat =
      r_saturate(direct_sum(out.cut_monoid, free_monoid(1)));
  bool box_match = true;
  for (int a = 0; a <= 6 && box_match; ++a)
    for (int b = 0; b <= 6 && box_match; ++b)
      for (int cc = 0; cc <= 6 && box_match; ++cc) {
        VecI g = {a, b, cc};
        bool expect = a > 0 || cc > 0 ? true : b == 0;
        box_match = out.side_monoid.member(g) == expect &&
                    sat.member(g) == expect;
      }

  out.verified = cones_match && box_match;
  return out;
}

CurveType random_plane_tree(std::mt19937_64& rng, int vertices) {
  if (vertices < 1)
    throw invalid_input_error("a tree needs at least one vertex");
  auto direction = [&rng] {
    VecI u(2, Int(0));
    while (is_zero(u)) {
      u[0] = Int(static_cast<int>(rng() % 7)) - 3;
      u[1] = Int(static_cast<int>(rng() % 7)) - 3;
    }
    return primitive(u);
  };
  CurveType t;
  for (int v = 0; v < vertices; ++v) t.vertices.push_back({0});
  for (int v = 1; v < vertices; ++v) {
    InternalEdge e;
    e.cell = 0;
    e.u = direction();
    int w = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
    if (rng() & 1) {
      e.tail = w;
      e.head = v;
    } else {
      e.tail = v;
      e.head = w;
    }
    t.internal_edges.push_back(std::move(e));
  }
  for (int v = 0; v < vertices; ++v)
    t.external_edges.push_back({v, 0, direction()});
  return t;
}

}  // namespace tropex
