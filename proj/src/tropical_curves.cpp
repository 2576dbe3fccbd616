#include "tropex/tropical_curves.hpp"

#include "tropex/errors.hpp"
#include "tropex/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace tropex {

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Incidence data shared by the moduli constructions: for every edge
// endpoint, the unique affine identification of the vertex cell with a face
// of the edge cell (the identity when the cells coincide).
struct Incidence {
  std::vector<std::pair<IntAffineMap, IntAffineMap>> internal;  // tail, head
  std::vector<IntAffineMap> external;
};

std::optional<IntAffineMap> inclusion_into(const TropicalComplex& c, int from,
                                           int to) {
  std::vector<IntAffineMap> ids = cell_identifications(c, from, to);
  if (ids.empty()) return std::nullopt;
  return ids.front();
}

void check_indices(const CurveType& type, const TropicalComplex& c) {
  int cells = static_cast<int>(c.cells.size());
  int verts = static_cast<int>(type.vertices.size());
  for (const CurveVertex& v : type.vertices)
    if (v.cell < 0 || v.cell >= cells)
      throw invalid_input_error("vertex names a missing cell");
  for (const InternalEdge& q : type.internal_edges) {
    if (q.cell < 0 || q.cell >= cells)
      throw invalid_input_error("edge names a missing cell");
    if (q.tail < 0 || q.tail >= verts || q.head < 0 || q.head >= verts)
      throw invalid_input_error("edge names a missing vertex");
  }
  for (const ExternalEdge& e : type.external_edges) {
    if (e.cell < 0 || e.cell >= cells)
      throw invalid_input_error("edge names a missing cell");
    if (e.vertex < 0 || e.vertex >= verts)
      throw invalid_input_error("edge names a missing vertex");
  }
}

TypeReport report_on(const CurveType& type, const TropicalComplex& c,
                     Incidence* inc) {
  check_indices(type, c);
  TypeReport rep;
  auto complain = [&](std::string what) {
    rep.diagnostics.push_back(std::move(what));
  };

  if (type.vertices.empty()) complain("a curve needs at least one vertex");
  if (!is_basic_space(c))
    complain(
        "the complex is not basic, so face identifications are ambiguous");
  if (!rep.diagnostics.empty()) {
    rep.valid = false;
    return rep;
  }

  std::vector<int> parent(type.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);

  for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
    const InternalEdge& e = type.internal_edges[q];
    const std::string tag = "internal edge " + std::to_string(q);
    if (e.tail == e.head)
      complain(tag + " is a loop, which no positive length can realize");
    int amb = c.cells[e.cell].ambient_dim();
    if (static_cast<int>(e.u.size()) != amb ||
        std::all_of(e.u.begin(), e.u.end(),
                    [](const Int& x) { return x == 0; }))
      complain(tag + " needs a nonzero direction in its cell");
    parent[find_root(parent, e.tail)] = find_root(parent, e.head);
    for (int v : {e.tail, e.head}) {
      auto i = inclusion_into(c, type.vertices[v].cell, e.cell);
      if (!i)
        complain(tag + ": the cell of vertex " + std::to_string(v) +
                 " is not a face of the edge cell");
      else if (inc && v == e.tail)
        inc->internal[q].first = *i;
      else if (inc)
        inc->internal[q].second = *i;
    }
  }

  for (std::size_t k = 0; k < type.external_edges.size(); ++k) {
    const ExternalEdge& e = type.external_edges[k];
    const std::string tag = "external edge " + std::to_string(k);
    int amb = c.cells[e.cell].ambient_dim();
    if (static_cast<int>(e.u.size()) != amb ||
        std::all_of(e.u.begin(), e.u.end(),
                    [](const Int& x) { return x == 0; })) {
      complain(tag + " needs a nonzero direction in its cell");
      continue;
    }
    auto i = inclusion_into(c, type.vertices[e.vertex].cell, e.cell);
    if (!i)
      complain(tag + ": the cell of vertex " + std::to_string(e.vertex) +
               " is not a face of the edge cell");
    else if (inc)
      inc->external[k] = *i;
    auto rec = c.cells[e.cell].closure().recession_cone();
    if (!rec || !rec->contains(to_rational(e.u)))
      complain(tag + ": the cell has no infinite ray in its direction");
  }

  for (std::size_t v = 1; v < type.vertices.size(); ++v)
    if (find_root(parent, static_cast<int>(v)) != find_root(parent, 0)) {
      complain("the graph is not connected");
      break;
    }

  rep.valid = rep.diagnostics.empty();
  return rep;
}

Incidence checked_incidence(const CurveType& type, const TropicalComplex& c) {
  Incidence inc;
  inc.internal.resize(type.internal_edges.size());
  inc.external.resize(type.external_edges.size());
  TypeReport rep = report_on(type, c, &inc);
  if (!rep.valid)
    throw invalid_input_error("invalid curve type: " + rep.diagnostics[0]);
  return inc;
}

// Layout of the moduli coordinates: vertex blocks in order, then lengths.
ModuliPolytope layout(const CurveType& type, const TropicalComplex& c) {
  ModuliPolytope m;
  int at = 0;
  for (const CurveVertex& v : type.vertices) {
    m.vertex_offset.push_back(at);
    m.vertex_width.push_back(c.cells[v.cell].ambient_dim());
    at += m.vertex_width.back();
  }
  for (std::size_t q = 0; q < type.internal_edges.size(); ++q)
    m.length_offset.push_back(at++);
  m.ambient = at;
  return m;
}

// A condition on a cell, pulled back through an affine inclusion of a
// vertex block and shifted by a constant integer displacement `shift`:
// slope . (inc(p_v) + shift) + constant REL 0 in the big coordinates.
AffCondition pulled_condition(const AffCondition& cond,
                              const IntAffineMap& inc, int offset,
                              const VecI& shift, int ambient) {
  AffCondition out;
  out.slope.assign(ambient, Int(0));
  VecI s = left_mul(cond.slope, inc.a);
  for (std::size_t j = 0; j < s.size(); ++j) out.slope[offset + j] = s[j];
  out.constant = cond.constant + dot(cond.slope, inc.b) +
                 Rat(dot(cond.slope, shift));
  out.strict = cond.strict;
  return out;
}

}  // namespace

TypeReport validate_type(const CurveType& type, const TropicalComplex& c) {
  return report_on(type, c, nullptr);
}

ModuliPolytope moduli_polytope(const CurveType& type,
                               const TropicalComplex& c) {
  Incidence inc = checked_incidence(type, c);
  ModuliPolytope m = layout(type, c);
  std::vector<AffCondition> rows;

  // Vertex positions range over the relative interiors of their cells.
  for (std::size_t v = 0; v < type.vertices.size(); ++v) {
    Polytope ri = c.cells[type.vertices[v].cell].relative_interior();
    for (const AffCondition& cond : ri.conditions()) {
      AffCondition row;
      row.slope.assign(m.ambient, Int(0));
      for (std::size_t j = 0; j < cond.slope.size(); ++j)
        row.slope[m.vertex_offset[v] + j] = cond.slope[j];
      row.constant = cond.constant;
      row.strict = cond.strict;
      rows.push_back(std::move(row));
    }
  }

  for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
    const InternalEdge& e = type.internal_edges[q];
    const IntAffineMap& tail = inc.internal[q].first;
    const IntAffineMap& head = inc.internal[q].second;
    int lq = m.length_offset[q];
    int amb = c.cells[e.cell].ambient_dim();

    // Lengths are positive.
    AffCondition pos;
    pos.slope.assign(m.ambient, Int(0));
    pos.slope[lq] = 1;
    pos.strict = true;
    rows.push_back(std::move(pos));

    // Head position minus tail position equals length times direction,
    // written as two opposite weak rows per coordinate.
    for (int k = 0; k < amb; ++k) {
      AffCondition eq;
      eq.slope.assign(m.ambient, Int(0));
      for (int j = 0; j < head.source_dim(); ++j)
        eq.slope[m.vertex_offset[e.head] + j] += head.a.at(k, j);
      for (int j = 0; j < tail.source_dim(); ++j)
        eq.slope[m.vertex_offset[e.tail] + j] -= tail.a.at(k, j);
      eq.slope[lq] = -e.u[k];
      eq.constant = head.b[k] - tail.b[k];
      AffCondition opp = eq;
      for (Int& x : opp.slope) x = -x;
      opp.constant = -eq.constant;
      rows.push_back(std::move(eq));
      rows.push_back(std::move(opp));
    }

    // The open segment lies in the relative interior of the edge cell. The
    // endpoints land in the closure because they occupy faces, so by
    // convexity it is enough to put the doubled midpoint
    // tail(p_tail) + head(p_head) inside the doubled relative interior.
    Polytope ri = c.cells[e.cell].relative_interior();
    for (const AffCondition& cond : ri.conditions()) {
      AffCondition row;
      row.slope.assign(m.ambient, Int(0));
      VecI st = left_mul(cond.slope, tail.a);
      VecI sh = left_mul(cond.slope, head.a);
      for (std::size_t j = 0; j < st.size(); ++j)
        row.slope[m.vertex_offset[e.tail] + j] += st[j];
      for (std::size_t j = 0; j < sh.size(); ++j)
        row.slope[m.vertex_offset[e.head] + j] += sh[j];
      row.constant = cond.constant * 2 + dot(cond.slope, tail.b) +
                     dot(cond.slope, head.b);
      row.strict = cond.strict;
      rows.push_back(std::move(row));
    }
  }

  // An external ray stays in the relative interior of its cell exactly when
  // the point one step along the direction does: the direction recedes in
  // the closed cell, so the rest of the open ray follows by convexity.
  for (std::size_t k = 0; k < type.external_edges.size(); ++k) {
    const ExternalEdge& e = type.external_edges[k];
    Polytope ri = c.cells[e.cell].relative_interior();
    for (const AffCondition& cond : ri.conditions())
      rows.push_back(pulled_condition(cond, inc.external[k],
                                      m.vertex_offset[e.vertex], e.u,
                                      m.ambient));
  }

  m.polytope = Polytope::try_make(m.ambient, std::move(rows));
  return m;
}

VecQ vertex_position(const ModuliPolytope& m, const VecQ& point, int v) {
  if (v < 0 || v >= static_cast<int>(m.vertex_offset.size()))
    throw invalid_input_error("no such vertex");
  if (static_cast<int>(point.size()) != m.ambient)
    throw invalid_input_error("moduli point width mismatch");
  VecQ out(point.begin() + m.vertex_offset[v],
           point.begin() + m.vertex_offset[v] + m.vertex_width[v]);
  return out;
}

Rat edge_length(const ModuliPolytope& m, const VecQ& point, int q) {
  if (q < 0 || q >= static_cast<int>(m.length_offset.size()))
    throw invalid_input_error("no such edge");
  if (static_cast<int>(point.size()) != m.ambient)
    throw invalid_input_error("moduli point width mismatch");
  return point[m.length_offset[q]];
}

TropicalCurve realize(const CurveType& type, const ModuliPolytope& m,
                      const VecQ& point) {
  if (!m.polytope)
    throw invalid_input_error("the type has no realizations");
  if (static_cast<int>(point.size()) != m.ambient)
    throw invalid_input_error("moduli point width mismatch");
  if (!m.polytope->contains(point))
    throw invalid_input_error("the point realizes no curve of this type");
  return {type, point};
}

DerivativeData derivative_data(const TropicalCurve& curve) {
  DerivativeData d;
  for (const InternalEdge& q : curve.type.internal_edges)
    d.internal.push_back(q.u);
  for (const ExternalEdge& e : curve.type.external_edges)
    d.external.push_back(e.u);
  return d;
}

CurveType reverse_edge(CurveType type, int q) {
  if (q < 0 || q >= static_cast<int>(type.internal_edges.size()))
    throw invalid_input_error("no such edge");
  InternalEdge& e = type.internal_edges[q];
  std::swap(e.tail, e.head);
  for (Int& x : e.u) x = -x;
  return type;
}

UniversalFamily universal_family(const CurveType& type,
                                 const TropicalComplex& c) {
  Incidence inc = checked_incidence(type, c);
  UniversalFamily f;
  f.base = moduli_polytope(type, c);
  if (!f.base.polytope)
    throw invalid_input_error("the type has no realizations");
  const Polytope& base = *f.base.polytope;
  int n = f.base.ambient;
  VecQ w = base.relint_witness();

  auto lifted_rows = [&]() {
    std::vector<AffCondition> rows;
    for (const AffCondition& cond : base.conditions()) {
      AffCondition r = cond;
      r.slope.push_back(Int(0));
      rows.push_back(std::move(r));
    }
    return rows;
  };
  IntAffineMap drop;  // forget the edge parameter
  drop.a = IntMat(n, n + 1);
  for (int i = 0; i < n; ++i) drop.a.at(i, i) = 1;
  drop.b.assign(n, Rat(0));

  auto block_eval = [&](const IntAffineMap& into, int v) {
    IntAffineMap ev;
    ev.a = IntMat(into.target_dim(), n);
    for (int k = 0; k < into.target_dim(); ++k)
      for (int j = 0; j < into.source_dim(); ++j)
        ev.a.at(k, f.base.vertex_offset[v] + j) = into.a.at(k, j);
    ev.b = into.b;
    return ev;
  };

  for (std::size_t v = 0; v < type.vertices.size(); ++v) {
    f.total.cells.push_back(base);
    f.projection.push_back(identity_map(n));
    f.evaluation_cell.push_back(type.vertices[v].cell);
    f.evaluation.push_back(
        block_eval(identity_map(f.base.vertex_width[v]), static_cast<int>(v)));
    f.cell_vertex.push_back(static_cast<int>(v));
    f.cell_edge.push_back(-1);
  }

  auto attach_at = [&](int cell_index, const VecQ& probe, int vertex) {
    auto faces = faces_of_closure(f.total.cells[cell_index]);
    int fi = face_through(f.total.cells[cell_index], faces, probe);
    f.total.attachments.push_back({cell_index, fi, vertex, drop});
  };

  for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
    const InternalEdge& e = type.internal_edges[q];
    std::vector<AffCondition> rows = lifted_rows();
    AffCondition lo;
    lo.slope.assign(n + 1, Int(0));
    lo.slope[n] = 1;
    rows.push_back(std::move(lo));
    AffCondition hi;  // t <= length coordinate
    hi.slope.assign(n + 1, Int(0));
    hi.slope[f.base.length_offset[q]] = 1;
    hi.slope[n] = -1;
    rows.push_back(std::move(hi));
    VecQ cw = w;
    cw.push_back(w[f.base.length_offset[q]] / 2);
    int cell_index = static_cast<int>(f.total.cells.size());
    f.total.cells.push_back(
        Polytope::with_witness(n + 1, std::move(rows), std::move(cw)));

    IntAffineMap ev = block_eval(inc.internal[q].first, e.tail);
    IntAffineMap wide;
    wide.a = IntMat(ev.target_dim(), n + 1);
    for (int k = 0; k < ev.target_dim(); ++k) {
      for (int j = 0; j < n; ++j) wide.a.at(k, j) = ev.a.at(k, j);
      wide.a.at(k, n) = e.u[k];
    }
    wide.b = ev.b;
    f.projection.push_back(drop);
    f.evaluation_cell.push_back(e.cell);
    f.evaluation.push_back(std::move(wide));
    f.cell_vertex.push_back(-1);
    f.cell_edge.push_back(static_cast<int>(q));

    VecQ at_zero = w;
    at_zero.push_back(Rat(0));
    attach_at(cell_index, at_zero, e.tail);
    VecQ at_length = w;
    at_length.push_back(w[f.base.length_offset[q]]);
    attach_at(cell_index, at_length, e.head);
  }

  for (std::size_t k = 0; k < type.external_edges.size(); ++k) {
    const ExternalEdge& e = type.external_edges[k];
    std::vector<AffCondition> rows = lifted_rows();
    AffCondition lo;
    lo.slope.assign(n + 1, Int(0));
    lo.slope[n] = 1;
    rows.push_back(std::move(lo));
    VecQ cw = w;
    cw.push_back(Rat(1));
    int cell_index = static_cast<int>(f.total.cells.size());
    f.total.cells.push_back(
        Polytope::with_witness(n + 1, std::move(rows), std::move(cw)));

    IntAffineMap ev = block_eval(inc.external[k], e.vertex);
    IntAffineMap wide;
    wide.a = IntMat(ev.target_dim(), n + 1);
    for (int kk = 0; kk < ev.target_dim(); ++kk) {
      for (int j = 0; j < n; ++j) wide.a.at(kk, j) = ev.a.at(kk, j);
      wide.a.at(kk, n) = e.u[kk];
    }
    wide.b = ev.b;
    f.projection.push_back(drop);
    f.evaluation_cell.push_back(e.cell);
    f.evaluation.push_back(std::move(wide));
    f.cell_vertex.push_back(-1);
    f.cell_edge.push_back(
        static_cast<int>(type.internal_edges.size() + k));

    VecQ at_zero = w;
    at_zero.push_back(Rat(0));
    attach_at(cell_index, at_zero, e.vertex);
  }
  return f;
}

FamilyCandidate as_candidate(const UniversalFamily& f) {
  if (!f.base.polytope)
    throw invalid_input_error("the family has an empty base");
  FamilyCandidate cand{*f.base.polytope, {}, {}};
  int n = f.base.ambient;
  for (std::size_t v = 0; v < f.base.vertex_offset.size(); ++v) {
    IntAffineMap block;
    block.a = IntMat(f.base.vertex_width[v], n);
    for (int k = 0; k < f.base.vertex_width[v]; ++k)
      block.a.at(k, f.base.vertex_offset[v] + k) = 1;
    block.b.assign(f.base.vertex_width[v], Rat(0));
    cand.vertex_eval.push_back(std::move(block));
  }
  for (int lq : f.base.length_offset) {
    IntAffineMap len;
    len.a = IntMat(1, n);
    len.a.at(0, lq) = 1;
    len.b = {Rat(0)};
    cand.length.push_back(std::move(len));
  }
  return cand;
}

bool is_universal(const FamilyCandidate& cand, const CurveType& type,
                  const TropicalComplex& c) {
  ModuliPolytope m = moduli_polytope(type, c);
  if (!m.polytope) return false;
  if (cand.vertex_eval.size() != type.vertices.size() ||
      cand.length.size() != type.internal_edges.size())
    throw invalid_input_error("one map per vertex and per internal edge");
  int n = cand.base.ambient_dim();

  // Assemble the classifying map: the only affine map to the moduli
  // coordinates that commutes with the fiberwise realization data.
  IntAffineMap phi;
  phi.a = IntMat(m.ambient, n);
  phi.b.assign(m.ambient, Rat(0));
  for (std::size_t v = 0; v < cand.vertex_eval.size(); ++v) {
    const IntAffineMap& ev = cand.vertex_eval[v];
    if (ev.source_dim() != n || ev.target_dim() != m.vertex_width[v])
      throw invalid_input_error("vertex map has mismatched dimensions");
    for (int k = 0; k < ev.target_dim(); ++k) {
      for (int j = 0; j < n; ++j)
        phi.a.at(m.vertex_offset[v] + k, j) = ev.a.at(k, j);
      phi.b[m.vertex_offset[v] + k] = ev.b[k];
    }
  }
  for (std::size_t q = 0; q < cand.length.size(); ++q) {
    const IntAffineMap& len = cand.length[q];
    if (len.source_dim() != n || len.target_dim() != 1)
      throw invalid_input_error("length map has mismatched dimensions");
    for (int j = 0; j < n; ++j)
      phi.a.at(m.length_offset[q], j) = len.a.at(0, j);
    phi.b[m.length_offset[q]] = len.b[0];
  }
  return integral_iso_onto(cand.base, *m.polytope, phi);
}

}  // namespace tropex
