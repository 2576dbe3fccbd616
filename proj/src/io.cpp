#include "tropex/io.hpp"

#include "tropex/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace tropex::io {

namespace {

[[noreturn]] void fail(const std::string& at, const std::string& msg) {
  throw invalid_input_error(at + ": " + msg);
}

std::string item(const std::string& at, const char* key) {
  return at + "." + key;
}

std::string entry(const std::string& at, std::size_t i) {
  return at + "[" + std::to_string(i) + "]";
}

const json& member(const json& j, const char* key, const std::string& at) {
  if (!j.is_object()) fail(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at, std::string("missing field \"") + key + "\"");
  return *it;
}

void expect_array(const json& j, const std::string& at) {
  if (!j.is_array()) fail(at, "expected an array");
}

int index_from_json(const json& j, const std::string& at) {
  if (!j.is_number_integer()) fail(at, "expected an index");
  return j.get<int>();
}

// Angular coordinates are the only floating data; 17 significant digits
// round-trip a double exactly.
std::string angular_to_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double angular_from_json(const json& j, const std::string& at) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) fail(at, "expected a floating value");
  const std::string& s = j.get_ref<const std::string&>();
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(at, "not a floating value: \"" + s + "\"");
  }
  if (used != s.size()) fail(at, "not a floating value: \"" + s + "\"");
  return x;
}

}  // namespace

json to_json(const Int& v) { return v.str(); }

json to_json(const Rat& v) { return rat_to_string(v); }

json to_json(const VecI& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(to_json(x));
  return out;
}

json to_json(const VecQ& v) {
  json out = json::array();
  for (const Rat& x : v) out.push_back(to_json(x));
  return out;
}

json to_json(const IntMat& m) {
  json out = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(to_json(m.at(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const IntAffineMap& f) {
  return {{"a", to_json(f.a)}, {"b", to_json(f.b)}};
}

json to_json(const AffCondition& c) {
  return {{"slope", to_json(c.slope)},
          {"constant", to_json(c.constant)},
          {"rel", c.strict ? "gt" : "ge"}};
}

json to_json(const Polytope& p) {
  json rows = json::array();
  for (const AffCondition& c : p.conditions()) rows.push_back(to_json(c));
  return {{"ambient_dim", p.ambient_dim()}, {"constraints", std::move(rows)}};
}

json to_json(const Atlas& a) {
  json charts = json::array();
  for (const Polytope& p : a.charts) charts.push_back(to_json(p));
  json gluings = json::array();
  for (const Gluing& g : a.gluings)
    gluings.push_back({{"chart_a", g.chart_a},
                       {"face_a", g.face_a},
                       {"chart_b", g.chart_b},
                       {"face_b", g.face_b},
                       {"map", to_json(g.iso)}});
  return {{"mode", a.mode == AtlasMode::log ? "log" : "exploded"},
          {"charts", std::move(charts)},
          {"gluings", std::move(gluings)}};
}

json to_json(const TropicalComplex& c) {
  json cells = json::array();
  for (const Polytope& p : c.cells) cells.push_back(to_json(p));
  json attachments = json::array();
  for (const Attachment& a : c.attachments)
    attachments.push_back({{"cell", a.cell},
                           {"face", a.face},
                           {"target", a.target},
                           {"map", to_json(a.iso)}});
  return {{"cells", std::move(cells)},
          {"attachments", std::move(attachments)}};
}

json to_json(const AtlasMorphism& f) {
  json maps = json::array();
  for (const IntAffineMap& m : f.maps) maps.push_back(to_json(m));
  return {{"source", to_json(f.source)},
          {"target", to_json(f.target)},
          {"chart_map", f.chart_map},
          {"maps", std::move(maps)}};
}

json to_json(const CurveType& t) {
  json vertices = json::array();
  for (const CurveVertex& v : t.vertices)
    vertices.push_back({{"cell", v.cell}});
  json edges = json::array();
  for (const InternalEdge& e : t.internal_edges)
    edges.push_back({{"kind", "internal"},
                     {"tail", e.tail},
                     {"head", e.head},
                     {"cell", e.cell},
                     {"u", to_json(e.u)}});
  for (const ExternalEdge& e : t.external_edges)
    edges.push_back({{"kind", "external"},
                     {"vertex", e.vertex},
                     {"cell", e.cell},
                     {"u", to_json(e.u)}});
  return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

json to_json(const Subdivision& s) {
  json cell_map = json::array();
  for (const CellImage& ci : s.cell_map)
    cell_map.push_back(
        {{"target_cell", ci.target_cell}, {"map", to_json(ci.inclusion)}});
  return {{"target", to_json(s.target)},
          {"refined", to_json(s.refined)},
          {"cell_map", std::move(cell_map)}};
}

json to_json(const ExplodedPoint& p) {
  json angular = json::array();
  for (const std::complex<double>& z : p.angular)
    angular.push_back({{"re", angular_to_string(z.real())},
                       {"im", angular_to_string(z.imag())}});
  return {{"chart", p.chart},
          {"trop", to_json(p.trop)},
          {"angular", std::move(angular)}};
}

Int int_from_json(const json& j, const std::string& at) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (!j.is_string()) fail(at, "expected an integer string");
  const std::string& s = j.get_ref<const std::string&>();
  try {
    return Int(s);
  } catch (const std::exception&) {
    fail(at, "not an integer: \"" + s + "\"");
  }
}

Rat rat_from_json(const json& j, const std::string& at) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (!j.is_string()) fail(at, "expected a rational string \"p/q\"");
  const std::string& s = j.get_ref<const std::string&>();
  try {
    return rat_from_string(s);
  } catch (const std::exception&) {
    fail(at, "not a rational: \"" + s + "\"");
  }
}

VecI veci_from_json(const json& j, const std::string& at) {
  expect_array(j, at);
  VecI out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(int_from_json(j[i], entry(at, i)));
  return out;
}

VecQ vecq_from_json(const json& j, const std::string& at) {
  expect_array(j, at);
  VecQ out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rat_from_json(j[i], entry(at, i)));
  return out;
}

IntMat mat_from_json(const json& j, const std::string& at) {
  expect_array(j, at);
  std::vector<VecI> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(veci_from_json(j[i], entry(at, i)));
    if (rows.back().size() != rows.front().size())
      fail(entry(at, i), "rows of unequal length");
  }
  return IntMat::from_rows(rows);
}

IntAffineMap map_from_json(const json& j, const std::string& at) {
  IntAffineMap f;
  f.a = mat_from_json(member(j, "a", at), item(at, "a"));
  f.b = vecq_from_json(member(j, "b", at), item(at, "b"));
  if (static_cast<int>(f.b.size()) != f.a.rows)
    fail(at, "translation length does not match the matrix rows");
  return f;
}

Polytope polytope_from_json(const json& j, const std::string& at) {
  int n = index_from_json(member(j, "ambient_dim", at),
                          item(at, "ambient_dim"));
  if (n < 0) fail(item(at, "ambient_dim"), "negative dimension");
  const json& rows = member(j, "constraints", at);
  expect_array(rows, item(at, "constraints"));
  std::vector<AffCondition> conds;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string here = entry(item(at, "constraints"), i);
    AffCondition c;
    c.slope = veci_from_json(member(rows[i], "slope", here),
                             item(here, "slope"));
    c.constant = rat_from_json(member(rows[i], "constant", here),
                               item(here, "constant"));
    const json& rel = member(rows[i], "rel", here);
    if (rel == "ge")
      c.strict = false;
    else if (rel == "gt")
      c.strict = true;
    else
      fail(item(here, "rel"), "expected \"ge\" or \"gt\"");
    if (static_cast<int>(c.slope.size()) != n)
      fail(item(here, "slope"), "width differs from ambient_dim");
    conds.push_back(std::move(c));
  }
  return Polytope(n, std::move(conds));
}

Atlas atlas_from_json(const json& j, const std::string& at) {
  Atlas a;
  const json& mode = member(j, "mode", at);
  if (mode == "log")
    a.mode = AtlasMode::log;
  else if (mode == "exploded")
    a.mode = AtlasMode::exploded;
  else
    fail(item(at, "mode"), "expected \"log\" or \"exploded\"");
  const json& charts = member(j, "charts", at);
  expect_array(charts, item(at, "charts"));
  for (std::size_t i = 0; i < charts.size(); ++i)
    a.charts.push_back(
        polytope_from_json(charts[i], entry(item(at, "charts"), i)));
  const json& gluings = member(j, "gluings", at);
  expect_array(gluings, item(at, "gluings"));
  for (std::size_t i = 0; i < gluings.size(); ++i) {
    std::string here = entry(item(at, "gluings"), i);
    Gluing g;
    g.chart_a = index_from_json(member(gluings[i], "chart_a", here),
                                item(here, "chart_a"));
    g.face_a = index_from_json(member(gluings[i], "face_a", here),
                               item(here, "face_a"));
    g.chart_b = index_from_json(member(gluings[i], "chart_b", here),
                                item(here, "chart_b"));
    g.face_b = index_from_json(member(gluings[i], "face_b", here),
                               item(here, "face_b"));
    g.iso = map_from_json(member(gluings[i], "map", here), item(here, "map"));
    a.gluings.push_back(std::move(g));
  }
  return a;
}

TropicalComplex complex_from_json(const json& j, const std::string& at) {
  TropicalComplex c;
  const json& cells = member(j, "cells", at);
  expect_array(cells, item(at, "cells"));
  for (std::size_t i = 0; i < cells.size(); ++i)
    c.cells.push_back(
        polytope_from_json(cells[i], entry(item(at, "cells"), i)));
  const json& attachments = member(j, "attachments", at);
  expect_array(attachments, item(at, "attachments"));
  for (std::size_t i = 0; i < attachments.size(); ++i) {
    std::string here = entry(item(at, "attachments"), i);
    Attachment a;
    a.cell = index_from_json(member(attachments[i], "cell", here),
                             item(here, "cell"));
    a.face = index_from_json(member(attachments[i], "face", here),
                             item(here, "face"));
    a.target = index_from_json(member(attachments[i], "target", here),
                               item(here, "target"));
    a.iso =
        map_from_json(member(attachments[i], "map", here), item(here, "map"));
    c.attachments.push_back(std::move(a));
  }
  return c;
}

AtlasMorphism morphism_from_json(const json& j, const std::string& at) {
  AtlasMorphism f;
  f.source = atlas_from_json(member(j, "source", at), item(at, "source"));
  f.target = atlas_from_json(member(j, "target", at), item(at, "target"));
  const json& chart_map = member(j, "chart_map", at);
  expect_array(chart_map, item(at, "chart_map"));
  for (std::size_t i = 0; i < chart_map.size(); ++i)
    f.chart_map.push_back(
        index_from_json(chart_map[i], entry(item(at, "chart_map"), i)));
  const json& maps = member(j, "maps", at);
  expect_array(maps, item(at, "maps"));
  for (std::size_t i = 0; i < maps.size(); ++i)
    f.maps.push_back(map_from_json(maps[i], entry(item(at, "maps"), i)));
  return f;
}

CurveType curve_type_from_json(const json& j, const std::string& at) {
  CurveType t;
  const json& vertices = member(j, "vertices", at);
  expect_array(vertices, item(at, "vertices"));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    std::string here = entry(item(at, "vertices"), i);
    t.vertices.push_back(
        {index_from_json(member(vertices[i], "cell", here),
                         item(here, "cell"))});
  }
  const json& edges = member(j, "edges", at);
  expect_array(edges, item(at, "edges"));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string here = entry(item(at, "edges"), i);
    const json& kind = member(edges[i], "kind", here);
    if (kind == "internal") {
      InternalEdge e;
      e.tail = index_from_json(member(edges[i], "tail", here),
                               item(here, "tail"));
      e.head = index_from_json(member(edges[i], "head", here),
                               item(here, "head"));
      e.cell = index_from_json(member(edges[i], "cell", here),
                               item(here, "cell"));
      e.u = veci_from_json(member(edges[i], "u", here), item(here, "u"));
      t.internal_edges.push_back(std::move(e));
    } else if (kind == "external") {
      ExternalEdge e;
      e.vertex = index_from_json(member(edges[i], "vertex", here),
                                 item(here, "vertex"));
      e.cell = index_from_json(member(edges[i], "cell", here),
                               item(here, "cell"));
      e.u = veci_from_json(member(edges[i], "u", here), item(here, "u"));
      t.external_edges.push_back(std::move(e));
    } else {
      fail(item(here, "kind"), "expected \"internal\" or \"external\"");
    }
  }
  return t;
}

Subdivision subdivision_from_json(const json& j, const std::string& at) {
  Subdivision s;
  s.target = complex_from_json(member(j, "target", at), item(at, "target"));
  s.refined =
      complex_from_json(member(j, "refined", at), item(at, "refined"));
  const json& cell_map = member(j, "cell_map", at);
  expect_array(cell_map, item(at, "cell_map"));
  for (std::size_t i = 0; i < cell_map.size(); ++i) {
    std::string here = entry(item(at, "cell_map"), i);
    CellImage ci;
    ci.target_cell = index_from_json(member(cell_map[i], "target_cell", here),
                                     item(here, "target_cell"));
    ci.inclusion =
        map_from_json(member(cell_map[i], "map", here), item(here, "map"));
    s.cell_map.push_back(std::move(ci));
  }
  return s;
}

ExplodedPoint point_from_json(const json& j, const std::string& at) {
  ExplodedPoint p;
  p.chart = index_from_json(member(j, "chart", at), item(at, "chart"));
  p.trop = vecq_from_json(member(j, "trop", at), item(at, "trop"));
  const json& angular = member(j, "angular", at);
  expect_array(angular, item(at, "angular"));
  for (std::size_t i = 0; i < angular.size(); ++i) {
    std::string here = entry(item(at, "angular"), i);
    double re = angular_from_json(member(angular[i], "re", here),
                                  item(here, "re"));
    double im = angular_from_json(member(angular[i], "im", here),
                                  item(here, "im"));
    p.angular.emplace_back(re, im);
  }
  return p;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

json parse(const std::string& text, const std::string& at) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input_error(at + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace tropex::io
