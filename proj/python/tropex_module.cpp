#include "tropex/errors.hpp"
#include "tropex/gluing.hpp"
#include "tropex/io.hpp"
#include "tropex/linalg.hpp"
#include "tropex/monoid.hpp"
#include "tropex/tropical_curves.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace tropex;

namespace {

// Python integers print in decimal at any size, so going through str() keeps
// values exact without a size cap.
Int int_from_py(const py::handle& h) {
  std::string s = py::str(h).cast<std::string>();
  try {
    return Int(s);
  } catch (const std::exception&) {
    throw invalid_input_error("not an integer: " + s);
  }
}

Rat rat_from_py(const py::handle& h) {
  std::string s = py::str(h).cast<std::string>();
  try {
    return rat_from_string(s);
  } catch (const std::exception&) {
    throw invalid_input_error("not a rational: " + s);
  }
}

VecQ point_from_py(const py::sequence& seq) {
  VecQ out;
  for (const py::handle& h : seq) out.push_back(rat_from_py(h));
  return out;
}

IntMat mat_from_py(const py::sequence& rows) {
  std::vector<VecI> data;
  for (const py::handle& row : rows) {
    VecI r;
    for (const py::handle& h : py::cast<py::sequence>(row))
      r.push_back(int_from_py(h));
    data.push_back(std::move(r));
    if (data.back().size() != data.front().size())
      throw invalid_input_error("rows of unequal length");
  }
  return IntMat::from_rows(data);
}

std::vector<std::string> strings_from_veci(const VecI& v) {
  std::vector<std::string> out;
  for (const Int& x : v) out.push_back(x.str());
  return out;
}

template <typename T, typename Reader>
T from_json_text(const std::string& text, Reader reader) {
  return reader(io::parse(text));
}

}  // namespace

PYBIND11_MODULE(tropex, m) {
  m.doc() =
      "Exact polyhedral shadows of exploded spaces: polytopes over the "
      "rationals, their strata and dual monoids, complexes of cells, and "
      "moduli of tropical curves. Values cross the boundary as JSON text "
      "with every number a decimal or p/q string.";

  py::register_exception<invalid_input_error>(m, "InvalidInput",
                                              PyExc_ValueError);
  py::register_exception<verification_error>(m, "VerificationFailed",
                                             PyExc_RuntimeError);
  py::register_exception<resource_limit_error>(m, "ResourceLimit",
                                               PyExc_RuntimeError);

  py::class_<Polytope>(m, "Polytope",
                       "A finite intersection of rational half-spaces, "
                       "open or closed face by face, never empty.")
      .def_static(
          "from_json",
          [](const std::string& text) {
            return from_json_text<Polytope>(text, [](const io::json& j) {
              return io::polytope_from_json(j);
            });
          },
          py::arg("text"))
      .def("to_json",
           [](const Polytope& p) { return io::dump(io::to_json(p)); })
      .def("dim", &Polytope::dim)
      .def("ambient_dim", &Polytope::ambient_dim)
      .def("is_cone", &Polytope::is_cone)
      .def("contains_line", &Polytope::contains_line)
      .def(
          "contains",
          [](const Polytope& p, const py::sequence& pt) {
            return p.contains(point_from_py(pt));
          },
          py::arg("point"),
          "Membership of a point given as a sequence of integers or "
          "\"p/q\" strings.")
      .def("closure", &Polytope::closure)
      .def("__repr__", [](const Polytope& p) {
        return "<Polytope dim " + std::to_string(p.dim()) + " in R^" +
               std::to_string(p.ambient_dim()) + ">";
      });

  py::class_<Atlas>(m, "Atlas",
                    "Charts with face-to-face gluing maps, in log or "
                    "exploded mode.")
      .def_static(
          "from_json",
          [](const std::string& text) {
            return from_json_text<Atlas>(text, [](const io::json& j) {
              return io::atlas_from_json(j);
            });
          },
          py::arg("text"))
      .def("to_json", [](const Atlas& a) { return io::dump(io::to_json(a)); })
      .def("__len__", [](const Atlas& a) { return a.charts.size(); });

  py::class_<TropicalComplex>(m, "TropicalComplex",
                              "Cells attached along faces; the combinatorial "
                              "shadow of an atlas.")
      .def_static(
          "from_json",
          [](const std::string& text) {
            return from_json_text<TropicalComplex>(
                text,
                [](const io::json& j) { return io::complex_from_json(j); });
          },
          py::arg("text"))
      .def("to_json",
           [](const TropicalComplex& c) { return io::dump(io::to_json(c)); })
      .def("__len__",
           [](const TropicalComplex& c) { return c.cells.size(); });

  py::class_<CurveType>(m, "CurveType",
                        "The combinatorial type of a tropical curve: "
                        "vertices in cells, bounded and unbounded edges "
                        "with primitive directions.")
      .def_static(
          "from_json",
          [](const std::string& text) {
            return from_json_text<CurveType>(text, [](const io::json& j) {
              return io::curve_type_from_json(j);
            });
          },
          py::arg("text"))
      .def("to_json",
           [](const CurveType& t) { return io::dump(io::to_json(t)); })
      .def("__len__",
           [](const CurveType& t) { return t.vertices.size(); });

  m.def(
      "strata_dims",
      [](const Polytope& p) {
        std::vector<int> dims;
        for (const StratumRecord& r : strata(p)) dims.push_back(r.stratum_dim);
        return dims;
      },
      py::arg("polytope"),
      "Dimensions of the strata cut out by the faces, one per face whose "
      "relative interior meets the set.");

  m.def(
      "hilbert_basis",
      [](const Polytope& p) {
        std::vector<std::vector<std::string>> out;
        for (const VecI& v : dual_hilbert_basis(p).hilbert)
          out.push_back(strings_from_veci(v));
        return out;
      },
      py::arg("cone"),
      "The minimal generating set of the nonnegative integral functionals "
      "of a cone, as decimal strings.");

  m.def(
      "smith_divisors",
      [](const py::sequence& matrix) {
        std::vector<std::string> out;
        for (const Int& d : elementary_divisors(mat_from_py(matrix)))
          out.push_back(d.str());
        return out;
      },
      py::arg("matrix"),
      "Elementary divisors of an integer matrix given as nested sequences "
      "of integers or decimal strings.");

  m.def("tropical_part", &tropical_part, py::arg("atlas"),
        "The complex of cells underlying an atlas.");
  m.def("trop_closure", &trop_closure, py::arg("complex"),
        "Cell-wise closure of a complex.");
  m.def("is_basic_space", &is_basic_space, py::arg("complex"),
        "Whether every pair of cells is identified in at most one way.");

  m.def(
      "moduli_dim",
      [](const CurveType& t, const TropicalComplex& c) {
        ModuliPolytope mp = moduli_polytope(t, c);
        return mp.polytope ? mp.polytope->dim() : -1;
      },
      py::arg("type"), py::arg("complex"),
      "Dimension of the realization space of a curve type, or -1 when the "
      "type is unrealizable.");

  m.def(
      "glue_summary",
      [](const CurveType& t, const TropicalComplex& c) {
        GlueResult g = glue(t, c);
        py::dict out;
        out["verified"] = g.verified;
        out["transverse"] = g.transverse;
        out["dim"] = g.marked.polytope.dim();
        out["fiber_dim"] = g.fiber_product.dim();
        out["pieces"] = g.cut_pieces.size();
        return out;
      },
      py::arg("type"), py::arg("complex"),
      "Cut a curve type at its bounded edges, glue the pieces' moduli back "
      "together, and report whether the dictionary is an exact match.");

  m.def(
      "cut_edge_monoids_verified",
      []() { return cut_edge_monoids().verified; },
      "Whether the monoid calculus of a severed node passes its own "
      "consistency checks.");
}
