#include "tropex/errors.hpp"
#include "tropex/gluing.hpp"
#include "tropex/io.hpp"
#include "tropex/linalg.hpp"
#include "tropex/monoid.hpp"
#include "tropex/refinement.hpp"
#include "tropex/render.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace tropex;
using io::json;

void emit(const json& payload) { std::cout << io::dump(payload); }

int emit_error(const std::string& status, const std::string& message,
               int code) {
  emit({{"status", status}, {"diagnostics", json::array({message})}});
  return code;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw invalid_input_error("cannot write file: " + path);
  out << text;
}

// Options shared by the picture-producing subcommands.
struct RenderOpts {
  std::string svg;
  std::string dot;
  std::string project;
};

void add_render(CLI::App* sub, RenderOpts& r, bool with_dot) {
  sub->add_option("--svg", r.svg, "write an SVG rendering to this path");
  if (with_dot)
    sub->add_option("--dot", r.dot, "write a DOT rendering to this path");
  sub->add_option("--project", r.project,
                  "2-row integer matrix file projecting higher-dimensional "
                  "cells into the drawing plane");
}

IntMat matrix_file(const std::string& path) {
  json j = io::load_file(path);
  return io::mat_from_json(io::json(j.contains("matrix") ? j["matrix"] : j),
                           path);
}

std::optional<IntAffineMap> load_projection(const RenderOpts& r) {
  if (r.project.empty()) return std::nullopt;
  IntAffineMap f;
  f.a = matrix_file(r.project);
  if (f.a.rows != 2)
    throw invalid_input_error("--project: the matrix must have two rows");
  f.b = VecQ(2, Rat(0));
  return f;
}

// Cells ready for drawing: either already planar or pushed down by the
// explicit projection. Anything else is refused rather than silently
// flattened.
std::vector<Polytope> drawable_cells(const std::vector<Polytope>& cells,
                                     const std::optional<IntAffineMap>& proj) {
  std::vector<Polytope> out;
  for (const Polytope& cell : cells) {
    if (cell.ambient_dim() == 2 && !proj) {
      out.push_back(cell);
    } else if (proj && proj->source_dim() == cell.ambient_dim()) {
      out.push_back(affine_image(*proj, cell));
    } else {
      throw invalid_input_error(
          "cell of ambient dimension " + std::to_string(cell.ambient_dim()) +
          " needs an explicit --project matrix to be drawn");
    }
  }
  return out;
}

VecQ project_point(const VecQ& p, const std::optional<IntAffineMap>& proj) {
  if (!proj) return p;
  return map_point(*proj, p);
}

VecQ parse_point(const std::string& csv) {
  VecQ out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ','))
    out.push_back(io::rat_from_json(json(part), "--point"));
  if (out.empty()) throw invalid_input_error("--point: no coordinates");
  return out;
}

long enumeration_bound() {
  const char* env = std::getenv("TROPEX_MAX_TYPES");
  if (!env) return 10000;
  char* end = nullptr;
  long bound = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || bound <= 0)
    throw invalid_input_error(
        "TROPEX_MAX_TYPES must be a positive integer, got: " +
        std::string(env));
  return bound;
}

// The realized curve at a sample moduli point, as drawing geometry.
render::Overlay curve_overlay(const CurveType& type, const TropicalComplex& c,
                              const ModuliPolytope& m,
                              const std::optional<IntAffineMap>& proj) {
  render::Overlay overlay;
  if (!m.polytope) return overlay;
  VecQ sample = m.polytope->relint_witness();
  auto into = [&](int vertex, int cell) {
    std::vector<IntAffineMap> ids =
        cell_identifications(c, type.vertices[vertex].cell, cell);
    return map_point(ids.front(), vertex_position(m, sample, vertex));
  };
  for (std::size_t q = 0; q < type.internal_edges.size(); ++q) {
    const InternalEdge& e = type.internal_edges[q];
    VecQ a = into(e.tail, e.cell);
    Rat l = edge_length(m, sample, static_cast<int>(q));
    VecQ b = a;
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += l * Rat(e.u[k]);
    overlay.segments.emplace_back(project_point(a, proj),
                                  project_point(b, proj));
  }
  for (const ExternalEdge& e : type.external_edges) {
    VecQ a = into(e.vertex, e.cell);
    overlay.rays.emplace_back(project_point(a, proj),
                              project_point(to_rational(e.u), proj));
  }
  for (std::size_t v = 0; v < type.vertices.size(); ++v)
    overlay.points.push_back(
        project_point(vertex_position(m, sample, static_cast<int>(v)), proj));
  return overlay;
}

json face_payload(const std::vector<Face>& faces) {
  json out = json::array();
  for (const Face& f : faces)
    out.push_back({{"dim", f.dim}, {"active", f.active}});
  return out;
}

json glue_payload(const GlueResult& g) {
  json piece_dims = json::array();
  for (const CutModuli& cm : g.cut_pieces)
    piece_dims.push_back(cm.polytope->dim());
  return {{"verified", g.verified},
          {"dim", g.marked.polytope.dim()},
          {"transverse", g.transverse},
          {"dims",
           {{"marked", g.marked.polytope.dim()},
            {"fiber", g.fiber_product.dim()},
            {"pieces", std::move(piece_dims)}}},
          {"dictionary", io::to_json(g.dictionary)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tropex: exact polyhedral shadows of exploded spaces"};
  app.require_subcommand(1);

  // polytope
  auto* sub_poly = app.add_subcommand(
      "polytope", "dimension, faces, closure, and line content");
  std::string poly_file;
  RenderOpts poly_render;
  sub_poly->add_option("file", poly_file, "polytope JSON")->required();
  add_render(sub_poly, poly_render, true);

  // strata
  auto* sub_strata =
      app.add_subcommand("strata", "stratification of the model space");
  std::string strata_file;
  sub_strata->add_option("file", strata_file, "polytope JSON")->required();

  // hilbert
  auto* sub_hilbert = app.add_subcommand(
      "hilbert", "Hilbert basis of the nonnegative functionals of a cone");
  std::string hilbert_file;
  sub_hilbert->add_option("file", hilbert_file, "polytope JSON")->required();

  // snf
  auto* sub_snf =
      app.add_subcommand("snf", "Smith normal form of an integer matrix");
  std::string snf_file;
  sub_snf->add_option("file", snf_file, "matrix JSON")->required();

  // trop
  auto* sub_trop =
      app.add_subcommand("trop", "tropical part of an atlas of charts");
  std::string trop_file;
  bool trop_closure_flag = false;
  RenderOpts trop_render;
  sub_trop->add_option("file", trop_file, "atlas JSON")->required();
  sub_trop->add_flag("--closure", trop_closure_flag,
                     "take cell-wise closures");
  add_render(sub_trop, trop_render, false);

  // immersion
  auto* sub_imm = app.add_subcommand(
      "immersion", "check candidate charts for a global immersion");
  std::string imm_file, imm_candidate;
  sub_imm->add_option("file", imm_file, "complex JSON")->required();
  sub_imm
      ->add_option("--candidate", imm_candidate,
                   "JSON file with one affine map per cell")
      ->required();

  // moduli
  auto* sub_moduli = app.add_subcommand(
      "moduli", "realization space of a curve type in a complex");
  std::string moduli_gamma, moduli_complex;
  RenderOpts moduli_render;
  sub_moduli->add_option("type", moduli_gamma, "curve type JSON")->required();
  sub_moduli->add_option("complex", moduli_complex, "complex JSON")
      ->required();
  add_render(sub_moduli, moduli_render, true);

  // universal
  auto* sub_univ = app.add_subcommand(
      "universal", "universal family of a curve type, self-checked");
  std::string univ_gamma, univ_complex;
  sub_univ->add_option("type", univ_gamma, "curve type JSON")->required();
  sub_univ->add_option("complex", univ_complex, "complex JSON")->required();

  // basic-check
  auto* sub_basic = app.add_subcommand(
      "basic-check", "is every face identification of the complex unique");
  std::string basic_file;
  sub_basic->add_option("file", basic_file, "complex JSON")->required();

  // refine
  auto* sub_refine =
      app.add_subcommand("refine", "validate a subdivision or push it onto "
                                   "the moduli of a curve type");
  std::string refine_file, refine_gamma;
  bool refine_verify = false;
  sub_refine->add_option("file", refine_file, "subdivision JSON")->required();
  sub_refine->add_flag("--verify", refine_verify,
                       "fail when the subdivision is invalid");
  sub_refine->add_option("--induce-moduli", refine_gamma,
                         "curve type JSON over the subdivision's target");

  // glue
  auto* sub_glue = app.add_subcommand(
      "glue", "cut a curve type and glue its moduli back together");
  std::vector<std::string> glue_files;
  bool glue_verify = false;
  int glue_random = 0;
  unsigned long glue_seed = 0;
  sub_glue->add_option("files", glue_files,
                       "curve type and complex JSON (complex only with "
                       "--random-trees)");
  sub_glue->add_flag("--verify", glue_verify,
                     "fail unless the gluing dictionary is a bijection");
  sub_glue->add_option("--random-trees", glue_random,
                       "glue this many random trees instead of a given type");
  sub_glue->add_option("--seed", glue_seed, "seed for the random corpus");

  // local-fan
  auto* sub_fan = app.add_subcommand(
      "local-fan", "directions a complex shows around one of its points");
  std::string fan_file, fan_point;
  int fan_cell = 0;
  RenderOpts fan_render;
  sub_fan->add_option("file", fan_file, "complex JSON")->required();
  sub_fan->add_option("--cell", fan_cell, "cell holding the point")
      ->required();
  sub_fan
      ->add_option("--point", fan_point,
                   "comma-separated rational coordinates, e.g. \"1/2,0\"")
      ->required();
  add_render(sub_fan, fan_render, false);

  // cut-edge-monoids
  auto* sub_cem = app.add_subcommand(
      "cut-edge-monoids", "the monoid calculus of a severed node");
  bool cem_selftest = false;
  sub_cem->add_flag("--selftest", cem_selftest,
                    "fail unless the calculus verifies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return emit_error("invalid-input", e.what(), 1);
  }

  try {
    if (*sub_poly) {
      Polytope p = io::polytope_from_json(io::load_file(poly_file), poly_file);
      std::vector<Face> faces = faces_of_closure(p);
      if (!poly_render.svg.empty()) {
        std::optional<IntAffineMap> proj = load_projection(poly_render);
        write_file(poly_render.svg,
                   render::svg_scene(drawable_cells({p}, proj), {}));
      }
      if (!poly_render.dot.empty())
        write_file(poly_render.dot, render::dot_face_lattice(p));
      emit({{"ambient_dim", p.ambient_dim()},
            {"dim", p.dim()},
            {"contains_line", p.contains_line()},
            {"is_cone", p.is_cone()},
            {"faces", face_payload(faces)},
            {"closure", io::to_json(p.closure())}});
      return 0;
    }

    if (*sub_strata) {
      Polytope p =
          io::polytope_from_json(io::load_file(strata_file), strata_file);
      std::vector<StratumRecord> records = strata(p);
      std::vector<int> dims;
      json detail = json::array();
      for (const StratumRecord& r : records) {
        dims.push_back(r.stratum_dim);
        detail.push_back(
            {{"stratum_dim", r.stratum_dim}, {"face_dim", r.face.dim}});
      }
      std::sort(dims.rbegin(), dims.rend());
      emit({{"count", records.size()},
            {"dims", dims},
            {"strata", std::move(detail)}});
      return 0;
    }

    if (*sub_hilbert) {
      Polytope p =
          io::polytope_from_json(io::load_file(hilbert_file), hilbert_file);
      DualMonoid dual = dual_hilbert_basis(p);
      json hilbert = json::array();
      for (const VecI& v : dual.hilbert) hilbert.push_back(io::to_json(v));
      json units = json::array();
      for (const VecI& v : dual.units) units.push_back(io::to_json(v));
      emit({{"count", dual.hilbert.size()},
            {"hilbert", std::move(hilbert)},
            {"units", std::move(units)}});
      return 0;
    }

    if (*sub_snf) {
      IntMat m = matrix_file(snf_file);
      SmithForm s = smith_normal_form(m);
      json divisors = json::array();
      for (const Int& d : elementary_divisors(m))
        divisors.push_back(io::to_json(d));
      emit({{"d", io::to_json(s.d)},
            {"u", io::to_json(s.u)},
            {"v", io::to_json(s.v)},
            {"divisors", std::move(divisors)}});
      return 0;
    }

    if (*sub_trop) {
      Atlas a = io::atlas_from_json(io::load_file(trop_file), trop_file);
      TropicalComplex c = tropical_part(a);
      if (trop_closure_flag) c = trop_closure(c);
      if (!trop_render.svg.empty()) {
        std::optional<IntAffineMap> proj = load_projection(trop_render);
        write_file(trop_render.svg,
                   render::svg_scene(drawable_cells(c.cells, proj), {}));
      }
      emit(io::to_json(c));
      return 0;
    }

    if (*sub_imm) {
      TropicalComplex c =
          io::complex_from_json(io::load_file(imm_file), imm_file);
      json cand = io::load_file(imm_candidate);
      const json& maps_json =
          cand.contains("maps") ? cand["maps"] : cand;
      if (!maps_json.is_array())
        throw invalid_input_error(imm_candidate +
                                  ": expected an array of affine maps");
      std::vector<IntAffineMap> maps;
      for (std::size_t i = 0; i < maps_json.size(); ++i)
        maps.push_back(io::map_from_json(
            maps_json[i], imm_candidate + "[" + std::to_string(i) + "]"));
      ImmersionReport report = verify_immersion(c, maps);
      emit({{"quasi_generated", report.quasi_generated},
            {"almost_generated", report.almost_generated}});
      return 0;
    }

    if (*sub_moduli) {
      CurveType type =
          io::curve_type_from_json(io::load_file(moduli_gamma), moduli_gamma);
      TropicalComplex c =
          io::complex_from_json(io::load_file(moduli_complex), moduli_complex);
      ModuliPolytope m = moduli_polytope(type, c);
      if (!moduli_render.svg.empty()) {
        std::optional<IntAffineMap> proj = load_projection(moduli_render);
        write_file(moduli_render.svg,
                   render::svg_scene(drawable_cells(c.cells, proj),
                                     curve_overlay(type, c, m, proj)));
      }
      if (!moduli_render.dot.empty())
        write_file(moduli_render.dot, render::dot_curve_graph(type));
      json payload = {{"dim", m.polytope ? m.polytope->dim() : -1},
                      {"empty", !m.polytope.has_value()},
                      {"ambient", m.ambient},
                      {"vertex_offset", m.vertex_offset},
                      {"length_offset", m.length_offset}};
      payload["polytope"] =
          m.polytope ? io::to_json(*m.polytope) : json(nullptr);
      emit(payload);
      return 0;
    }

    if (*sub_univ) {
      CurveType type =
          io::curve_type_from_json(io::load_file(univ_gamma), univ_gamma);
      TropicalComplex c =
          io::complex_from_json(io::load_file(univ_complex), univ_complex);
      UniversalFamily fam = universal_family(type, c);
      bool universal = is_universal(as_candidate(fam), type, c);
      emit({{"is_universal", universal},
            {"cells", fam.total.cells.size()},
            {"base_dim", fam.base.polytope ? fam.base.polytope->dim() : -1},
            {"base_ambient", fam.base.ambient}});
      return 0;
    }

    if (*sub_basic) {
      TropicalComplex c =
          io::complex_from_json(io::load_file(basic_file), basic_file);
      validate(c);
      emit({{"basic", is_basic_space(c)}});
      return 0;
    }

    if (*sub_refine) {
      Subdivision s =
          io::subdivision_from_json(io::load_file(refine_file), refine_file);
      SubdivisionReport report = validate_subdivision(s);
      if (!refine_gamma.empty()) {
        CurveType type = io::curve_type_from_json(io::load_file(refine_gamma),
                                                  refine_gamma);
        TypeRefinement ref =
            induced_type_refinement(type, s, enumeration_bound());
        json piece_dims = json::array();
        for (const RefinedModuliPiece& piece : ref.pieces)
          piece_dims.push_back(piece.interior.dim());
        emit({{"valid", report.valid},
              {"pieces", ref.pieces.size()},
              {"piece_dims", std::move(piece_dims)},
              {"strata_cells", ref.strata.cells.size()}});
        return 0;
      }
      if (!report.valid && refine_verify) {
        emit({{"status", "verification-failed"},
              {"valid", false},
              {"diagnostics", report.diagnostics}});
        return 2;
      }
      emit({{"valid", report.valid},
            {"cells", s.refined.cells.size()},
            {"diagnostics", report.diagnostics}});
      return 0;
    }

    if (*sub_glue) {
      if (glue_random > 0) {
        if (glue_files.size() != 1)
          throw invalid_input_error(
              "glue --random-trees expects exactly one file (the complex)");
        TropicalComplex c =
            io::complex_from_json(io::load_file(glue_files[0]), glue_files[0]);
        std::mt19937_64 rng(glue_seed);
        int verified = 0, transverse = 0;
        for (int i = 0; i < glue_random; ++i) {
          int vertices = 1 + static_cast<int>(rng() % 5);
          GlueResult g = glue(random_plane_tree(rng, vertices), c);
          verified += g.verified ? 1 : 0;
          transverse += g.transverse ? 1 : 0;
        }
        emit({{"trials", glue_random},
              {"verified", verified},
              {"transverse", transverse},
              {"seed", glue_seed}});
        return glue_verify && verified != glue_random ? 2 : 0;
      }
      if (glue_files.size() != 2)
        throw invalid_input_error(
            "glue expects a curve type file and a complex file");
      CurveType type =
          io::curve_type_from_json(io::load_file(glue_files[0]),
                                   glue_files[0]);
      TropicalComplex c =
          io::complex_from_json(io::load_file(glue_files[1]), glue_files[1]);
      GlueResult g = glue(type, c);
      json payload = glue_payload(g);
      if (glue_verify && !g.verified) {
        payload["status"] = "verification-failed";
        emit(payload);
        return 2;
      }
      emit(payload);
      return 0;
    }

    if (*sub_fan) {
      TropicalComplex c =
          io::complex_from_json(io::load_file(fan_file), fan_file);
      TropicalComplex f = local_fan(c, fan_cell, parse_point(fan_point));
      if (!fan_render.svg.empty()) {
        std::optional<IntAffineMap> proj = load_projection(fan_render);
        write_file(fan_render.svg,
                   render::svg_scene(drawable_cells(f.cells, proj), {}));
      }
      emit(io::to_json(f));
      return 0;
    }

    if (*sub_cem) {
      CutEdgeMonoids cem = cut_edge_monoids();
      json payload = {
          {"verified", cem.verified},
          {"selector", io::to_json(cem.side_selector)},
          {"generator_inclusion", io::to_json(cem.generator_inclusion)},
          {"inclusion", io::to_json(cem.inclusion)},
          {"side_hom_cone", io::to_json(positive_hom_cone(cem.side_monoid))}};
      if (cem_selftest && !cem.verified) {
        payload["status"] = "verification-failed";
        emit(payload);
        return 2;
      }
      emit(payload);
      return 0;
    }
  } catch (const invalid_input_error& e) {
    return emit_error("invalid-input", e.what(), 1);
  } catch (const resource_limit_error& e) {
    return emit_error("resource-bound", e.what(), 3);
  } catch (const verification_error& e) {
    return emit_error("verification-failed", e.what(), 2);
  }
  return 0;
}
