#pragma once

#include "tropex/polytope.hpp"
#include "tropex/tropical_curves.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tropex::render {

// Extra geometry drawn on top of the cells (a realized curve, usually):
// bold segments, rays clipped at the picture edge, and marked points.
struct Overlay {
  std::vector<std::pair<VecQ, VecQ>> segments;  // endpoint pairs
  std::vector<std::pair<VecQ, VecQ>> rays;      // base point, direction
  std::vector<VecQ> points;
};

// Draws cells of a plane complex: two-dimensional cells as filled polygons,
// one-dimensional ones as line segments, points as dots, all clipped to a
// window enclosing every witness. Every cell must have ambient dimension
// two — project higher-dimensional complexes down first.
std::string svg_scene(const std::vector<Polytope>& cells,
                      const Overlay& overlay);

// The face lattice as a DOT digraph, one rank per dimension, with covering
// edges.
std::string dot_face_lattice(const Polytope& p);

// The graph of a curve type: circles for vertices, arrows for the oriented
// bounded edges, dashed arrows into unlabeled tips for the rays.
std::string dot_curve_graph(const CurveType& t);

}  // namespace tropex::render
