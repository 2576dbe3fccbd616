#include "tropex/render.hpp"

#include "tropex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tropex::render {

namespace {

double to_double(const Rat& q) {
  return num(q).convert_to<double>() / den(q).convert_to<double>();
}

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Window {
  Rat xmin, xmax, ymin, ymax;
  bool seeded = false;

  void grow(const VecQ& p) {
    if (!seeded) {
      xmin = xmax = p[0];
      ymin = ymax = p[1];
      seeded = true;
      return;
    }
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
};

AffCondition at_least(VecI slope, Rat bound) {
  AffCondition c;
  c.slope = std::move(slope);
  c.constant = -bound;
  return c;
}

AffCondition at_most(VecI slope, Rat bound) {
  AffCondition c;
  c.slope = {-slope[0], -slope[1]};
  c.constant = std::move(bound);
  return c;
}

// Corner points of a closed bounded set, in drawing order around their mean.
std::vector<std::pair<double, double>> corners(const Polytope& p) {
  std::vector<std::pair<double, double>> pts;
  for (const Face& f : faces_of_closure(p))
    if (f.dim == 0) {
      VecQ w = f.poly.witness();
      pts.emplace_back(to_double(w[0]), to_double(w[1]));
    }
  double cx = 0, cy = 0;
  for (auto& [x, y] : pts) {
    cx += x;
    cy += y;
  }
  if (!pts.empty()) {
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
  }
  std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
    return std::atan2(a.second - cy, a.first - cx) <
           std::atan2(b.second - cy, b.first - cx);
  });
  return pts;
}

}  // namespace

std::string svg_scene(const std::vector<Polytope>& cells,
                      const Overlay& overlay) {
  for (const Polytope& cell : cells)
    if (cell.ambient_dim() != 2)
      throw invalid_input_error(
          "drawing needs two-dimensional cells; project ambient dimension " +
          std::to_string(cell.ambient_dim()) + " down first");

  Window w;
  for (const Polytope& cell : cells) {
    w.grow(cell.relint_witness());
    for (const Face& f : faces_of_closure(cell))
      if (f.dim == 0) w.grow(f.poly.witness());
  }
  for (const auto& [a, b] : overlay.segments) {
    w.grow(a);
    w.grow(b);
  }
  for (const auto& [base, dir] : overlay.rays) {
    w.grow(base);
    w.grow({base[0] + dir[0], base[1] + dir[1]});
  }
  for (const VecQ& p : overlay.points) w.grow(p);
  if (!w.seeded) w.grow({Rat(0), Rat(0)});

  Rat pad = (w.xmax - w.xmin + w.ymax - w.ymin) * Rat(3, 20) + 1;
  Rat xmin = w.xmin - pad, xmax = w.xmax + pad;
  Rat ymin = w.ymin - pad, ymax = w.ymax + pad;
  Polytope box(2, {at_least({1, 0}, xmin), at_most({1, 0}, xmax),
                   at_least({0, 1}, ymin), at_most({0, 1}, ymax)});

  // World-to-picture transform (y flipped).
  const double width = 640, height = 480, margin = 20;
  double wx0 = to_double(xmin), wx1 = to_double(xmax);
  double wy0 = to_double(ymin), wy1 = to_double(ymax);
  double sx = (width - 2 * margin) / (wx1 - wx0);
  double sy = (height - 2 * margin) / (wy1 - wy0);
  double s = std::min(sx, sy);
  auto px = [&](double x) { return margin + (x - wx0) * s; };
  auto py = [&](double y) { return height - margin - (y - wy0) * s; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Fills first, then edges, then vertices, so lower-dimensional cells stay
  // visible.
  for (int want = 2; want >= 0; --want)
    for (const Polytope& cell : cells) {
      std::optional<Polytope> clipped = intersect(cell.closure(), box);
      if (!clipped || clipped->dim() != want) continue;
      std::vector<std::pair<double, double>> pts = corners(*clipped);
      if (want == 2 && pts.size() >= 3) {
        svg << "<polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
          svg << (i ? " " : "") << fmt(px(pts[i].first)) << ","
              << fmt(py(pts[i].second));
        svg << "\" fill=\"#8ecae6\" fill-opacity=\"0.35\" "
               "stroke=\"#1d3557\" stroke-width=\"1\"/>\n";
      } else if (want == 1 && pts.size() >= 2) {
        svg << "<line x1=\"" << fmt(px(pts[0].first)) << "\" y1=\""
            << fmt(py(pts[0].second)) << "\" x2=\"" << fmt(px(pts[1].first))
            << "\" y2=\"" << fmt(py(pts[1].second))
            << "\" stroke=\"#1d3557\" stroke-width=\"2.5\"/>\n";
      } else if (want == 0 && !pts.empty()) {
        svg << "<circle cx=\"" << fmt(px(pts[0].first)) << "\" cy=\""
            << fmt(py(pts[0].second))
            << "\" r=\"4\" fill=\"#1d3557\"/>\n";
      }
    }

  for (const auto& [a, b] : overlay.segments)
    svg << "<line x1=\"" << fmt(px(to_double(a[0]))) << "\" y1=\""
        << fmt(py(to_double(a[1]))) << "\" x2=\"" << fmt(px(to_double(b[0])))
        << "\" y2=\"" << fmt(py(to_double(b[1])))
        << "\" stroke=\"#e63946\" stroke-width=\"3\"/>\n";

  for (const auto& [base, dir] : overlay.rays) {
    // Stretch the direction far enough to leave the window.
    double dx = to_double(dir[0]), dy = to_double(dir[1]);
    double len = std::hypot(dx, dy);
    if (len == 0) continue;
    double reach = ((wx1 - wx0) + (wy1 - wy0)) / len;
    double bx = to_double(base[0]), by = to_double(base[1]);
    svg << "<line x1=\"" << fmt(px(bx)) << "\" y1=\"" << fmt(py(by))
        << "\" x2=\"" << fmt(px(bx + reach * dx)) << "\" y2=\""
        << fmt(py(by + reach * dy))
        << "\" stroke=\"#e63946\" stroke-width=\"2\" "
           "stroke-dasharray=\"6 3\"/>\n";
  }

  for (const VecQ& p : overlay.points)
    svg << "<circle cx=\"" << fmt(px(to_double(p[0]))) << "\" cy=\""
        << fmt(py(to_double(p[1]))) << "\" r=\"5\" fill=\"#e63946\"/>\n";

  svg << "</svg>\n";
  return svg.str();
}

std::string dot_face_lattice(const Polytope& p) {
  std::vector<Face> faces = faces_of_closure(p);
  std::ostringstream dot;
  dot << "digraph faces {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < faces.size(); ++i)
    dot << "  f" << i << " [label=\"f" << i << " dim " << faces[i].dim
        << "\"];\n";
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t j = 0; j < faces.size(); ++j)
      if (faces[j].dim == faces[i].dim - 1 &&
          subset_of(faces[j].poly, faces[i].poly))
        dot << "  f" << j << " -> f" << i << ";\n";
  dot << "}\n";
  return dot.str();
}

std::string dot_curve_graph(const CurveType& t) {
  std::ostringstream dot;
  dot << "digraph curve {\n  node [shape=circle];\n";
  for (std::size_t v = 0; v < t.vertices.size(); ++v)
    dot << "  v" << v << " [label=\"v" << v << "\\ncell "
        << t.vertices[v].cell << "\"];\n";
  for (std::size_t q = 0; q < t.internal_edges.size(); ++q) {
    const InternalEdge& e = t.internal_edges[q];
    dot << "  v" << e.tail << " -> v" << e.head << " [label=\"cell "
        << e.cell << " u=(";
    for (std::size_t k = 0; k < e.u.size(); ++k)
      dot << (k ? "," : "") << e.u[k];
    dot << ")\"];\n";
  }
  for (std::size_t r = 0; r < t.external_edges.size(); ++r) {
    const ExternalEdge& e = t.external_edges[r];
    dot << "  x" << r << " [shape=point];\n";
    dot << "  v" << e.vertex << " -> x" << r << " [style=dashed, label=\"cell "
        << e.cell << " u=(";
    for (std::size_t k = 0; k < e.u.size(); ++k)
      dot << (k ? "," : "") << e.u[k];
    dot << ")\"];\n";
  }
  dot << "}\n";
  return dot.str();
}

}  // namespace tropex::render
