#include <cmath>
#include <cstdio>
#include <fstream>

#include "hdgshape/cli.hpp"
#include "hdgshape/errors.hpp"
#include "hdgshape/quadrature.hpp"
#include "hdgshape/transfer.hpp"

namespace hdgshape {

std::optional<double> fitted_slope(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size() && i < err.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0) || !std::isfinite(err[i])) continue;
    lx.push_back(std::log(h[i]));
    ly.push_back(std::log(err[i]));
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  return sxy / sxx;
}

std::string format_number(std::optional<double> v) {
  if (!v) return "—";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

void write_vtk(const std::string& path, const Discretization& disc, const ScalarHdgSolution& y) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  const ComputationalMesh& mesh = *disc.mesh;
  const std::size_t ne = mesh.elements.size();
  out << "# vtk DataFile Version 3.0\nhdgshape state\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 3 * ne << " double\n";
  char buf[96];
  for (std::size_t e = 0; e < ne; ++e)
    for (int i = 0; i < 3; ++i) {
      const Point v = mesh.element_vertex(static_cast<int>(e), i);
      std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", v.x(), v.y());
      out << buf;
    }
  out << "CELLS " << ne << ' ' << 4 * ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) out << "3 " << 3 * e << ' ' << 3 * e + 1 << ' ' << 3 * e + 2 << '\n';
  out << "CELL_TYPES " << ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) out << "5\n";

  const Rule2D& rule = triangle_rule(2 * y.k);
  out << "CELL_DATA " << ne << "\nSCALARS y_mean double 1\nLOOKUP_TABLE default\n";
  for (std::size_t e = 0; e < ne; ++e) {
    const AffineMap map = element_map(mesh, static_cast<int>(e));
    double sum = 0.0, wsum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      sum += rule.weights[q] * y.primal_at(static_cast<int>(e), map.to_physical(rule.points[q]));
      wsum += rule.weights[q];
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", sum / wsum);
    out << buf;
  }
}

}  // namespace hdgshape
