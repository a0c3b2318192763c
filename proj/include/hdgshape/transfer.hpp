#pragma once

#include <array>
#include <vector>

#include "hdgshape/basis.hpp"
#include "hdgshape/computational_mesh.hpp"
#include "hdgshape/domain_shape.hpp"

namespace hdgshape {

/// Straight path from a point x on Gamma_h to xbar on Gamma.
/// t = (xbar - x) / l, or the edge normal when l = 0.
struct TransferNode {
  Point x{0.0, 0.0};
  Point xbar{0.0, 0.0};
  Point t{0.0, 0.0};
  double length = 0.0;
  BoundaryLocation location;
  Point normal{0.0, 0.0};  // outward normal of Omega at xbar
};

struct EdgeTransfer {
  int edge = -1;
  int element = -1;
  // Paths from the edge endpoints, in the canonical vertex order of the edge.
  std::array<TransferNode, 2> endpoints;
  // Paths from the Gauss-Legendre nodes; s in [-1, 1] runs vertices[0] -> vertices[1].
  std::vector<TransferNode> nodes;
  std::vector<double> s;
  std::vector<double> weights;  // reference weights on [-1, 1]
  double H_perp = 0.0;
  double h_perp = 0.0;
  double r = 0.0;
  int component = -1;
  bool dirichlet = true;  // mapped onto a fixed loop
  bool mixed = false;     // nodes landed on more than one loop
};

struct TransferMap {
  std::vector<EdgeTransfer> edges;  // one per boundary edge of D_h
  std::vector<int> slot_of_edge;    // mesh edge -> index into edges, -1 for interior edges
  double R = 0.0;
  int q = 0;

  const EdgeTransfer& of_edge(int edge) const {
    return edges[static_cast<std::size_t>(slot_of_edge[static_cast<std::size_t>(edge)])];
  }
};

/// Builds one path per boundary-edge node and per boundary corner.  Throws
/// GeometryError naming the edge when no admissible path exists.
TransferMap build_transfer_map(const ComputationalMesh& mesh, const DomainShape& shape, int q_per_edge);

/// Quadrature for the region between a boundary edge and Gamma.  Weights are
/// signed so that the patches tile Omega \ D_h algebraically.
struct ExtensionPatch {
  int edge = -1;
  int element = -1;
  double area = 0.0;
  std::vector<Point> points;
  std::vector<double> weights;
};

/// Patch quadrature exact to `degree` on every straight fan triangle.
std::vector<ExtensionPatch> build_extension_patches(const TransferMap& tm, const ComputationalMesh& mesh,
                                                    const DomainShape& shape, int degree);

AffineMap element_map(const ComputationalMesh& mesh, int e);

/// E_h(p)(x): the element polynomial evaluated at x, which may lie outside the element.
double extrapolate(const ComputationalMesh& mesh, int element, int k, const double* coeffs, const Point& x);

struct AdmissibilityReport {
  double r = 0.0;    // quasi-uniformity h_min / h
  double rho = 0.0;  // shape regularity
  double R = 0.0;
  double max_H_perp = 0.0;
  double H_threshold = 0.0;
  int edges_failing_H = 0;
  bool H_ok = true;
  double C_ext = 0.0;
  double C_inv = 0.0;
  double R_threshold = 0.0;
  bool R_ok = true;
};

/// H_e^perp and R checks with C_ext <= (k+1)^2 (3 beta + 2)^k, C_inv <= k^2,
/// beta = 1 / rho.  Reports only.
AdmissibilityReport check_admissibility(const ComputationalMesh& mesh, const TransferMap& tm, int k,
                                        double tau, double a_min);

}  // namespace hdgshape
