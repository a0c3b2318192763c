#include <cmath>
#include <filesystem>
#include <fstream>

#include "hdgshape/cli.hpp"
#include "hdgshape/errors.hpp"

namespace hdgshape {

namespace {

ManufacturedProblem preset_problem(const RunConfig& cfg) {
  if (cfg.preset == Preset::Experiment2)
    throw ConfigError("preset experiment2 has no closed-form solution; use experiment1 or custom");
  return manufactured_annulus(cfg.outer_radius, cfg.inner_radius);
}

// Neumann datum sigma(x) n_h at the Gamma_h nodes of the movable edges.
std::vector<std::vector<Point>> manufactured_neumann(const Discretization& disc, const ManufacturedProblem& m) {
  std::vector<std::vector<Point>> out(disc.transfer.edges.size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const EdgeTransfer& et = disc.transfer.edges[s];
    if (et.dirichlet) continue;
    const Point n = disc.mesh->normal_from(et.edge, et.element);
    for (const TransferNode& node : et.nodes) out[s].push_back(m.sigma(node.x) * n);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& convergence_columns() {
  static const std::vector<std::string> cols{"y", "p", "z", "r", "V", "sigma", "trace_y", "trace_z", "trace_V", "G"};
  return cols;
}

ConvergenceTable run_converge(const RunConfig& cfg, const std::string& out_dir) {
  cfg.hdg.validate();
  if (cfg.levels.empty()) throw ConfigError("levels: at least one refinement level is required");
  const ManufacturedProblem m = preset_problem(cfg);

  ConvergenceTable table;
  for (int n : cfg.levels) {
    auto bg = std::make_shared<const BackgroundMesh>(build_background_mesh(cfg.box, n, n));
    const Discretization disc = make_discretization(bg, m.shape, cfg.hdg);
    DiffusionSolver solver(disc, m.data, cfg.hdg);
    const ScalarHdgSolution y = solver.state();
    const ScalarHdgSolution z = solver.adjoint(y);
    const TensorHdgSolution V =
        solve_deformation(disc, manufactured_neumann(disc, m), cfg.hdg, m.V, m.deformation_source);

    const ErrorNorms ey = compute_error_norms(disc, y, m.y, m.p);
    const ErrorNorms ez = compute_error_norms(disc, z, m.z, m.r);
    ErrorNorms eV;
    for (int c = 0; c < 2; ++c) {
      const ErrorNorms ec = compute_error_norms(
          disc, V.comp[static_cast<std::size_t>(c)], [&](const Point& x) { return m.V(x)[c]; },
          [&](const Point& x) { return Point(m.sigma(x).row(c).transpose()); });
      eV.primal += ec.primal * ec.primal;
      eV.flux += ec.flux * ec.flux;
      eV.trace += ec.trace * ec.trace;
    }

    const auto G = evaluate_shape_gradient(disc, y, z, m.data);
    double g_err = 0.0;
    for (std::size_t s = 0; s < G.size(); ++s) {
      const EdgeTransfer& et = disc.transfer.edges[s];
      if (et.dirichlet) continue;
      for (std::size_t r = 0; r < et.nodes.size(); ++r)
        g_err = std::max(g_err, std::abs(G[s][r] - m.G(et.nodes[r].xbar)));
    }

    ConvergenceRow row;
    row.cells = n;
    row.elements = static_cast<int>(disc.mesh->elements.size());
    row.h = bg->h;
    row.R = disc.transfer.R;
    row.errors = {ey.primal, ey.flux,          ez.primal,          ez.flux, std::sqrt(eV.primal), std::sqrt(eV.flux),
                  ey.trace,  ez.trace, std::sqrt(eV.trace), g_err};
    table.rows.push_back(std::move(row));
  }

  // Slopes use the finest three levels; coarse levels are pre-asymptotic.
  const std::size_t first = table.rows.size() > 3 ? table.rows.size() - 3 : 0;
  std::vector<double> h;
  for (std::size_t i = first; i < table.rows.size(); ++i) h.push_back(table.rows[i].h);
  for (std::size_t c = 0; c < convergence_columns().size(); ++c) {
    std::vector<double> e;
    for (std::size_t i = first; i < table.rows.size(); ++i) e.push_back(table.rows[i].errors[c]);
    table.slopes.push_back(fitted_slope(h, e));
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string header = "# preset " + to_string(cfg.preset) + ", k = " + std::to_string(cfg.hdg.k) +
                               ", tau = " + format_number(cfg.hdg.tau) + ", annulus " +
                               format_number(cfg.inner_radius) + " <= |x| <= " + format_number(cfg.outer_radius) +
                               "\n";
    std::ofstream csv(std::filesystem::path(out_dir) / "convergence.csv");
    csv << header << "# errors: L2 over Omega for volume variables, h-weighted trace norm, max |G_h - G| on Gamma\n";
    csv << "cells,elements,h,R";
    for (const auto& c : convergence_columns()) csv << ",err_" << c;
    csv << '\n';
    for (const auto& r : table.rows) {
      csv << r.cells << ',' << r.elements << ',' << format_number(r.h) << ',' << format_number(r.R);
      for (double e : r.errors) csv << ',' << format_number(e);
      csv << '\n';
    }
    std::ofstream sl(std::filesystem::path(out_dir) / "slopes.csv");
    sl << header << "# least-squares slope of log(error) against log(h) over the finest three levels\n";
    sl << "quantity,slope\n";
    for (std::size_t c = 0; c < table.slopes.size(); ++c)
      sl << convergence_columns()[c] << ',' << format_number(table.slopes[c]) << '\n';
  }
  return table;
}

}  // namespace hdgshape
