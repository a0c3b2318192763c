#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hdgshape/cli.hpp"
#include "hdgshape/errors.hpp"

namespace hdgshape {

namespace {

std::string numbered(const char* stem, int i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d.%s", stem, i, ext);
  return buf;
}

void write_boundary(const std::filesystem::path& path, const ShapeIterState& st) {
  std::ofstream out(path);
  out << "# iteration " << st.iteration << ", movable polyline vertices\nx,y\n";
  for (const BoundaryComponent& c : st.shape.components()) {
    if (!c.movable) continue;
    const auto* poly = std::get_if<Polyline>(&c.curve);
    if (!poly) continue;
    for (const Point& p : poly->points) out << format_number(p.x()) << ',' << format_number(p.y()) << '\n';
  }
}

double circle_distance(const DomainShape& shape, double radius) {
  double d = 0.0;
  for (const BoundaryComponent& c : shape.components()) {
    const auto* poly = std::get_if<Polyline>(&c.curve);
    if (!c.movable || !poly) continue;
    for (const Point& p : poly->points) d = std::max(d, std::abs(p.norm() - radius));
  }
  return d;
}

}  // namespace

OptimizationResult run_optimize(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.preset == Preset::Experiment1)
    throw ConfigError("preset experiment1 is a fixed-domain problem; use experiment2 or custom");
  OptimizationProblem p;
  p.data = shape_recovery_data(cfg.inner_radius);
  p.initial = initial_shape(cfg);
  p.background = std::make_shared<const BackgroundMesh>(build_background_mesh(cfg.box, cfg.grid, cfg.grid));
  p.hdg = cfg.hdg;
  p.opt = cfg.opt;
  p.opt.m0 = target_area(cfg);

  std::filesystem::path dir;
  std::ofstream history;
  if (!out_dir.empty()) {
    dir = out_dir;
    std::filesystem::create_directories(dir);
    history.open(dir / "history.csv");
    history << "# preset " << to_string(cfg.preset) << ", k = " << cfg.hdg.k << ", grid = " << cfg.grid
            << ", N = " << cfg.boundary_points << ", epsilon = " << format_number(p.opt.epsilon)
            << ", m0 = " << format_number(p.opt.m0) << "\n";
    history << "iteration,J,Jt,dJt,xi,chi,area,area_error,abs_area_error,tau,backtracks,elements,R,max_segment,"
               "energy_residual,descent_ok,armijo_ok\n";
  }

  const OptimizationResult res =
      run_optimization(p, [&](const ShapeIterState& st, const Discretization& disc, const ScalarHdgSolution& y) {
        if (dir.empty()) return;
        const double err = st.area - p.opt.m0;
        history << st.iteration << ',' << format_number(st.J) << ',' << format_number(st.Jt) << ','
                << format_number(st.dJt) << ',' << format_number(st.xi) << ',' << format_number(st.chi) << ','
                << format_number(st.area) << ',' << format_number(err) << ',' << format_number(std::abs(err)) << ','
                << format_number(st.tau) << ',' << st.backtracks << ',' << st.elements << ','
                << format_number(st.R) << ',' << format_number(st.max_segment) << ','
                << format_number(st.energy_residual) << ',' << (st.descent_ok ? 1 : 0) << ','
                << (st.armijo_ok ? 1 : 0) << '\n';
        history.flush();
        write_boundary(dir / numbered("boundary", st.iteration, "csv"), st);
        if (cfg.vtk_every > 0 && st.iteration % cfg.vtk_every == 0)
          write_vtk((dir / numbered("state", st.iteration, "vtk")).string(), disc, y);
      });

  if (!dir.empty()) {
    const ShapeIterState& last = res.history.back();
    std::ofstream sum(dir / "summary.txt");
    sum << "termination " << to_string(res.reason) << '\n';
    if (!res.message.empty()) sum << "message " << res.message << '\n';
    sum << "iterations " << last.iteration << '\n';
    sum << "J " << format_number(last.J) << '\n';
    sum << "area_error " << format_number(last.area - p.opt.m0) << '\n';
    sum << "max_segment " << format_number(last.max_segment) << '\n';
    if (cfg.preset == Preset::Experiment2)
      sum << "circle_distance " << format_number(circle_distance(last.shape, shape_recovery_radius())) << '\n';
    sum << "seed " << cfg.seed << '\n';
  }
  return res;
}

}  // namespace hdgshape
