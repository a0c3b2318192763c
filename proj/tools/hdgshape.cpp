#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdgshape/cli.hpp"
#include "hdgshape/errors.hpp"

using namespace hdgshape;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

void print_table(const ConvergenceTable& t) {
  std::printf("%8s %9s %11s", "cells", "elements", "h");
  for (const auto& c : convergence_columns()) std::printf(" %11s", c.c_str());
  std::printf("\n");
  for (const auto& r : t.rows) {
    std::printf("%8d %9d %11.4e", r.cells, r.elements, r.h);
    for (double e : r.errors) std::printf(" %11.4e", e);
    std::printf("\n");
  }
  std::printf("%30s", "slope");
  for (const auto& s : t.slopes) {
    if (s)
      std::printf(" %11.3f", *s);
    else
      std::printf(" %10s%s", "", "—");
  }
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unfitted HDG solvers and shape optimization"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file")->required();
    sub->add_option("--set", overrides, "override one key, key=value (repeatable)");
    sub->add_option("--out", out_dir, "output directory")->required();
  };
  CLI::App* converge = app.add_subcommand("converge", "convergence table on nested meshes");
  CLI::App* optimize = app.add_subcommand("optimize", "shape optimization run");
  CLI::App* info = app.add_subcommand("mesh-info", "mesh admissibility and geometry report");
  for (CLI::App* sub : {converge, optimize, info}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    const RunConfig cfg = load_config(config_path, overrides);
    if (converge->parsed()) {
      print_table(run_converge(cfg, out_dir));
    } else if (optimize->parsed()) {
      const OptimizationResult res = run_optimize(cfg, out_dir);
      const ShapeIterState& last = res.history.back();
      std::printf("%s after %d iterations: J = %.6e, area - m0 = %+.3e, max segment = %.3e\n",
                  to_string(res.reason).c_str(), last.iteration, last.J, last.area - target_area(cfg),
                  last.max_segment);
      if (!res.message.empty()) std::printf("%s\n", res.message.c_str());
    } else {
      run_mesh_info(cfg, out_dir, std::cout);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "geometry failure: %s\n", e.what());
    return kNumericalError;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalError;
  }
  return 0;
}
