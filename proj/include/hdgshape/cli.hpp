#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdgshape/hdg.hpp"
#include "hdgshape/shapeopt.hpp"

namespace hdgshape {

enum class Preset { Experiment1, Experiment2, Custom };
std::string to_string(Preset p);

/// Flat run configuration.  Keys are listed in `config_keys()`; every key maps
/// to exactly one field below.
struct RunConfig {
  Preset preset = Preset::Experiment1;
  HdgConfig hdg;
  std::vector<int> levels{16, 32, 64, 128};  // background cells per direction, one entry per level
  int grid = 92;                             // cells per direction for optimize / mesh-info
  BoundingBox box{{-0.25, -0.25}, {0.25, 0.25}};
  double outer_radius = 0.2;
  double inner_radius = 0.05;
  OptConfig opt;
  int boundary_points = 2000;
  double initial_ax = 0.5;  // semi-axes of the initial ellipse
  double initial_ay = 0.33;
  int vtk_every = 0;  // 0: no field dumps
  std::uint64_t seed = 0;
};

RunConfig preset_config(Preset p);
Preset parse_preset(const std::string& name);
const std::vector<std::string>& config_keys();

/// Throws ConfigError for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines ('#' starts a comment), then applies the
/// `key=value` overrides.  A `preset` key, wherever it appears, selects the
/// defaults before any other key is applied.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides);
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Problem with closed-form state, adjoint and deformation solutions.
struct ManufacturedProblem {
  DomainShape shape;
  ProblemData data;
  ScalarField y, z;
  VectorField p, r;  // fluxes -grad y, -grad z
  VectorField V;
  std::function<Eigen::Matrix2d(const Point&)> sigma;  // row c: -grad V_c
  VectorField deformation_source;
  ScalarField G;  // shape gradient on Gamma
};

/// Annulus inner <= |x| <= outer with y = z = sin x1 sin x2 and
/// V = exp(|x|^2 - inner^2) (1, 1).  The outer circle is the movable part.
ManufacturedProblem manufactured_annulus(double outer, double inner);

/// Experiment-2 data: target (|x|^2 - A)(|x|^2 - B), A = 1 / (2 pi), B = inner^2.
ProblemData shape_recovery_data(double inner);
double shape_recovery_radius();
double shape_recovery_area(double inner);

/// opt.m0 when set, otherwise the Experiment-2 target area for inner_radius.
double target_area(const RunConfig& cfg);

/// Initial shape of an optimization run: movable ellipse polyline around a
/// fixed hole circle.
DomainShape initial_shape(const RunConfig& cfg);

/// Least-squares slope of log(err) against log(h); nullopt with fewer than two
/// usable points.
std::optional<double> fitted_slope(const std::vector<double>& h, const std::vector<double>& err);

/// 17 significant digits, or the dash sentinel for a missing value.
std::string format_number(std::optional<double> v);

struct ConvergenceRow {
  int cells = 0;
  int elements = 0;
  double h = 0.0;
  double R = 0.0;
  std::vector<double> errors;  // ordered as convergence_columns()
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<std::optional<double>> slopes;  // per error column
};

const std::vector<std::string>& convergence_columns();

/// Solves state, adjoint and deformation on every level.  Writes
/// convergence.csv and slopes.csv into out_dir when it is not empty.
ConvergenceTable run_converge(const RunConfig& cfg, const std::string& out_dir);

/// Runs the optimization and writes history.csv, boundary_NNNN.csv per
/// iteration, summary.txt and optional VTK dumps.
OptimizationResult run_optimize(const RunConfig& cfg, const std::string& out_dir);

struct MeshInfo {
  int elements = 0;
  int boundary_edges = 0;
  double h = 0.0;
  double h_min = 0.0;
  AdmissibilityReport admissibility;
  std::vector<int> r_histogram;  // r_e in [0, 2) split into 10 bins, last bin open
  double area_Dh = 0.0;
  double area_patches = 0.0;
  double area_Omega = 0.0;
  double max_segment = 0.0;
};

MeshInfo mesh_info(const RunConfig& cfg, const DomainShape& shape);
/// Report for the preset shape (and, for experiment2, the optimal disk) to `os`
/// and mesh_info.txt.
void run_mesh_info(const RunConfig& cfg, const std::string& out_dir, std::ostream& os);

/// Legacy ASCII VTK of D_h with per-element means of y_h as cell data.
void write_vtk(const std::string& path, const Discretization& disc, const ScalarHdgSolution& y);

}  // namespace hdgshape
