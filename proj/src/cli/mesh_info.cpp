#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hdgshape/cli.hpp"
#include "hdgshape/errors.hpp"

namespace hdgshape {

MeshInfo mesh_info(const RunConfig& cfg, const DomainShape& shape) {
  auto bg = std::make_shared<const BackgroundMesh>(build_background_mesh(cfg.box, cfg.grid, cfg.grid));
  const Discretization disc = make_discretization(bg, shape, cfg.hdg);
  MeshInfo info;
  info.elements = static_cast<int>(disc.mesh->elements.size());
  info.boundary_edges = static_cast<int>(disc.mesh->boundary_edges.size());
  info.h = bg->h;
  info.h_min = bg->h_min;
  info.admissibility = check_admissibility(*disc.mesh, disc.transfer, cfg.hdg.k, cfg.hdg.tau, 1.0);
  info.r_histogram.assign(10, 0);
  for (const EdgeTransfer& et : disc.transfer.edges) {
    const int bin = std::min(9, static_cast<int>(et.r / 0.2));
    ++info.r_histogram[static_cast<std::size_t>(std::max(0, bin))];
  }
  info.area_Dh = disc.mesh->area();
  for (const ExtensionPatch& p : disc.patches) info.area_patches += p.area;
  info.area_Omega = shape.area();
  info.max_segment = shape.max_segment_length();
  return info;
}

namespace {

void report(std::ostream& os, const std::string& title, const MeshInfo& m) {
  const AdmissibilityReport& a = m.admissibility;
  os << "[" << title << "]\n";
  os << "elements " << m.elements << "\nboundary_edges " << m.boundary_edges << '\n';
  os << "h " << format_number(m.h) << "\nh_min " << format_number(m.h_min) << '\n';
  os << "quasi_uniformity_r " << format_number(a.r) << "\nshape_regularity_rho " << format_number(a.rho) << '\n';
  os << "R " << format_number(a.R) << '\n';
  os << "max_H_perp " << format_number(a.max_H_perp) << "\nH_threshold " << format_number(a.H_threshold)
     << "\nedges_failing_H " << a.edges_failing_H << "\nH_ok " << (a.H_ok ? "pass" : "fail") << '\n';
  os << "C_ext " << format_number(a.C_ext) << "\nC_inv " << format_number(a.C_inv) << "\nR_threshold "
     << format_number(a.R_threshold) << "\nR_ok " << (a.R_ok ? "pass" : "fail") << '\n';
  os << "r_e_histogram";
  char label[32];
  for (std::size_t b = 0; b < m.r_histogram.size(); ++b) {
    if (b < 9)
      std::snprintf(label, sizeof label, "[%.1f,%.1f)", 0.2 * static_cast<double>(b), 0.2 * static_cast<double>(b + 1));
    else
      std::snprintf(label, sizeof label, ">=%.1f", 0.2 * static_cast<double>(b));
    os << ' ' << label << ':' << m.r_histogram[b];
  }
  os << '\n';
  const double total = m.area_Dh + m.area_patches;
  os << "area_Dh " << format_number(m.area_Dh) << "\narea_patches " << format_number(m.area_patches)
     << "\narea_Omega " << format_number(m.area_Omega) << "\narea_identity_defect "
     << format_number(std::abs(total - m.area_Omega) / m.area_Omega) << '\n';
  os << "max_segment " << format_number(m.max_segment) << "\n\n";
}

}  // namespace

void run_mesh_info(const RunConfig& cfg, const std::string& out_dir, std::ostream& os) {
  cfg.hdg.validate();
  std::ostringstream text;
  text << "# preset " << to_string(cfg.preset) << ", grid " << cfg.grid << ", k = " << cfg.hdg.k << "\n";
  if (cfg.preset == Preset::Experiment2) {
    report(text, "initial shape", mesh_info(cfg, initial_shape(cfg)));
    const DomainShape disk({{Polyline{regular_polygon({0.0, 0.0}, shape_recovery_radius(), cfg.boundary_points)},
                             false, true},
                            {Circle{{0.0, 0.0}, cfg.inner_radius}, true, false}});
    report(text, "optimal disk", mesh_info(cfg, disk));
  } else {
    report(text, "annulus", mesh_info(cfg, manufactured_annulus(cfg.outer_radius, cfg.inner_radius).shape));
  }
  os << text.str();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(std::filesystem::path(out_dir) / "mesh_info.txt") << text.str();
  }
}

}  // namespace hdgshape
