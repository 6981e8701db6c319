#pragma once

#include <string>

#include "core/config.hpp"
#include "core/projection.hpp"

namespace nscert {

// Batch commands. Each writes its artifacts under `out_dir` and throws on
// execution failure; verdicts are outputs, not errors. File schemas are
// frozen (see README): diagnostics.csv, certificate.txt / certificate.csv /
// norms.csv, interpolation.csv / projection.csv / mms_spatial.csv /
// mms_temporal.csv.

void cmd_run(const RunConfig& config, const std::string& out_dir);

struct CertifyOutcome {
  Certificate certificate;
  std::string report_path;
};
CertifyOutcome cmd_certify(const RunConfig& config, const std::string& out_dir);

void cmd_convergence(const RunConfig& config, const std::string& out_dir,
                     int levels);

void cmd_project(const RunConfig& config, const std::string& out_dir);

// Mesh statistics as text; also writes mesh.vtk when out_dir is nonempty.
std::string mesh_info(const RunConfig& config, const std::string& out_dir);

// Shared report rendering (also used by tests).
std::string render_certificate(const Certificate& cert,
                               const RunConfig& config, double h);
std::string diagnostics_csv(const Trajectory& traj,
                            const std::vector<double>* err_l2);

// Convergence-study building blocks.
struct InterpolationStudy {
  std::vector<double> h, err_l2;
  double order = 0.0;
};
InterpolationStudy interpolation_convergence_study(
    const VectorField& field, const std::vector<int>& cells, const Box& box);

struct TemporalStudy {
  std::vector<double> taus, err_vs_exact, err_vs_reference;
  double order_vs_exact = 0.0;
  double order_vs_reference = 0.0;
  double reference_tau = 0.0;
};
// Fixed mesh, taus {4 tau, 2 tau, tau}; the reference trajectory uses
// tau / 8 on the same mesh so the spatial error cancels in the reference
// column. err columns are Linf-in-time L2 velocity errors.
TemporalStudy temporal_convergence_study(const RunConfig& config);

struct SpatialStudy {
  std::vector<double> h, err_linf_l2;
  double order = 0.0;
};
SpatialStudy manufactured_spatial_study(const RunConfig& config,
                                        const std::vector<int>& cells);

}  // namespace nscert
