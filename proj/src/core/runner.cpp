#include "core/runner.hpp"

#include <cmath>
#include <sstream>

#include "core/catalog.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/util.hpp"

namespace nscert {

namespace {

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string snapshot_name(int level) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "velocity_%06d.vtk", level);
  return buf;
}

struct CompletedRun {
  TetMesh mesh;
  SpacePair spaces;
  Trajectory traj;
  ResolvedFields fields;
};

CompletedRun execute(const RunConfig& config) {
  CompletedRun run;
  run.mesh = build_config_mesh(config);
  run.spaces = build_spaces(run.mesh);
  run.fields = resolve_fields(config);

  StepperOptions options;
  options.solver_tolerance = config.solver_tol;
  options.divergence_tolerance = config.divergence_tol;
  const VectorField* forcing =
      run.fields.forcing ? &*run.fields.forcing : nullptr;
  run.traj = nscert::run(run.fields.u0, config.tau, config.N, config.mu,
                         forcing, run.spaces, run.mesh, options);
  return run;
}

std::string norms_csv(const NormReport& report) {
  std::ostringstream os;
  os << "level,time,l2,h1semi,l4,running_max_l4\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i)
    os << report.levels[i] << "," << format_g17(report.times[i]) << ","
       << format_g17(report.l2[i]) << "," << format_g17(report.h1semi[i])
       << "," << format_g17(report.l4[i]) << ","
       << format_g17(report.running_max_l4[i]) << "\n";
  return os.str();
}

std::string certificate_csv(const Certificate& cert) {
  std::ostringstream os;
  os << "verdict,M_lhs,M,linf_l4,u0_h2,phi_M,Phi_M,log10_phi_M,log10_Phi_M,"
        "tau_M,h_M,log10_tau_M,log10_h_M,tau,h,cond_norm_bound,cond_tau,"
        "cond_h,energy_ledger,error_bound,threshold_underflow\n";
  os << cert.verdict << "," << format_g17(cert.M_lhs) << ","
     << format_g17(cert.M) << "," << format_g17(cert.linf_l4) << ","
     << format_g17(cert.u0_h2) << "," << format_g17(cert.phi_M.value) << ","
     << format_g17(cert.Phi_M.value) << ","
     << format_longdouble_g(cert.phi_M.log10_value, 21) << ","
     << format_longdouble_g(cert.Phi_M.log10_value, 21) << ","
     << format_g17(cert.tau_M.value) << "," << format_g17(cert.h_M.value)
     << "," << format_longdouble_g(cert.tau_M.log10_value, 21) << ","
     << format_longdouble_g(cert.h_M.log10_value, 21) << ","
     << format_g17(cert.tau) << "," << format_g17(cert.h) << ","
     << bool_str(cert.cond_norm_bound) << "," << bool_str(cert.cond_tau)
     << "," << bool_str(cert.cond_h) << "," << cert.energy_status << ","
     << format_g17(cert.error_bound) << ","
     << bool_str(cert.tau_M.underflow || cert.h_M.underflow) << "\n";
  return os.str();
}

}  // namespace

std::string diagnostics_csv(const Trajectory& traj,
                            const std::vector<double>* err_l2) {
  std::ostringstream os;
  os << "step,time,energy,grad_sq,l4,residual,div_inf";
  if (err_l2) os << ",err_l2";
  os << "\n";
  for (std::size_t i = 0; i < traj.diagnostics.size(); ++i) {
    const auto& d = traj.diagnostics[i];
    os << d.step << "," << format_g17(d.time) << "," << format_g17(d.energy)
       << "," << format_g17(d.grad_sq) << "," << format_g17(d.l4) << ","
       << format_g17(d.residual) << "," << format_g17(d.divergence_inf);
    if (err_l2) os << "," << format_g17((*err_l2)[i]);
    os << "\n";
  }
  return os.str();
}

std::string render_certificate(const Certificate& cert,
                               const RunConfig& config, double h) {
  std::ostringstream os;
  os << "nscert certificate\n";
  os << "==================\n\n";
  os << "verdict: " << cert.verdict << "\n";
  os << "regularity: " << cert.regularity << "\n";
  os << "note: a \"certified\" verdict is relative to the constants ledger "
        "below\n\n";

  os << "[conditions]\n";
  os << "M_lhs = " << format_g17(cert.M_lhs) << "\n";
  os << "M = " << format_g17(cert.M) << "\n";
  os << "norm_bound_satisfied = " << bool_str(cert.cond_norm_bound) << "\n";
  os << "tau = " << format_g17(cert.tau) << "\n";
  os << "h = " << format_g17(h) << "\n";
  os << "tau_M = " << format_g17(cert.tau_M.value) << "\n";
  os << "h_M = " << format_g17(cert.h_M.value) << "\n";
  os << "log10_tau_M = " << format_longdouble_g(cert.tau_M.log10_value, 21)
     << "\n";
  os << "log10_h_M = " << format_longdouble_g(cert.h_M.log10_value, 21)
     << "\n";
  os << "log10_tau_gap = " << format_longdouble_g(cert.log10_tau_gap, 21)
     << "\n";
  os << "log10_h_gap = " << format_longdouble_g(cert.log10_h_gap, 21) << "\n";
  os << "tau_condition_satisfied = " << bool_str(cert.cond_tau) << "\n";
  os << "h_condition_satisfied = " << bool_str(cert.cond_h) << "\n";
  os << "threshold_underflow = "
     << bool_str(cert.tau_M.underflow || cert.h_M.underflow) << "\n";
  if (cert.tau_M.underflow || cert.h_M.underflow)
    os << "warning: linear threshold values clamped to the smallest positive "
          "normal; use the log10 fields\n";
  os << "phi_M = " << format_g17(cert.phi_M.value) << "\n";
  os << "Phi_M = " << format_g17(cert.Phi_M.value) << "\n";
  os << "log10_phi_M = " << format_longdouble_g(cert.phi_M.log10_value, 21)
     << "\n";
  os << "log10_Phi_M = " << format_longdouble_g(cert.Phi_M.log10_value, 21)
     << "\n";
  os << "energy_ledger = " << cert.energy_status << "\n";
  os << "error_bound = " << format_g17(cert.error_bound)
     << "  # tau + h^(3/2), meaningful when certified\n";

  os << "\n[norm summary]\n";
  os << "linf_l4 = " << format_g17(cert.linf_l4) << "\n";
  os << "u0_h2 = " << format_g17(cert.u0_h2)
     << "  # full H2 norm of u0 (reading of the H1_0-cap-H2 norm)\n";

  os << "\n[constants]\n";
  for (const auto& name : ConstantsLedger::names()) {
    os << name << " = " << format_g17(cert.ledger.get(name));
    auto it = cert.ledger.provenance.find(name);
    os << "  # " << (it == cert.ledger.provenance.end() ? "default" : it->second)
       << "\n";
  }

  os << "\n[run]\n";
  os << "mesh = " << config.nx << " " << config.ny << " " << config.nz
     << "\n";
  os << "refine = " << config.refine << "\n";
  os << "tau = " << format_g17(config.tau) << "\n";
  os << "N = " << config.N << "\n";
  os << "T = " << format_g17(config.T) << "\n";
  os << "mu = " << format_g17(config.mu) << "\n";
  os << "threads = " << config.threads << "\n";
  os << "solver_tol = " << format_g17(config.solver_tol) << "\n";
  os << "seed = " << config.seed << "\n";
  return os.str();
}

void cmd_run(const RunConfig& config, const std::string& out_dir) {
  ensure_directory(out_dir);
  CompletedRun run = execute(config);

  std::vector<double> err_l2;
  const std::vector<double>* err_ptr = nullptr;
  if (run.fields.exact_velocity) {
    for (const auto& f : run.traj.fields)
      err_l2.push_back(error_norm(f, *run.fields.exact_velocity, NormKind::L2,
                                  run.spaces, run.mesh, f.time));
    err_ptr = &err_l2;
  }

  write_text_file(out_dir + "/diagnostics.csv",
                  diagnostics_csv(run.traj, err_ptr));
  write_text_file(out_dir + "/config_echo.txt", echo_config(config));

  if (config.snapshot_stride > 0) {
    for (std::size_t i = 0; i < run.traj.fields.size(); ++i) {
      const int level = run.traj.field_levels[i];
      if (level % config.snapshot_stride == 0 || level == run.traj.steps)
        write_vtk_field(run.mesh, run.spaces, run.traj.fields[i],
                        out_dir + "/" + snapshot_name(level));
    }
  }
}

CertifyOutcome cmd_certify(const RunConfig& config,
                           const std::string& out_dir) {
  ensure_directory(out_dir);
  CompletedRun run = execute(config);

  Certificate cert = certify(run.traj, run.fields.u0, config.ledger,
                             config.M_override, run.spaces, run.mesh);

  CertifyOutcome outcome;
  outcome.certificate = cert;
  outcome.report_path = out_dir + "/certificate.txt";
  write_text_file(outcome.report_path,
                  render_certificate(cert, config, run.mesh.h));
  write_text_file(out_dir + "/certificate.csv", certificate_csv(cert));
  write_text_file(out_dir + "/norms.csv",
                  norms_csv(norm_report(run.traj, run.fields.u0, run.spaces,
                                        run.mesh)));
  write_text_file(out_dir + "/config_echo.txt", echo_config(config));
  return outcome;
}

InterpolationStudy interpolation_convergence_study(
    const VectorField& field, const std::vector<int>& cells, const Box& box) {
  InterpolationStudy study;
  std::vector<double> log_h, log_e;
  for (int n : cells) {
    const TetMesh mesh = build_box_mesh(n, n, n, box);
    const SpacePair spaces = build_spaces(mesh);
    const DiscreteField fh = interpolate(field, spaces, mesh, 0.0);
    const double err = error_norm(fh, field, NormKind::L2, spaces, mesh, 0.0);
    study.h.push_back(mesh.h);
    study.err_l2.push_back(err);
    log_h.push_back(std::log(mesh.h));
    log_e.push_back(std::log(err));
  }
  study.order = least_squares_slope(log_h, log_e);
  return study;
}

SpatialStudy manufactured_spatial_study(const RunConfig& config,
                                        const std::vector<int>& cells) {
  const CatalogEntry* pair = find_catalog("mms");
  SpatialStudy study;
  std::vector<double> log_h, log_e;
  for (int n : cells) {
    const TetMesh mesh = build_box_mesh(n, n, n, config_box(config));
    const SpacePair spaces = build_spaces(mesh);
    const VectorField forcing =
        manufactured_forcing(pair->velocity, pair->pressure, config.mu);
    StepperOptions options;
    options.solver_tolerance = config.solver_tol;
    const Trajectory traj = run(pair->velocity, config.tau, config.N,
                                config.mu, &forcing, spaces, mesh, options);
    double err = 0.0;
    for (const auto& f : traj.fields)
      err = std::max(err, error_norm(f, pair->velocity, NormKind::L2, spaces,
                                     mesh, f.time));
    study.h.push_back(mesh.h);
    study.err_linf_l2.push_back(err);
    log_h.push_back(std::log(mesh.h));
    log_e.push_back(std::log(err));
  }
  study.order = least_squares_slope(log_h, log_e);
  return study;
}

TemporalStudy temporal_convergence_study(const RunConfig& config) {
  const CatalogEntry* pair = find_catalog("mms");
  const TetMesh mesh = build_config_mesh(config);
  const SpacePair spaces = build_spaces(mesh);
  const VectorField forcing =
      manufactured_forcing(pair->velocity, pair->pressure, config.mu);
  StepperOptions options;
  options.solver_tolerance = config.solver_tol;

  TemporalStudy study;
  study.reference_tau = config.tau / 8.0;
  const int ref_steps = config.N * 8;
  StepperOptions ref_options = options;
  ref_options.keep_every = 8;  // comparison times are multiples of tau
  const Trajectory reference =
      run(pair->velocity, study.reference_tau, ref_steps, config.mu, &forcing,
          spaces, mesh, ref_options);

  std::vector<double> log_tau, log_exact, log_ref;
  for (int factor : {4, 2, 1}) {
    const double tau = config.tau * factor;
    const int steps = config.N / factor;
    if (steps * factor != config.N)
      throw DomainError("temporal study requires N divisible by 4");
    const Trajectory traj = run(pair->velocity, tau, steps, config.mu,
                                &forcing, spaces, mesh, options);

    // Final-time errors: the first steps carry the projection of the
    // interpolated initial data into the discretely divergence-free subspace,
    // a layer that damps at a tau-dependent rate and is gone by T.
    const DiscreteField& last = traj.level(steps);
    const double err_exact = error_norm(last, pair->velocity, NormKind::L2,
                                        spaces, mesh, last.time);
    DiscreteField diff = last;
    diff.velocity -= reference.level(steps * factor * 8).velocity;
    const double err_ref = field_norm(diff, NormKind::L2, spaces, mesh);
    study.taus.push_back(tau);
    study.err_vs_exact.push_back(err_exact);
    study.err_vs_reference.push_back(err_ref);
    log_tau.push_back(std::log(tau));
    log_exact.push_back(std::log(err_exact));
    log_ref.push_back(std::log(err_ref));
  }
  study.order_vs_exact = least_squares_slope(log_tau, log_exact);
  study.order_vs_reference = least_squares_slope(log_tau, log_ref);
  return study;
}

void cmd_convergence(const RunConfig& config, const std::string& out_dir,
                     int levels) {
  if (levels < 2) throw DomainError("convergence requires levels >= 2");
  ensure_directory(out_dir);

  std::vector<int> cells;
  for (int l = 0; l < levels; ++l) cells.push_back(config.nx << l);

  const CatalogEntry* sine = find_catalog("sine");
  const CatalogEntry* pair = find_catalog("mms");
  const Box box = config_box(config);

  {
    const InterpolationStudy study =
        interpolation_convergence_study(sine->velocity, cells, box);
    std::ostringstream os;
    os << "h,err_l2,order\n";
    for (std::size_t i = 0; i < study.h.size(); ++i)
      os << format_g17(study.h[i]) << "," << format_g17(study.err_l2[i])
         << "," << (i + 1 == study.h.size() ? format_g17(study.order) : "")
         << "\n";
    write_text_file(out_dir + "/interpolation.csv", os.str());
  }

  {
    const ProjectionStudy study = projection_convergence_study(
        pair->velocity, *pair->pressure, cells, box, 0.0);
    std::ostringstream os;
    os << "h,err_velocity_l2,err_velocity_l4,err_velocity_h1,"
          "err_pressure_l2,order_l2,order_l4,order_h1,order_p\n";
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
      const auto& r = study.rows[i];
      os << format_g17(r.h) << "," << format_g17(r.velocity_l2) << ","
         << format_g17(r.velocity_l4) << "," << format_g17(r.velocity_h1)
         << "," << format_g17(r.pressure_l2);
      if (i + 1 == study.rows.size())
        os << "," << format_g17(study.order_velocity_l2) << ","
           << format_g17(study.order_velocity_l4) << ","
           << format_g17(study.order_velocity_h1) << ","
           << format_g17(study.order_pressure_l2);
      else
        os << ",,,,";
      os << "\n";
    }
    write_text_file(out_dir + "/projection.csv", os.str());
  }

  {
    const SpatialStudy study = manufactured_spatial_study(config, cells);
    std::ostringstream os;
    os << "h,err_linf_l2,order\n";
    for (std::size_t i = 0; i < study.h.size(); ++i)
      os << format_g17(study.h[i]) << ","
         << format_g17(study.err_linf_l2[i]) << ","
         << (i + 1 == study.h.size() ? format_g17(study.order) : "") << "\n";
    write_text_file(out_dir + "/mms_spatial.csv", os.str());
  }

  {
    const TemporalStudy study = temporal_convergence_study(config);
    std::ostringstream os;
    os << "tau,err_vs_exact,err_vs_reference,order_vs_exact,order_vs_"
          "reference\n";
    for (std::size_t i = 0; i < study.taus.size(); ++i) {
      os << format_g17(study.taus[i]) << ","
         << format_g17(study.err_vs_exact[i]) << ","
         << format_g17(study.err_vs_reference[i]);
      if (i + 1 == study.taus.size())
        os << "," << format_g17(study.order_vs_exact) << ","
           << format_g17(study.order_vs_reference);
      else
        os << ",,";
      os << "\n";
    }
    write_text_file(out_dir + "/mms_temporal.csv", os.str());
  }
}

void cmd_project(const RunConfig& config, const std::string& out_dir) {
  ensure_directory(out_dir);
  const CatalogEntry* pair = find_catalog("mms");
  const TetMesh mesh = build_config_mesh(config);
  const SpacePair spaces = build_spaces(mesh);
  const ProjectionResult proj =
      stokes_ritz_project(pair->velocity, *pair->pressure, spaces, mesh, 0.0);

  const double err_l2 =
      error_norm(proj.field, pair->velocity, NormKind::L2, spaces, mesh, 0.0);
  const double err_h1 = error_norm(proj.field, pair->velocity,
                                   NormKind::H1Semi, spaces, mesh, 0.0);

  std::ostringstream os;
  os << "h,err_velocity_l2,err_velocity_h1,residual,divergence_inf,mean_gap\n";
  os << format_g17(mesh.h) << "," << format_g17(err_l2) << ","
     << format_g17(err_h1) << "," << format_g17(proj.residual) << ","
     << format_g17(proj.divergence_inf) << "," << format_g17(proj.mean_gap)
     << "\n";
  write_text_file(out_dir + "/projection_single.csv", os.str());
}

std::string mesh_info(const RunConfig& config, const std::string& out_dir) {
  const TetMesh mesh = build_config_mesh(config);
  const SpacePair spaces = build_spaces(mesh);
  const QualityReport quality = quality_report(mesh);

  std::ostringstream os;
  os << "mesh = " << config.nx << " " << config.ny << " " << config.nz
     << " cells, refine " << config.refine << "\n";
  os << "vertices = " << mesh.vertex_count() << "\n";
  os << "tets = " << mesh.tet_count() << "\n";
  os << "boundary_faces = " << mesh.boundary_faces.size() << "\n";
  os << "edges = " << spaces.num_edges << "\n";
  os << "velocity_dofs = " << spaces.velocity_dofs() << "\n";
  os << "pressure_dofs = " << spaces.pressure_dofs() << "\n";
  os << "h = " << format_g17(mesh.h) << "\n";
  os << "volume = " << format_g17(mesh.box.volume()) << "\n";
  os << "diameter_ratio = " << format_g17(quality.diameter_ratio) << "\n";
  os << "shape_regularity = " << format_g17(quality.shape_regularity) << "\n";

  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    write_vtk_mesh(mesh, out_dir + "/mesh.vtk");
  }
  return os.str();
}

}  // namespace nscert
