#include "core/stepper.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/norms.hpp"

namespace nscert {

const DiscreteField& Trajectory::level(int n) const {
  for (std::size_t i = 0; i < field_levels.size(); ++i)
    if (field_levels[i] == n) return fields[i];
  throw DomainError("trajectory level " + std::to_string(n) +
                    " was not retained");
}

Stepper::Stepper(const SpacePair& spaces, const TetMesh& mesh, double tau,
                 double mu, StepperOptions options)
    : spaces_(spaces),
      mesh_(mesh),
      tau_(tau),
      mu_(mu),
      options_(options),
      mass_(assemble_mass(spaces, mesh)),
      stiffness_(assemble_stiffness(spaces, mesh)),
      divergence_(assemble_divergence(spaces, mesh)),
      pressure_integral_(pressure_integral_vector(spaces, mesh)),
      solver_(spaces, mesh) {
  if (!(tau > 0) || !(mu > 0))
    throw DomainError("step requires tau > 0 and mu > 0");
}

DiscreteField Stepper::step(const DiscreteField& u_prev,
                            const VectorField* forcing) {
  const double t_next = u_prev.time + tau_;

  SaddleSystem system;
  system.A = (1.0 / tau_) * mass_ +
             0.5 * assemble_convection(u_prev.velocity, spaces_, mesh_) +
             mu_ * stiffness_;
  system.B = divergence_;
  system.rhs_velocity = (1.0 / tau_) * (mass_ * u_prev.velocity);
  if (forcing)
    system.rhs_velocity += assemble_forcing(*forcing, t_next, spaces_, mesh_);
  system.rhs_pressure = Eigen::VectorXd::Zero(spaces_.pressure_dofs());
  system.zero_mean_constraint = pressure_integral_;
  system.pressure_mean_target = 0.0;

  SaddleSolution sol = solver_.solve(system, options_.solver_tolerance);
  last_residual_ = sol.relative_residual;
  last_divergence_ = sol.divergence_inf;

  // H1-scaled divergence bound: the solve enforces B u = 0 directly, so this
  // only trips on an actual solver breakdown.
  const double h1_scale = std::sqrt(
      sol.velocity.dot(mass_ * sol.velocity) +
      sol.velocity.dot(stiffness_ * sol.velocity));
  if (!(sol.divergence_inf <=
        options_.divergence_tolerance * std::max(1.0, h1_scale)))
    throw SolverError("discrete divergence " +
                          std::to_string(sol.divergence_inf) +
                          " above tolerance after step",
                      {sol.relative_residual, sol.divergence_inf});

  DiscreteField next;
  next.velocity = std::move(sol.velocity);
  next.pressure = std::move(sol.pressure);
  next.time = t_next;
  return next;
}

DiscreteField step(const DiscreteField& u_prev, double tau, double mu,
                   const VectorField* forcing, const SpacePair& spaces,
                   const TetMesh& mesh, const StepperOptions& options) {
  Stepper stepper(spaces, mesh, tau, mu, options);
  return stepper.step(u_prev, forcing);
}

Trajectory run(const VectorField& u0, double tau, int steps, double mu,
               const VectorField* forcing, const SpacePair& spaces,
               const TetMesh& mesh, const StepperOptions& options) {
  if (steps < 1) throw DomainError("run requires at least one step");

  Trajectory traj;
  traj.tau = tau;
  traj.mu = mu;
  traj.steps = steps;
  traj.T = steps * tau;
  traj.zero_forcing = forcing == nullptr;

  DiscreteField current = interpolate(u0, spaces, mesh, 0.0);
  for (int dof : spaces.boundary_velocity_dofs) current.velocity[dof] = 0.0;

  auto record = [&](int level, const DiscreteField& f, double residual,
                    double div_inf) {
    StepDiagnostics d;
    d.step = level;
    d.time = f.time;
    const double l2 = field_norm(f, NormKind::L2, spaces, mesh);
    d.energy = 0.5 * l2 * l2;
    const double h1 = field_norm(f, NormKind::H1Semi, spaces, mesh);
    d.grad_sq = h1 * h1;
    d.l4 = field_norm(f, NormKind::L4, spaces, mesh);
    d.residual = residual;
    d.divergence_inf = div_inf;
    traj.diagnostics.push_back(d);
    traj.max_l4 = std::max(traj.max_l4, d.l4);
    traj.max_l2 = std::max(traj.max_l2, l2);
  };

  auto keep = [&](int level) {
    return level == 0 || level == steps ||
           (options.keep_every > 0 && level % options.keep_every == 0);
  };

  Stepper stepper(spaces, mesh, tau, mu, options);
  // the divergence of the interpolated initial data is reported, not checked:
  // the constraint applies to computed levels
  record(0, current, 0.0, stepper.divergence_inf(current));
  if (keep(0)) {
    traj.fields.push_back(current);
    traj.field_levels.push_back(0);
  }
  for (int n = 0; n < steps; ++n) {
    try {
      current = stepper.step(current, forcing);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(n + 1) + ": " + e.what(),
                        e.residual_history());
    }
    record(n + 1, current, stepper.last_residual(), stepper.last_divergence());
    if (keep(n + 1)) {
      traj.fields.push_back(current);
      traj.field_levels.push_back(n + 1);
    }
  }
  return traj;
}

const DiscreteField& reconstruct(const Trajectory& traj, double t) {
  const double tol = 1e-12 * std::max(traj.T, 1.0);
  if (t < -tol || t > traj.T + tol)
    throw DomainError("time " + std::to_string(t) + " outside [0, " +
                      std::to_string(traj.T) + "]");
  const double r = t / traj.tau;
  const long nearest = std::lround(r);
  int level;
  if (std::abs(t - nearest * traj.tau) <= tol)
    level = static_cast<int>(nearest);  // right endpoint of its slab
  else
    level = static_cast<int>(std::floor(r)) + 1;
  if (level < 0) level = 0;
  if (level > traj.steps) level = traj.steps;
  return traj.level(level);
}

}  // namespace nscert
