#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "core/saddle.hpp"

namespace nscert {

struct StepperOptions {
  double solver_tolerance = 1e-10;    // relative residual of each solve
  double divergence_tolerance = 1e-9; // max-norm bound on B u^{n+1}
  int keep_every = 1;                 // field retention stride (norms stay per-step)
};

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;       // (1/2) ||u||_{L2}^2
  double grad_sq = 0.0;      // ||grad u||_{L2}^2
  double l4 = 0.0;           // ||u||_{L4}
  double residual = 0.0;     // linear-solver relative residual
  double divergence_inf = 0.0;
};

// One computed trajectory u^0..u^N with its per-step ledger. Fields are kept
// at stride keep_every (level 0 and level N always); diagnostics and the
// running maxima cover every level regardless.
struct Trajectory {
  std::vector<DiscreteField> fields;
  std::vector<int> field_levels;       // level index of each stored field
  std::vector<StepDiagnostics> diagnostics;  // one row per level, 0..N
  double tau = 0.0;
  double mu = 0.0;
  double T = 0.0;
  int steps = 0;
  bool zero_forcing = true;
  double max_l4 = 0.0;  // running max over levels of ||u^n||_{L4}
  double max_l2 = 0.0;

  bool complete() const { return static_cast<int>(fields.size()) == steps + 1; }
  const DiscreteField& level(int n) const;
};

// Advances the linearized scheme: one saddle-point solve per call with the
// convection transport frozen at the previous level.
class Stepper {
 public:
  Stepper(const SpacePair& spaces, const TetMesh& mesh, double tau, double mu,
          StepperOptions options = {});

  DiscreteField step(const DiscreteField& u_prev,
                     const VectorField* forcing = nullptr);

  const SpacePair& spaces() const { return spaces_; }
  const TetMesh& mesh() const { return mesh_; }
  double last_residual() const { return last_residual_; }
  double last_divergence() const { return last_divergence_; }
  double divergence_inf(const DiscreteField& field) const {
    return (divergence_ * field.velocity).lpNorm<Eigen::Infinity>();
  }

 private:
  const SpacePair& spaces_;
  const TetMesh& mesh_;
  double tau_, mu_;
  StepperOptions options_;
  SpMat mass_, stiffness_, divergence_;
  Eigen::VectorXd pressure_integral_;
  SaddleSolver solver_;
  double last_residual_ = 0.0;
  double last_divergence_ = 0.0;
};

// One-shot step, for tests and small studies.
DiscreteField step(const DiscreteField& u_prev, double tau, double mu,
                   const VectorField* forcing, const SpacePair& spaces,
                   const TetMesh& mesh, const StepperOptions& options = {});

// Runs N steps from the Lagrange interpolant of u0 projected into the
// zero-trace space (boundary dofs cleared).
Trajectory run(const VectorField& u0, double tau, int steps, double mu,
               const VectorField* forcing, const SpacePair& spaces,
               const TetMesh& mesh, const StepperOptions& options = {});

// Piecewise-constant-in-time reconstruction: u^n on (t_{n-1}, t_n], u^0 at
// t = 0. Throws DomainError outside [0, T].
const DiscreteField& reconstruct(const Trajectory& traj, double t);

}  // namespace nscert
