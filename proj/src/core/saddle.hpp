#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>

#include "core/assembly.hpp"

namespace nscert {

// Block system of one linearized step / one Stokes projection, before
// boundary elimination:
//   [ A   -B^T ] [u]   [rhs_velocity]
//   [ B    0   ] [p] = [rhs_pressure]
// plus a zero-mean pressure constraint row (Lagrange multiplier) built from
// the cell-volume-weighted P1 integrals.
struct SaddleSystem {
  SpMat A;                            // velocity-velocity block (full dofs)
  SpMat B;                            // divergence block (np x nu, full dofs)
  Eigen::VectorXd rhs_velocity;       // full velocity dofs
  Eigen::VectorXd rhs_pressure;       // pressure dofs
  Eigen::VectorXd zero_mean_constraint;  // g: g . p = pressure_mean_target
  double pressure_mean_target = 0.0;
};

struct SaddleSolution {
  Eigen::VectorXd velocity;  // full dof vector, boundary entries zero
  Eigen::VectorXd pressure;
  double multiplier = 0.0;
  double relative_residual = 0.0;
  double divergence_inf = 0.0;  // max norm of B u - rhs_pressure
};

// Direct factorization of the eliminated saddle system. One instance per
// (spaces, mesh); the sparsity pattern is analyzed once and reused across
// solves with updated values.
class SaddleSolver {
 public:
  SaddleSolver(const SpacePair& spaces, const TetMesh& mesh);

  // Throws SolverError if the factorization fails or the relative residual
  // exceeds `tolerance`.
  SaddleSolution solve(const SaddleSystem& system, double tolerance);

 private:
  const SpacePair& spaces_;
  std::vector<int> full_to_interior_;  // -1 for boundary dofs
  int interior_count_ = 0;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

}  // namespace nscert
