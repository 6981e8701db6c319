#include "core/saddle.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace nscert {

SaddleSolver::SaddleSolver(const SpacePair& spaces, const TetMesh&)
    : spaces_(spaces) {
  full_to_interior_.assign(spaces.velocity_dofs(), -1);
  for (int dof : spaces.interior_velocity_dofs)
    full_to_interior_[dof] = interior_count_++;
}

SaddleSolution SaddleSolver::solve(const SaddleSystem& system,
                                   double tolerance) {
  const int ni = interior_count_;
  const int np = spaces_.pressure_dofs();
  const int size = ni + np + 1;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.A.nonZeros() + 2 * system.B.nonZeros() + 2 * np);

  for (int col = 0; col < system.A.outerSize(); ++col) {
    const int jc = full_to_interior_[col];
    if (jc < 0) continue;
    for (SpMat::InnerIterator it(system.A, col); it; ++it) {
      const int jr = full_to_interior_[static_cast<int>(it.row())];
      if (jr >= 0) triplets.emplace_back(jr, jc, it.value());
    }
  }
  for (int col = 0; col < system.B.outerSize(); ++col) {
    const int jc = full_to_interior_[col];
    if (jc < 0) continue;
    for (SpMat::InnerIterator it(system.B, col); it; ++it) {
      const int p = static_cast<int>(it.row());
      triplets.emplace_back(ni + p, jc, it.value());   // B u = rhs_p
      triplets.emplace_back(jc, ni + p, -it.value());  // -B^T p
    }
  }
  for (int p = 0; p < np; ++p) {
    const double g = system.zero_mean_constraint[p];
    triplets.emplace_back(ni + p, ni + np, g);
    triplets.emplace_back(ni + np, ni + p, g);
  }

  SpMat S(size, size);
  S.setFromTriplets(triplets.begin(), triplets.end());
  S.makeCompressed();

  Eigen::VectorXd b(size);
  for (int dof = 0; dof < spaces_.velocity_dofs(); ++dof) {
    const int j = full_to_interior_[dof];
    if (j >= 0) b[j] = system.rhs_velocity[dof];
  }
  b.segment(ni, np) = system.rhs_pressure;
  b[ni + np] = system.pressure_mean_target;

  lu_.compute(S);
  if (lu_.info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed: " + lu_.lastErrorMessage(),
                      {});

  Eigen::VectorXd x = lu_.solve(b);
  const double bnorm = b.norm();
  const double residual =
      (S * x - b).norm() / (bnorm > 0 ? bnorm : 1.0);
  if (!(residual <= tolerance))
    throw SolverError("solver residual " + std::to_string(residual) +
                          " above tolerance " + std::to_string(tolerance),
                      {residual});

  SaddleSolution sol;
  sol.velocity = Eigen::VectorXd::Zero(spaces_.velocity_dofs());
  for (int dof = 0; dof < spaces_.velocity_dofs(); ++dof) {
    const int j = full_to_interior_[dof];
    if (j >= 0) sol.velocity[dof] = x[j];
  }
  sol.pressure = x.segment(ni, np);
  sol.multiplier = x[ni + np];
  sol.relative_residual = residual;

  // Weighted-mean subtraction on top of the multiplier; idempotent.
  const double total_volume = system.zero_mean_constraint.sum();
  const double gap = system.zero_mean_constraint.dot(sol.pressure) -
                     system.pressure_mean_target;
  sol.pressure.array() -= gap / total_volume;

  sol.divergence_inf =
      (system.B * sol.velocity - system.rhs_pressure).lpNorm<Eigen::Infinity>();
  return sol;
}

}  // namespace nscert
