#pragma once

#include <vector>

#include "core/norms.hpp"

namespace nscert {

struct ProjectionResult {
  DiscreteField field;          // (R_h, P_h)
  double residual = 0.0;        // linear-solver relative residual
  double divergence_inf = 0.0;  // max norm of the discrete divergence of R_h
  double mean_gap = 0.0;        // integral of (p - P_h)
};

// Discrete Stokes Ritz projection of a closed-form pair (w, p):
//   (grad(w - R_h), grad v_h) - (p - P_h, div v_h) = 0   for all v_h,
//   (div R_h, q_h) = 0                                   for all q_h,
// with the zero-mean condition integral(p - P_h) = 0. The data integrals use
// degree-8 quadrature of the exact derivatives. w must vanish on the
// boundary; this is validated by sampling the boundary nodes.
ProjectionResult stokes_ritz_project(const VectorField& w,
                                     const ScalarField& p,
                                     const SpacePair& spaces,
                                     const TetMesh& mesh, double t = 0.0);

// Same projection with a discrete pair as data. Members of the discretely
// divergence-free subspace are fixed points.
ProjectionResult project_discrete(const DiscreteField& wp,
                                  const SpacePair& spaces,
                                  const TetMesh& mesh);

struct ProjectionErrorRow {
  double h = 0.0;
  double velocity_l2 = 0.0;
  double velocity_l4 = 0.0;  // reported alongside, not an acceptance gate
  double velocity_h1 = 0.0;
  double pressure_l2 = 0.0;
};

struct ProjectionStudy {
  std::vector<ProjectionErrorRow> rows;
  double order_velocity_l2 = 0.0;  // least-squares slopes of log err vs log h
  double order_velocity_l4 = 0.0;
  double order_velocity_h1 = 0.0;
  double order_pressure_l2 = 0.0;
};

// Errors of the projection over a sequence of box meshes (cells n, per-axis).
ProjectionStudy projection_convergence_study(const VectorField& w,
                                             const ScalarField& p,
                                             const std::vector<int>& cells,
                                             const Box& box, double t = 0.0);

}  // namespace nscert
