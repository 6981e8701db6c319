#pragma once

#include <string>
#include <vector>

#include "core/stepper.hpp"

namespace nscert {

enum class NormKind { L2, H1Semi, L4 };

// Quadrature-exact norms of discrete fields: degree 5 for L2/H1 (exact for
// P2 integrands), degree 8 for L4 (integrand degree 8).
double field_norm(const DiscreteField& field, NormKind kind,
                  const SpacePair& spaces, const TetMesh& mesh);

// Essential sup in time of the piecewise-constant reconstruction = max over
// stored levels (level 0 included by the t=0 convention). Falls back to the
// online running maxima when the trajectory was thinned.
double linf_time_norm(const Trajectory& traj, NormKind kind,
                      const SpacePair& spaces, const TetMesh& mesh);

// Sobolev norm of a closed-form field on the meshed domain,
//   ||v||_{H^k}^2 = sum over multi-indices |a| <= k of ||D^a v||_{L2}^2,
// using degree-8 quadrature of the exact derivatives. order in {0, 1, 2}.
double expr_sobolev_norm(const VectorField& expr, const TetMesh& mesh,
                         int order, double t = 0.0);

// L2 / H1 / L4 distance between a discrete field and a closed-form field.
double error_norm(const DiscreteField& field, const VectorField& exact,
                  NormKind kind, const SpacePair& spaces, const TetMesh& mesh,
                  double t);

struct EnergyLedgerRow {
  int step = 0;
  double lhs = 0.0;    // (1/2)||u^{n+1}||^2 + sum_{m<=n} tau*mu*||grad u^{m+1}||^2
  double slack = 0.0;  // rhs - lhs where rhs = (1/2)||u^0||^2
  bool monotone = true;
};

struct EnergyLedger {
  bool applicable = false;  // only zero-forcing runs are checked
  bool passed = false;
  double tolerance = 1e-9;
  double min_slack = 0.0;
  double max_monotonicity_violation = 0.0;
  std::vector<EnergyLedgerRow> rows;
  std::string status;  // "passed" | "failed" | "not applicable (nonzero forcing)"
};

EnergyLedger energy_ledger(const Trajectory& traj, const SpacePair& spaces,
                           const TetMesh& mesh, double tolerance = 1e-9);

// Per-level norm table (serialized by the certify command).
struct NormReport {
  std::vector<int> levels;
  std::vector<double> times, l2, h1semi, l4, running_max_l4;
  double u0_h1 = 0.0, u0_h2 = 0.0;
  int quadrature_degree_l2 = kAssemblyQuadratureDegree;
  int quadrature_degree_l4 = kNormQuadratureDegree;
};

NormReport norm_report(const Trajectory& traj, const VectorField& u0,
                       const SpacePair& spaces, const TetMesh& mesh);

}  // namespace nscert
