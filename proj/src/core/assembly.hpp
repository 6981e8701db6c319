#pragma once

#include <Eigen/Sparse>

#include "core/expr.hpp"
#include "core/fespace.hpp"

namespace nscert {

using SpMat = Eigen::SparseMatrix<double>;

// Discrete operators of the scheme on the full (pre-elimination) velocity dof
// set. Element contributions are accumulated in a fixed element order, so
// repeated assembly is bit-identical.

// Velocity mass matrix, symmetric positive definite.
SpMat assemble_mass(const SpacePair& spaces, const TetMesh& mesh);

// Velocity stiffness (vector Laplacian), symmetric positive semidefinite;
// positive definite after boundary elimination.
SpMat assemble_stiffness(const SpacePair& spaces, const TetMesh& mesh);

// Skew-symmetrized convection at transport field w:
//   C(w)_{ij} = (w . grad phi_j, phi_i) - (phi_j, w . grad phi_i),
// assembled as the literal two-term difference so C + C^T vanishes at
// quadrature level. The scheme uses (1/2) C(w).
SpMat assemble_convection(const Eigen::VectorXd& w, const SpacePair& spaces,
                          const TetMesh& mesh);

// Divergence coupling B with pressure_dofs rows: B_{p,j} = (div phi_j, q_p).
SpMat assemble_divergence(const SpacePair& spaces, const TetMesh& mesh);

// Load vector (f(., t), phi_i), degree-5 quadrature.
Eigen::VectorXd assemble_forcing(const VectorField& f, double t,
                                 const SpacePair& spaces, const TetMesh& mesh);

// g_p = integral of the p-th pressure basis function; g . p = integral of
// p_h, used for the zero-mean constraint row.
Eigen::VectorXd pressure_integral_vector(const SpacePair& spaces,
                                         const TetMesh& mesh);

// Reference-element basis tables evaluated at the points of a quadrature
// rule; shared between assembly and norm evaluation.
struct BasisTable {
  const QuadratureRule* rule = nullptr;
  std::vector<std::array<double, 10>> p2_values;    // [q][node]
  std::vector<std::array<Vec3, 10>> p2_gradients;   // reference gradients
  std::vector<std::array<double, 4>> p1_values;
};
const BasisTable& basis_table(int quadrature_degree);

}  // namespace nscert
