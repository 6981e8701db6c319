#pragma once

#include <array>
#include <vector>

#include "core/expr.hpp"
#include "core/mesh.hpp"

namespace nscert {

// Quadrature on the reference tetrahedron (vertices 0, e1, e2, e3).
// Weights sum to the reference volume 1/6 and the rule integrates every
// monomial of total degree <= `degree` exactly.
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int degree = 0;
};

// Supported degrees: 1..10. Rules are conical products of Gauss-Jacobi lines,
// built once and cached.
const QuadratureRule& make_quadrature(int degree);

// Quadrature degrees fixed per use across the library: degree 5 for operator
// assembly (exact for P2 x P2 x grad(P2) with affine maps), degree 8 for L4
// norms of P2 fields and for integrals of closed-form data.
inline constexpr int kAssemblyQuadratureDegree = 5;
inline constexpr int kNormQuadratureDegree = 8;

enum class SpaceKind { P1, P2 };

// Reference-element Lagrange bases. P1 nodes are the 4 vertices; P2 nodes are
// the 4 vertices followed by the 6 edge midpoints in local edge order
// (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
void p1_basis(const Vec3& xi, double values[4], Vec3 gradients[4]);
void p2_basis(const Vec3& xi, double values[10], Vec3 gradients[10]);

// Checked variant: throws DomainError if xi lies outside the reference tet.
void eval_basis(SpaceKind kind, const Vec3& xi, std::vector<double>& values,
                std::vector<Vec3>& gradients);

inline constexpr int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                        {1, 2}, {1, 3}, {2, 3}};

// Taylor-Hood pair on a tet mesh: P2 vector velocity with zero trace and P1
// scalar pressure. Scalar velocity nodes are mesh vertices followed by edge
// midpoints (edges sorted lexicographically by vertex pair); the velocity dof
// for node n, component c is 3*n + c. Pressure dofs are the vertices.
struct SpacePair {
  int num_vertices = 0;
  int num_edges = 0;
  std::vector<std::array<int, 2>> edges;            // sorted vertex pairs
  std::vector<Vec3> velocity_nodes;                 // scalar node coordinates
  std::vector<std::array<int, 10>> cell_p2_nodes;   // per-tet scalar node ids
  std::vector<bool> node_on_boundary;               // per scalar node
  std::vector<int> boundary_velocity_dofs;          // sorted
  std::vector<int> interior_velocity_dofs;          // sorted complement

  int num_nodes() const { return num_vertices + num_edges; }
  int velocity_dofs() const { return 3 * num_nodes(); }
  int pressure_dofs() const { return num_vertices; }
};

SpacePair build_spaces(const TetMesh& mesh);

// Coefficients of one time level.
struct DiscreteField {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  double time = 0.0;
};

DiscreteField zero_field(const SpacePair& spaces, double time = 0.0);

// Nodal Lagrange interpolation at time t. All dofs, including boundary ones,
// are set from the expression; the caller is responsible for compatible data
// when the target is the zero-trace space.
DiscreteField interpolate(const VectorField& expr, const SpacePair& spaces,
                          const TetMesh& mesh, double t = 0.0);

// Evaluate a P2 coefficient vector (one component per scalar node slot) and
// its gradient at a reference point of cell `tet`.
struct ElementGeometry {
  Eigen::Matrix3d jacobian;
  Eigen::Matrix3d jacobian_inv_t;
  double abs_det = 0.0;
  Vec3 origin;

  Vec3 map(const Vec3& xi) const { return origin + jacobian * xi; }
};
ElementGeometry element_geometry(const TetMesh& mesh, int tet);

}  // namespace nscert
