#include "core/projection.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/saddle.hpp"
#include "core/util.hpp"

namespace nscert {

namespace {

// RHS of the projection system from exact data, degree-8 quadrature:
//   r_i = (grad w, grad phi_i) - (p, div phi_i)
// plus the target integral of p for the mean constraint.
struct ExactData {
  Eigen::VectorXd rhs_velocity;
  double p_integral = 0.0;
};

ExactData exact_data(const VectorField& w, const ScalarField& p,
                     const SpacePair& spaces, const TetMesh& mesh, double t) {
  const BasisTable& table = basis_table(kNormQuadratureDegree);
  ExactData data;
  data.rhs_velocity = Eigen::VectorXd::Zero(spaces.velocity_dofs());

  for (int k = 0; k < mesh.tet_count(); ++k) {
    const ElementGeometry geom = element_geometry(mesh, k);
    const auto& nodes = spaces.cell_p2_nodes[k];
    for (std::size_t q = 0; q < table.rule->points.size(); ++q) {
      const double wq = table.rule->weights[q] * geom.abs_det;
      const Vec3 x = geom.map(table.rule->points[q]);

      Eigen::Matrix3d gw;  // gw(c,d) = d w_c / d x_d
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) gw(c, d) = w.comp(c).d1(d, x, t);
      const double pv = p.value(x, t);
      data.p_integral += wq * pv;

      for (int a = 0; a < 10; ++a) {
        const Vec3 grad = geom.jacobian_inv_t * table.p2_gradients[q][a];
        for (int c = 0; c < 3; ++c) {
          // (grad w : grad (phi_a e_c)) = row c of gw dotted with grad phi_a
          // (p, div (phi_a e_c))        = p * d phi_a / d x_c
          data.rhs_velocity[3 * nodes[a] + c] +=
              wq * (gw.row(c).dot(grad) - pv * grad[c]);
        }
      }
    }
  }
  return data;
}

ProjectionResult solve_projection(const SpacePair& spaces, const TetMesh& mesh,
                                  Eigen::VectorXd rhs_velocity,
                                  double p_integral) {
  SaddleSystem system;
  system.A = assemble_stiffness(spaces, mesh);
  system.B = assemble_divergence(spaces, mesh);
  system.rhs_velocity = std::move(rhs_velocity);
  system.rhs_pressure = Eigen::VectorXd::Zero(spaces.pressure_dofs());
  system.zero_mean_constraint = pressure_integral_vector(spaces, mesh);
  system.pressure_mean_target = p_integral;

  SaddleSolver solver(spaces, mesh);
  SaddleSolution sol = solver.solve(system, 1e-10);

  ProjectionResult result;
  result.field.velocity = std::move(sol.velocity);
  result.field.pressure = std::move(sol.pressure);
  result.residual = sol.relative_residual;
  result.divergence_inf = sol.divergence_inf;
  result.mean_gap =
      p_integral - system.zero_mean_constraint.dot(result.field.pressure);
  return result;
}

}  // namespace

ProjectionResult stokes_ritz_project(const VectorField& w,
                                     const ScalarField& p,
                                     const SpacePair& spaces,
                                     const TetMesh& mesh, double t) {
  // Zero-trace validation by sampling every boundary node.
  for (int n = 0; n < spaces.num_nodes(); ++n) {
    if (!spaces.node_on_boundary[n]) continue;
    const Vec3 v = w.value(spaces.velocity_nodes[n], t);
    if (v.lpNorm<Eigen::Infinity>() > 1e-10)
      throw IncompatibleDataError(
          "field is not zero on the boundary (|w| = " +
          format_g(v.lpNorm<Eigen::Infinity>()) + " at a boundary node)");
  }

  ExactData data = exact_data(w, p, spaces, mesh, t);
  return solve_projection(spaces, mesh, std::move(data.rhs_velocity),
                          data.p_integral);
}

ProjectionResult project_discrete(const DiscreteField& wp,
                                  const SpacePair& spaces,
                                  const TetMesh& mesh) {
  const SpMat K = assemble_stiffness(spaces, mesh);
  const SpMat B = assemble_divergence(spaces, mesh);
  const Eigen::VectorXd g = pressure_integral_vector(spaces, mesh);
  Eigen::VectorXd rhs = K * wp.velocity - B.transpose() * wp.pressure;
  return solve_projection(spaces, mesh, std::move(rhs), g.dot(wp.pressure));
}

ProjectionStudy projection_convergence_study(const VectorField& w,
                                             const ScalarField& p,
                                             const std::vector<int>& cells,
                                             const Box& box, double t) {
  if (cells.size() < 2)
    throw DomainError("projection study needs at least two meshes");

  ProjectionStudy study;
  std::vector<double> log_h, log_l2, log_l4, log_h1, log_p;
  for (int n : cells) {
    const TetMesh mesh = build_box_mesh(n, n, n, box);
    const SpacePair spaces = build_spaces(mesh);
    const ProjectionResult proj = stokes_ritz_project(w, p, spaces, mesh, t);

    ProjectionErrorRow row;
    row.h = mesh.h;
    row.velocity_l2 =
        error_norm(proj.field, w, NormKind::L2, spaces, mesh, t);
    row.velocity_l4 =
        error_norm(proj.field, w, NormKind::L4, spaces, mesh, t);
    row.velocity_h1 =
        error_norm(proj.field, w, NormKind::H1Semi, spaces, mesh, t);

    // pressure error by degree-8 quadrature of (p - P_h)
    const BasisTable& table = basis_table(kNormQuadratureDegree);
    double err2 = 0.0;
    for (int k = 0; k < mesh.tet_count(); ++k) {
      const ElementGeometry geom = element_geometry(mesh, k);
      const auto& tet = mesh.tets[k];
      for (std::size_t q = 0; q < table.rule->points.size(); ++q) {
        const Vec3 x = geom.map(table.rule->points[q]);
        double ph = 0.0;
        for (int v = 0; v < 4; ++v)
          ph += proj.field.pressure[tet[v]] * table.p1_values[q][v];
        const double diff = p.value(x, t) - ph;
        err2 += table.rule->weights[q] * geom.abs_det * diff * diff;
      }
    }
    row.pressure_l2 = std::sqrt(err2);

    study.rows.push_back(row);
    log_h.push_back(std::log(row.h));
    log_l2.push_back(std::log(row.velocity_l2));
    log_l4.push_back(std::log(row.velocity_l4));
    log_h1.push_back(std::log(row.velocity_h1));
    log_p.push_back(std::log(row.pressure_l2));
  }

  study.order_velocity_l2 = least_squares_slope(log_h, log_l2);
  study.order_velocity_l4 = least_squares_slope(log_h, log_l4);
  study.order_velocity_h1 = least_squares_slope(log_h, log_h1);
  study.order_pressure_l2 = least_squares_slope(log_h, log_p);
  return study;
}

}  // namespace nscert
