#include "core/norms.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace nscert {

namespace {

int quadrature_degree_for(NormKind kind) {
  return kind == NormKind::L4 ? kNormQuadratureDegree
                              : kAssemblyQuadratureDegree;
}

// Integrates `integrand(tet, x, xi-data)` over the mesh with the requested
// rule; the callback returns the pointwise density.
template <typename Density>
double integrate(const TetMesh& mesh, int degree, Density&& density) {
  const BasisTable& table = basis_table(degree);
  double total = 0.0;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    for (std::size_t q = 0; q < table.rule->points.size(); ++q)
      total += table.rule->weights[q] * geom.abs_det * density(t, q, geom, table);
  }
  return total;
}

Vec3 velocity_at(const DiscreteField& field, const SpacePair& spaces, int tet,
                 const std::array<double, 10>& n) {
  Vec3 u = Vec3::Zero();
  const auto& nodes = spaces.cell_p2_nodes[tet];
  for (int a = 0; a < 10; ++a)
    for (int c = 0; c < 3; ++c) u[c] += field.velocity[3 * nodes[a] + c] * n[a];
  return u;
}

Eigen::Matrix3d velocity_gradient_at(const DiscreteField& field,
                                     const SpacePair& spaces, int tet,
                                     const ElementGeometry& geom,
                                     const std::array<Vec3, 10>& ref_grads) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();  // g(c, d) = d u_c / d x_d
  const auto& nodes = spaces.cell_p2_nodes[tet];
  for (int a = 0; a < 10; ++a) {
    const Vec3 grad = geom.jacobian_inv_t * ref_grads[a];
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d)
        g(c, d) += field.velocity[3 * nodes[a] + c] * grad[d];
  }
  return g;
}

}  // namespace

double field_norm(const DiscreteField& field, NormKind kind,
                  const SpacePair& spaces, const TetMesh& mesh) {
  const int degree = quadrature_degree_for(kind);
  switch (kind) {
    case NormKind::L2: {
      const double v = integrate(
          mesh, degree,
          [&](int t, std::size_t q, const ElementGeometry&,
              const BasisTable& table) {
            return velocity_at(field, spaces, t, table.p2_values[q])
                .squaredNorm();
          });
      return std::sqrt(v);
    }
    case NormKind::H1Semi: {
      const double v = integrate(
          mesh, degree,
          [&](int t, std::size_t q, const ElementGeometry& geom,
              const BasisTable& table) {
            return velocity_gradient_at(field, spaces, t, geom,
                                        table.p2_gradients[q])
                .squaredNorm();
          });
      return std::sqrt(v);
    }
    case NormKind::L4: {
      const double v = integrate(
          mesh, degree,
          [&](int t, std::size_t q, const ElementGeometry&,
              const BasisTable& table) {
            const double s =
                velocity_at(field, spaces, t, table.p2_values[q]).squaredNorm();
            return s * s;
          });
      return std::pow(v, 0.25);
    }
  }
  throw DomainError("unknown norm kind");
}

double linf_time_norm(const Trajectory& traj, NormKind kind,
                      const SpacePair& spaces, const TetMesh& mesh) {
  if (traj.diagnostics.empty()) throw DomainError("empty trajectory");
  if (!traj.complete()) {
    if (kind == NormKind::L4) return traj.max_l4;
    if (kind == NormKind::L2) return traj.max_l2;
    throw DomainError("thinned trajectory retains only L2/L4 maxima");
  }
  double m = 0.0;
  for (const auto& f : traj.fields)
    m = std::max(m, field_norm(f, kind, spaces, mesh));
  return m;
}

double expr_sobolev_norm(const VectorField& expr, const TetMesh& mesh,
                         int order, double t) {
  if (order < 0 || order > 2)
    throw UnsupportedExpressionError(
        "Sobolev norms are available for orders 0, 1, 2");
  // Multi-indices per order: value; 3 first derivatives; 6 second derivatives
  // (each mixed pair once).
  const int second[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
  const double v = integrate(
      mesh, kNormQuadratureDegree,
      [&](int, std::size_t q, const ElementGeometry& geom,
          const BasisTable& table) {
        const Vec3 x = geom.map(table.rule->points[q]);
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
          const ScalarField& f = expr.comp(c);
          const double v0 = f.value(x, t);
          s += v0 * v0;
          if (order >= 1)
            for (int d = 0; d < 3; ++d) {
              const double v1 = f.d1(d, x, t);
              s += v1 * v1;
            }
          if (order >= 2)
            for (const auto& ab : second) {
              const double v2 = f.d2(ab[0], ab[1], x, t);
              s += v2 * v2;
            }
        }
        return s;
      });
  return std::sqrt(v);
}

double error_norm(const DiscreteField& field, const VectorField& exact,
                  NormKind kind, const SpacePair& spaces, const TetMesh& mesh,
                  double t) {
  switch (kind) {
    case NormKind::L2: {
      const double v = integrate(
          mesh, kNormQuadratureDegree,
          [&](int tet, std::size_t q, const ElementGeometry& geom,
              const BasisTable& table) {
            const Vec3 x = geom.map(table.rule->points[q]);
            return (velocity_at(field, spaces, tet, table.p2_values[q]) -
                    exact.value(x, t))
                .squaredNorm();
          });
      return std::sqrt(v);
    }
    case NormKind::H1Semi: {
      const double v = integrate(
          mesh, kNormQuadratureDegree,
          [&](int tet, std::size_t q, const ElementGeometry& geom,
              const BasisTable& table) {
            const Vec3 x = geom.map(table.rule->points[q]);
            Eigen::Matrix3d g = velocity_gradient_at(field, spaces, tet, geom,
                                                     table.p2_gradients[q]);
            for (int c = 0; c < 3; ++c)
              for (int d = 0; d < 3; ++d) g(c, d) -= exact.comp(c).d1(d, x, t);
            return g.squaredNorm();
          });
      return std::sqrt(v);
    }
    case NormKind::L4: {
      const double v = integrate(
          mesh, kNormQuadratureDegree,
          [&](int tet, std::size_t q, const ElementGeometry& geom,
              const BasisTable& table) {
            const Vec3 x = geom.map(table.rule->points[q]);
            const double s =
                (velocity_at(field, spaces, tet, table.p2_values[q]) -
                 exact.value(x, t))
                    .squaredNorm();
            return s * s;
          });
      return std::pow(v, 0.25);
    }
  }
  throw DomainError("unknown norm kind");
}

EnergyLedger energy_ledger(const Trajectory& traj, const SpacePair& spaces,
                           const TetMesh& mesh, double tolerance) {
  EnergyLedger ledger;
  ledger.tolerance = tolerance;
  if (!traj.zero_forcing) {
    ledger.applicable = false;
    ledger.passed = false;
    ledger.status = "not applicable (nonzero forcing)";
    return ledger;
  }
  ledger.applicable = true;

  // Recompute from stored fields; the per-step diagnostics provide the
  // independent online record.
  const double rhs = [&] {
    const double l2 = field_norm(traj.level(0), NormKind::L2, spaces, mesh);
    return 0.5 * l2 * l2;
  }();

  double dissipation = 0.0;
  double prev_l2sq = 2.0 * rhs;
  ledger.min_slack = std::numeric_limits<double>::infinity();
  ledger.passed = true;
  for (int n = 1; n <= traj.steps; ++n) {
    const DiscreteField& f = traj.level(n);
    const double l2 = field_norm(f, NormKind::L2, spaces, mesh);
    const double h1 = field_norm(f, NormKind::H1Semi, spaces, mesh);
    dissipation += traj.tau * traj.mu * h1 * h1;

    EnergyLedgerRow row;
    row.step = n;
    row.lhs = 0.5 * l2 * l2 + dissipation;
    row.slack = rhs + tolerance - row.lhs;
    row.monotone = l2 * l2 <= prev_l2sq + tolerance;
    ledger.max_monotonicity_violation = std::max(
        ledger.max_monotonicity_violation, l2 * l2 - prev_l2sq);
    ledger.min_slack = std::min(ledger.min_slack, rhs - row.lhs);
    if (row.slack < 0 || !row.monotone) ledger.passed = false;
    ledger.rows.push_back(row);
    prev_l2sq = l2 * l2;
  }
  if (ledger.rows.empty()) ledger.min_slack = 0.0;
  ledger.status = ledger.passed ? "passed" : "failed";
  return ledger;
}

NormReport norm_report(const Trajectory& traj, const VectorField& u0,
                       const SpacePair& spaces, const TetMesh& mesh) {
  NormReport report;
  double running = 0.0;
  for (const auto& d : traj.diagnostics) {
    report.levels.push_back(d.step);
    report.times.push_back(d.time);
    report.l2.push_back(std::sqrt(2.0 * d.energy));
    report.h1semi.push_back(std::sqrt(d.grad_sq));
    report.l4.push_back(d.l4);
    running = std::max(running, d.l4);
    report.running_max_l4.push_back(running);
  }
  report.u0_h1 = expr_sobolev_norm(u0, mesh, 1);
  report.u0_h2 = expr_sobolev_norm(u0, mesh, 2);
  return report;
}

}  // namespace nscert
