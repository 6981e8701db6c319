#include "core/assembly.hpp"

#include <array>
#include <map>
#include <mutex>

namespace nscert {

namespace {

using Triplet = Eigen::Triplet<double>;

// Scatter a 10x10 scalar element matrix into the vector-valued operator:
// identical blocks per component, dof = 3*node + comp.
void scatter_vector_blocks(const std::array<int, 10>& nodes,
                           const double elem[10][10],
                           std::vector<Triplet>& out) {
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      const double v = elem[a][b];
      if (v == 0.0) continue;
      for (int c = 0; c < 3; ++c)
        out.emplace_back(3 * nodes[a] + c, 3 * nodes[b] + c, v);
    }
}

template <typename ElementKernel>
SpMat assemble_velocity_operator(const SpacePair& spaces, const TetMesh& mesh,
                                 ElementKernel&& kernel) {
  const BasisTable& table = basis_table(kAssemblyQuadratureDegree);
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.tets.size() * 300);

  double elem[10][10];
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    kernel(t, geom, table, elem);
    scatter_vector_blocks(spaces.cell_p2_nodes[t], elem, triplets);
  }

  SpMat m(spaces.velocity_dofs(), spaces.velocity_dofs());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace

const BasisTable& basis_table(int quadrature_degree) {
  static std::map<int, BasisTable> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(quadrature_degree);
  if (it != cache.end()) return it->second;

  BasisTable table;
  table.rule = &make_quadrature(quadrature_degree);
  const std::size_t nq = table.rule->points.size();
  table.p2_values.resize(nq);
  table.p2_gradients.resize(nq);
  table.p1_values.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    p2_basis(table.rule->points[q], table.p2_values[q].data(),
             table.p2_gradients[q].data());
    double l[4];
    Vec3 dl[4];
    p1_basis(table.rule->points[q], l, dl);
    for (int i = 0; i < 4; ++i) table.p1_values[q][i] = l[i];
  }
  return cache.emplace(quadrature_degree, std::move(table)).first->second;
}

SpMat assemble_mass(const SpacePair& spaces, const TetMesh& mesh) {
  return assemble_velocity_operator(
      spaces, mesh,
      [](int, const ElementGeometry& geom, const BasisTable& table,
         double elem[10][10]) {
        for (int a = 0; a < 10; ++a)
          for (int b = 0; b < 10; ++b) elem[a][b] = 0.0;
        for (std::size_t q = 0; q < table.rule->points.size(); ++q) {
          const double w = table.rule->weights[q] * geom.abs_det;
          const auto& n = table.p2_values[q];
          // upper triangle mirrored so symmetry is exact
          for (int a = 0; a < 10; ++a) {
            elem[a][a] += w * n[a] * n[a];
            for (int b = a + 1; b < 10; ++b) {
              const double v = w * n[a] * n[b];
              elem[a][b] += v;
              elem[b][a] += v;
            }
          }
        }
      });
}

SpMat assemble_stiffness(const SpacePair& spaces, const TetMesh& mesh) {
  return assemble_velocity_operator(
      spaces, mesh,
      [](int, const ElementGeometry& geom, const BasisTable& table,
         double elem[10][10]) {
        for (int a = 0; a < 10; ++a)
          for (int b = 0; b < 10; ++b) elem[a][b] = 0.0;
        Vec3 grad[10];
        for (std::size_t q = 0; q < table.rule->points.size(); ++q) {
          const double w = table.rule->weights[q] * geom.abs_det;
          for (int a = 0; a < 10; ++a)
            grad[a] = geom.jacobian_inv_t * table.p2_gradients[q][a];
          for (int a = 0; a < 10; ++a) {
            elem[a][a] += w * grad[a].dot(grad[a]);
            for (int b = a + 1; b < 10; ++b) {
              const double v = w * grad[a].dot(grad[b]);
              elem[a][b] += v;
              elem[b][a] += v;
            }
          }
        }
      });
}

SpMat assemble_convection(const Eigen::VectorXd& w, const SpacePair& spaces,
                          const TetMesh& mesh) {
  return assemble_velocity_operator(
      spaces, mesh,
      [&](int t, const ElementGeometry& geom, const BasisTable& table,
          double elem[10][10]) {
        const auto& nodes = spaces.cell_p2_nodes[t];
        double one_sided[10][10];
        for (int a = 0; a < 10; ++a)
          for (int b = 0; b < 10; ++b) one_sided[a][b] = 0.0;

        Vec3 grad[10];
        for (std::size_t q = 0; q < table.rule->points.size(); ++q) {
          const double wq = table.rule->weights[q] * geom.abs_det;
          const auto& n = table.p2_values[q];
          for (int a = 0; a < 10; ++a)
            grad[a] = geom.jacobian_inv_t * table.p2_gradients[q][a];

          Vec3 wx = Vec3::Zero();
          for (int a = 0; a < 10; ++a)
            for (int c = 0; c < 3; ++c) wx[c] += w[3 * nodes[a] + c] * n[a];

          // (w . grad phi_b) phi_a
          for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b)
              one_sided[a][b] += wq * wx.dot(grad[b]) * n[a];
        }
        for (int a = 0; a < 10; ++a)
          for (int b = 0; b < 10; ++b)
            elem[a][b] = one_sided[a][b] - one_sided[b][a];
      });
}

SpMat assemble_divergence(const SpacePair& spaces, const TetMesh& mesh) {
  const BasisTable& table = basis_table(kAssemblyQuadratureDegree);
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.tets.size() * 120);

  for (int t = 0; t < mesh.tet_count(); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    const auto& nodes = spaces.cell_p2_nodes[t];
    const auto& tet = mesh.tets[t];

    double elem[4][10][3];
    for (auto& pa : elem)
      for (auto& pb : pa)
        for (double& v : pb) v = 0.0;

    Vec3 grad[10];
    for (std::size_t q = 0; q < table.rule->points.size(); ++q) {
      const double wq = table.rule->weights[q] * geom.abs_det;
      for (int b = 0; b < 10; ++b)
        grad[b] = geom.jacobian_inv_t * table.p2_gradients[q][b];
      const auto& l = table.p1_values[q];
      for (int p = 0; p < 4; ++p)
        for (int b = 0; b < 10; ++b)
          for (int d = 0; d < 3; ++d)
            elem[p][b][d] += wq * l[p] * grad[b][d];
    }

    for (int p = 0; p < 4; ++p)
      for (int b = 0; b < 10; ++b)
        for (int d = 0; d < 3; ++d)
          triplets.emplace_back(tet[p], 3 * nodes[b] + d, elem[p][b][d]);
  }

  SpMat m(spaces.pressure_dofs(), spaces.velocity_dofs());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::VectorXd assemble_forcing(const VectorField& f, double t,
                                 const SpacePair& spaces,
                                 const TetMesh& mesh) {
  const BasisTable& table = basis_table(kAssemblyQuadratureDegree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(spaces.velocity_dofs());

  for (int k = 0; k < mesh.tet_count(); ++k) {
    const ElementGeometry geom = element_geometry(mesh, k);
    const auto& nodes = spaces.cell_p2_nodes[k];
    for (std::size_t q = 0; q < table.rule->points.size(); ++q) {
      const double wq = table.rule->weights[q] * geom.abs_det;
      const Vec3 x = geom.map(table.rule->points[q]);
      const Vec3 fx = f.value(x, t);
      const auto& n = table.p2_values[q];
      for (int a = 0; a < 10; ++a)
        for (int c = 0; c < 3; ++c)
          rhs[3 * nodes[a] + c] += wq * fx[c] * n[a];
    }
  }
  return rhs;
}

Eigen::VectorXd pressure_integral_vector(const SpacePair& spaces,
                                         const TetMesh& mesh) {
  // integral of a P1 basis function over a tet is vol/4
  Eigen::VectorXd g = Eigen::VectorXd::Zero(spaces.pressure_dofs());
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const double quarter = tet_volume(mesh, t) / 4.0;
    for (int v : mesh.tets[t]) g[v] += quarter;
  }
  return g;
}

}  // namespace nscert
