#include "core/fespace.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "core/errors.hpp"

namespace nscert {

namespace {

// Gauss-Jacobi rule for weight (1-s)^alpha on [0,1], via Golub-Welsch on the
// symmetric tridiagonal recurrence matrix of the Jacobi polynomials.
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

LineRule gauss_jacobi_01(int n, int alpha) {
  const double a = alpha, b = 0.0;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double diag;
    if (k == 0)
      diag = (b - a) / (a + b + 2);
    else
      diag = (b * b - a * a) /
             ((2 * k + a + b) * (2 * k + a + b + 2));
    J(k, k) = diag;
    if (k >= 1) {
      const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
      const double den = (2 * k + a + b) * (2 * k + a + b) *
                         (2 * k + a + b + 1) * (2 * k + a + b - 1);
      const double off = std::sqrt(num / den);
      J(k, k - 1) = off;
      J(k - 1, k) = off;
    }
  }

  // total weight of (1-s)^a (1+s)^b on [-1,1]
  const double mu0 = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) *
                     std::tgamma(b + 1) / std::tgamma(a + b + 2);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  LineRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double scale = std::pow(0.5, a + 1);  // map [-1,1] -> [0,1]
  for (int i = 0; i < n; ++i) {
    const double t = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.nodes[i] = 0.5 * (1.0 + t);
    rule.weights[i] = mu0 * v0 * v0 * scale;
  }
  return rule;
}

QuadratureRule build_conical_rule(int degree) {
  const int n = (degree + 2) / 2;  // 2n-1 >= degree
  const LineRule ru = gauss_jacobi_01(n, 2);
  const LineRule rv = gauss_jacobi_01(n, 1);
  const LineRule rw = gauss_jacobi_01(n, 0);

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<std::size_t>(n) * n * n);
  rule.weights.reserve(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double u = ru.nodes[i], v = rv.nodes[j], w = rw.nodes[k];
        rule.points.emplace_back(u, v * (1 - u), w * (1 - u) * (1 - v));
        rule.weights.push_back(ru.weights[i] * rv.weights[j] * rw.weights[k]);
      }
  return rule;
}

}  // namespace

const QuadratureRule& make_quadrature(int degree) {
  if (degree < 1 || degree > 10)
    throw DomainError("unsupported quadrature degree " +
                      std::to_string(degree) + " (supported: 1..10)");
  static const std::array<QuadratureRule, 10> rules = [] {
    std::array<QuadratureRule, 10> r;
    for (int d = 1; d <= 10; ++d) r[d - 1] = build_conical_rule(d);
    return r;
  }();
  return rules[degree - 1];
}

void p1_basis(const Vec3& xi, double values[4], Vec3 gradients[4]) {
  const double x = xi[0], y = xi[1], z = xi[2];
  values[0] = 1 - x - y - z;
  values[1] = x;
  values[2] = y;
  values[3] = z;
  gradients[0] = Vec3(-1, -1, -1);
  gradients[1] = Vec3(1, 0, 0);
  gradients[2] = Vec3(0, 1, 0);
  gradients[3] = Vec3(0, 0, 1);
}

void p2_basis(const Vec3& xi, double values[10], Vec3 gradients[10]) {
  double lambda[4];
  Vec3 dlambda[4];
  p1_basis(xi, lambda, dlambda);

  for (int i = 0; i < 4; ++i) {
    values[i] = lambda[i] * (2 * lambda[i] - 1);
    gradients[i] = (4 * lambda[i] - 1) * dlambda[i];
  }
  for (int e = 0; e < 6; ++e) {
    const int i = kTetEdges[e][0], j = kTetEdges[e][1];
    values[4 + e] = 4 * lambda[i] * lambda[j];
    gradients[4 + e] = 4 * (lambda[j] * dlambda[i] + lambda[i] * dlambda[j]);
  }
}

void eval_basis(SpaceKind kind, const Vec3& xi, std::vector<double>& values,
                std::vector<Vec3>& gradients) {
  const double eps = 1e-12;
  if (xi[0] < -eps || xi[1] < -eps || xi[2] < -eps ||
      xi[0] + xi[1] + xi[2] > 1 + eps)
    throw DomainError("point outside the reference tetrahedron");
  if (kind == SpaceKind::P1) {
    values.resize(4);
    gradients.resize(4);
    p1_basis(xi, values.data(), gradients.data());
  } else {
    values.resize(10);
    gradients.resize(10);
    p2_basis(xi, values.data(), gradients.data());
  }
}

ElementGeometry element_geometry(const TetMesh& mesh, int tet) {
  const auto& k = mesh.tets[tet];
  ElementGeometry g;
  g.origin = mesh.vertices[k[0]];
  g.jacobian.col(0) = mesh.vertices[k[1]] - g.origin;
  g.jacobian.col(1) = mesh.vertices[k[2]] - g.origin;
  g.jacobian.col(2) = mesh.vertices[k[3]] - g.origin;
  const double det = g.jacobian.determinant();
  g.abs_det = std::abs(det);
  g.jacobian_inv_t = g.jacobian.inverse().transpose();
  return g;
}

SpacePair build_spaces(const TetMesh& mesh) {
  SpacePair sp;
  sp.num_vertices = mesh.vertex_count();

  // Global edge numbering: sorted vertex pairs in lexicographic order.
  std::set<std::array<int, 2>> edge_set;
  for (const auto& t : mesh.tets)
    for (const auto& e : kTetEdges) {
      const int a = t[e[0]], b = t[e[1]];
      edge_set.insert({std::min(a, b), std::max(a, b)});
    }
  sp.edges.assign(edge_set.begin(), edge_set.end());
  sp.num_edges = static_cast<int>(sp.edges.size());

  std::map<std::array<int, 2>, int> edge_id;
  for (int i = 0; i < sp.num_edges; ++i) edge_id[sp.edges[i]] = i;

  sp.velocity_nodes = mesh.vertices;
  sp.velocity_nodes.reserve(sp.num_nodes());
  for (const auto& e : sp.edges)
    sp.velocity_nodes.push_back(
        0.5 * (mesh.vertices[e[0]] + mesh.vertices[e[1]]));

  sp.cell_p2_nodes.resize(mesh.tet_count());
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& tet = mesh.tets[t];
    auto& nodes = sp.cell_p2_nodes[t];
    for (int v = 0; v < 4; ++v) nodes[v] = tet[v];
    for (int e = 0; e < 6; ++e) {
      const int a = tet[kTetEdges[e][0]], b = tet[kTetEdges[e][1]];
      nodes[4 + e] =
          sp.num_vertices + edge_id.at({std::min(a, b), std::max(a, b)});
    }
  }

  // Boundary nodes: vertices of boundary faces plus midpoints of their edges.
  sp.node_on_boundary.assign(sp.num_nodes(), false);
  for (const auto& f : mesh.boundary_faces) {
    for (int v : f) sp.node_on_boundary[v] = true;
    const int pairs[3][2] = {{f[0], f[1]}, {f[0], f[2]}, {f[1], f[2]}};
    for (const auto& p : pairs)
      sp.node_on_boundary[sp.num_vertices +
                          edge_id.at({std::min(p[0], p[1]),
                                      std::max(p[0], p[1])})] = true;
  }

  for (int n = 0; n < sp.num_nodes(); ++n)
    for (int c = 0; c < 3; ++c)
      (sp.node_on_boundary[n] ? sp.boundary_velocity_dofs
                              : sp.interior_velocity_dofs)
          .push_back(3 * n + c);
  return sp;
}

DiscreteField zero_field(const SpacePair& spaces, double time) {
  DiscreteField f;
  f.velocity = Eigen::VectorXd::Zero(spaces.velocity_dofs());
  f.pressure = Eigen::VectorXd::Zero(spaces.pressure_dofs());
  f.time = time;
  return f;
}

DiscreteField interpolate(const VectorField& expr, const SpacePair& spaces,
                          const TetMesh& mesh, double t) {
  (void)mesh;
  DiscreteField f = zero_field(spaces, t);
  for (int n = 0; n < spaces.num_nodes(); ++n) {
    const Vec3& p = spaces.velocity_nodes[n];
    for (int c = 0; c < 3; ++c) {
      try {
        f.velocity[3 * n + c] = expr.comp(c).value(p, t);
      } catch (const std::exception& e) {
        throw EvalError(std::string(e.what()) + " while interpolating at (" +
                        std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                        ", " + std::to_string(p.z()) + ")");
      }
    }
  }
  return f;
}

}  // namespace nscert
