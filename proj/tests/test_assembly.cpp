#include <doctest.h>

#include <cmath>

#include "core/assembly.hpp"
#include "core/catalog.hpp"
#include "core/norms.hpp"
#include "test_util.hpp"

using namespace nscert;

namespace {

struct Fixture {
  TetMesh mesh = build_box_mesh(2, 2, 2, Box{});
  SpacePair spaces = build_spaces(mesh);
};

double max_abs(const SpMat& m) {
  double v = 0;
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it)
      v = std::max(v, std::abs(it.value()));
  return v;
}

double max_abs_sym_defect(const SpMat& m) {
  const SpMat defect = SpMat(m.transpose()) - m;
  return max_abs(defect);
}

double max_abs_skew_defect(const SpMat& m) {
  const SpMat defect = SpMat(m.transpose()) + m;
  return max_abs(defect);
}

}  // namespace

TEST_CASE("mass matrix: partition of unity, symmetry, positivity") {
  Fixture f;
  const SpMat M = assemble_mass(f.spaces, f.mesh);

  const Eigen::VectorXd ones =
      Eigen::VectorXd::Ones(f.spaces.velocity_dofs());
  // sum phi_i = 1 per component, so 1^T M 1 = 3 |Omega|
  CHECK(ones.dot(M * ones) == doctest::Approx(3.0).epsilon(1e-12));

  CHECK(max_abs_sym_defect(M) == 0.0);  // symmetric assembly, exactly

  auto rng = test_rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_velocity(f.spaces, rng);
    CHECK(x.dot(M * x) > 0.0);
  }
}

TEST_CASE("stiffness matrix: constants, exact energy, symmetry") {
  Fixture f;
  const SpMat K = assemble_stiffness(f.spaces, f.mesh);

  const Eigen::VectorXd ones =
      Eigen::VectorXd::Ones(f.spaces.velocity_dofs());
  CHECK((K * ones).lpNorm<Eigen::Infinity>() < 1e-12);

  // u = interpolant of (x,0,0): integral of |grad u|^2 = |Omega|
  const DiscreteField lin =
      interpolate(find_catalog("linear")->velocity, f.spaces, f.mesh);
  CHECK(lin.velocity.dot(K * lin.velocity) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK(max_abs_sym_defect(K) == 0.0);
}

TEST_CASE("convection: zero transport gives the zero operator") {
  Fixture f;
  const Eigen::VectorXd w =
      Eigen::VectorXd::Zero(f.spaces.velocity_dofs());
  const SpMat C = assemble_convection(w, f.spaces, f.mesh);
  CHECK(max_abs(C) == 0.0);
}

TEST_CASE("convection: exact skew-symmetry for random transports") {
  Fixture f;
  auto rng = test_rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd w = random_velocity(f.spaces, rng);
    const SpMat C = assemble_convection(w, f.spaces, f.mesh);
    const double scale = max_abs(C);
    REQUIRE(scale > 0);
    CHECK(max_abs_skew_defect(C) <= 1e-12 * scale);
  }
}

TEST_CASE("convection: energy neutrality") {
  Fixture f;
  auto rng = test_rng(3);
  const Eigen::VectorXd w = random_velocity(f.spaces, rng);
  const SpMat C = assemble_convection(w, f.spaces, f.mesh);
  const double scale = max_abs(C);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_velocity(f.spaces, rng);
    CHECK(std::abs(x.dot(C * x)) <= 1e-10 * x.squaredNorm() * scale);
  }
}

TEST_CASE("convection: linearity in the transport field") {
  Fixture f;
  auto rng = test_rng(4);
  const Eigen::VectorXd w = random_velocity(f.spaces, rng);
  const SpMat C1 = assemble_convection(w, f.spaces, f.mesh);

  for (double a : {2.0, 0.37}) {
    const SpMat Ca = assemble_convection((a * w).eval(), f.spaces, f.mesh);
    const SpMat diff = Ca - SpMat(a * C1);
    CHECK(max_abs(diff) <= 1e-13 * std::abs(a) * max_abs(C1));
  }
}

TEST_CASE("divergence: zero field and the constant-pressure row") {
  Fixture f;
  const SpMat B = assemble_divergence(f.spaces, f.mesh);
  CHECK(B.rows() == f.spaces.pressure_dofs());
  CHECK(B.cols() == f.spaces.velocity_dofs());

  const Eigen::VectorXd zero =
      Eigen::VectorXd::Zero(f.spaces.velocity_dofs());
  CHECK((B * zero).norm() == 0.0);

  // q = 1 tests integral of div v = boundary flux = 0 for zero-trace v
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(f.spaces.pressure_dofs());
  auto rng = test_rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd v = random_velocity(f.spaces, rng, true);
    CHECK(std::abs(ones.dot(B * v)) <= 1e-12 * v.norm());
  }
}

TEST_CASE("divergence of the clipped rigid rotation decays under refinement") {
  const VectorField rotation = find_catalog("rotation")->velocity;
  std::vector<double> norms;
  for (int n : {2, 4}) {
    const TetMesh mesh = build_box_mesh(n, n, n, Box{});
    const SpacePair spaces = build_spaces(mesh);
    const SpMat B = assemble_divergence(spaces, mesh);
    DiscreteField v = interpolate(rotation, spaces, mesh);
    for (int dof : spaces.boundary_velocity_dofs) v.velocity[dof] = 0.0;
    norms.push_back((B * v.velocity).norm());
  }
  CHECK(norms[1] <= 0.7 * norms[0]);
}

TEST_CASE("forcing vector: zero, constants, partition of unity") {
  Fixture f;
  const VectorField zero = find_catalog("zero")->velocity;
  CHECK(assemble_forcing(zero, 0.0, f.spaces, f.mesh).norm() == 0.0);

  const VectorField constant = find_catalog("constant")->velocity;  // (1,2,2)
  const Eigen::VectorXd rhs = assemble_forcing(constant, 0.0, f.spaces, f.mesh);
  double comp_sum[3] = {0, 0, 0};
  for (int n = 0; n < f.spaces.num_nodes(); ++n)
    for (int c = 0; c < 3; ++c) comp_sum[c] += rhs[3 * n + c];
  CHECK(comp_sum[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(comp_sum[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(comp_sum[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("assembly is deterministic") {
  Fixture f;
  auto rng = test_rng(6);
  const Eigen::VectorXd w = random_velocity(f.spaces, rng);

  const SpMat a = assemble_convection(w, f.spaces, f.mesh);
  const SpMat b = assemble_convection(w, f.spaces, f.mesh);
  REQUIRE(a.nonZeros() == b.nonZeros());
  const Eigen::Map<const Eigen::VectorXd> av(a.valuePtr(), a.nonZeros());
  const Eigen::Map<const Eigen::VectorXd> bv(b.valuePtr(), b.nonZeros());
  CHECK((av - bv).lpNorm<Eigen::Infinity>() == 0.0);

  const SpMat m1 = assemble_mass(f.spaces, f.mesh);
  const SpMat m2 = assemble_mass(f.spaces, f.mesh);
  const Eigen::Map<const Eigen::VectorXd> m1v(m1.valuePtr(), m1.nonZeros());
  const Eigen::Map<const Eigen::VectorXd> m2v(m2.valuePtr(), m2.nonZeros());
  CHECK((m1v - m2v).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("pressure integral vector sums to the volume") {
  Fixture f;
  const Eigen::VectorXd g = pressure_integral_vector(f.spaces, f.mesh);
  CHECK(g.sum() == doctest::Approx(f.mesh.box.volume()).epsilon(1e-13));
  CHECK(g.minCoeff() > 0);
}
