#pragma once

#include <random>

#include "core/fespace.hpp"

// Shared deterministic RNG for all randomized test utilities.
inline std::mt19937_64 test_rng(unsigned long long seed = 12345) {
  return std::mt19937_64(seed);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random point strictly inside the reference tetrahedron.
inline nscert::Vec3 random_ref_point(std::mt19937_64& rng) {
  for (;;) {
    const double x = uniform(rng, 0.0, 1.0);
    const double y = uniform(rng, 0.0, 1.0);
    const double z = uniform(rng, 0.0, 1.0);
    if (x + y + z < 1.0) return {x, y, z};
  }
}

// Random velocity coefficient vector; boundary dofs zeroed when requested.
inline Eigen::VectorXd random_velocity(const nscert::SpacePair& spaces,
                                       std::mt19937_64& rng,
                                       bool zero_boundary = false) {
  Eigen::VectorXd v(spaces.velocity_dofs());
  for (int i = 0; i < v.size(); ++i) v[i] = uniform(rng, -1.0, 1.0);
  if (zero_boundary)
    for (int dof : spaces.boundary_velocity_dofs) v[dof] = 0.0;
  return v;
}
