#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace nscert {

using Vec3 = Eigen::Vector3d;

// Axis-aligned box domain.
struct Box {
  Vec3 lo{0, 0, 0};
  Vec3 hi{1, 1, 1};

  double volume() const {
    return (hi.x() - lo.x()) * (hi.y() - lo.y()) * (hi.z() - lo.z());
  }
  bool degenerate() const {
    return !(hi.x() > lo.x() && hi.y() > lo.y() && hi.z() > lo.z());
  }
};

// Conforming tetrahedral partition of a box. Tets are orientation-normalized
// to positive signed volume; boundary_faces hold sorted vertex triples.
struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 3>> boundary_faces;
  Box box;
  double h = 0.0;  // max element diameter (= longest edge of any tet)

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int tet_count() const { return static_cast<int>(tets.size()); }
};

struct QualityReport {
  double max_diameter = 0.0;
  double min_diameter = 0.0;
  double diameter_ratio = 0.0;    // max_diameter / min_diameter
  double shape_regularity = 0.0;  // max over tets of diameter / inradius
};

// Kuhn (main-diagonal) subdivision: each of the nx*ny*nz hexahedral cells is
// split into 6 tets sharing the cell's main diagonal. Vertices are ordered
// lexicographically by (z, y, x) grid index.
TetMesh build_box_mesh(int nx, int ny, int nz, const Box& extents);

// Red refinement: each tet is replaced by 8 children through its edge
// midpoints. The interior octahedron is split along the shortest diagonal
// (ties broken by lowest vertex index), so results are reproducible.
TetMesh refine_uniform(const TetMesh& mesh);

double mesh_size(const TetMesh& mesh);
QualityReport quality_report(const TetMesh& mesh);

double tet_volume(const TetMesh& mesh, int t);
double tet_diameter(const TetMesh& mesh, int t);

// Face-incidence and volume checks; throws InvalidDomainError on violation.
// Construction and refinement run this before returning.
void check_mesh(const TetMesh& mesh);

}  // namespace nscert
