#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "core/errors.hpp"
#include "core/mesh.hpp"

using namespace nscert;

namespace {

Box unit_cube() { return Box{}; }

// Independent oracle: recompute the max edge length straight from the tets.
double max_edge_oracle(const TetMesh& mesh) {
  double h = 0.0;
  for (const auto& t : mesh.tets)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        h = std::max(h, (mesh.vertices[t[i]] - mesh.vertices[t[j]]).norm());
  return h;
}

double volume_sum(const TetMesh& mesh) {
  double v = 0.0;
  for (int t = 0; t < mesh.tet_count(); ++t) v += tet_volume(mesh, t);
  return v;
}

// Face-incidence table as sorted triples -> count.
std::map<std::array<int, 3>, int> face_counts(const TetMesh& mesh) {
  std::map<std::array<int, 3>, int> counts;
  for (const auto& t : mesh.tets) {
    const int f[4][3] = {{t[1], t[2], t[3]},
                         {t[0], t[2], t[3]},
                         {t[0], t[1], t[3]},
                         {t[0], t[1], t[2]}};
    for (const auto& face : f) {
      std::array<int, 3> key{face[0], face[1], face[2]};
      std::sort(key.begin(), key.end());
      ++counts[key];
    }
  }
  return counts;
}

void check_conforming(const TetMesh& mesh) {
  const auto counts = face_counts(mesh);
  int boundary = 0;
  for (const auto& [face, count] : counts) {
    CHECK((count == 1 || count == 2));
    if (count == 1) ++boundary;
  }
  CHECK(boundary == static_cast<int>(mesh.boundary_faces.size()));
}

}  // namespace

TEST_CASE("single-cell Kuhn mesh of the unit cube") {
  const TetMesh mesh = build_box_mesh(1, 1, 1, unit_cube());
  CHECK(mesh.vertex_count() == 8);
  CHECK(mesh.tet_count() == 6);
  CHECK(volume_sum(mesh) == doctest::Approx(1.0).epsilon(1e-12));
  // every Kuhn tet contains the main diagonal
  CHECK(mesh.h == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(mesh_size(mesh) == mesh.h);
  check_conforming(mesh);
}

TEST_CASE("counting oracle for the 2x2x2 mesh") {
  const TetMesh mesh = build_box_mesh(2, 2, 2, unit_cube());
  // construction enumeration: 6 tets per cell, distinct corner coordinates
  CHECK(mesh.tet_count() == 6 * 2 * 2 * 2);
  std::set<int> used;
  for (const auto& t : mesh.tets) used.insert(t.begin(), t.end());
  CHECK(static_cast<int>(used.size()) == 27);
  CHECK(mesh.vertex_count() == 27);
  check_conforming(mesh);
  CHECK(volume_sum(mesh) ==
        doctest::Approx(mesh.box.volume()).epsilon(1e-12));
}

TEST_CASE("positive volumes after orientation normalization") {
  for (const TetMesh& mesh :
       {build_box_mesh(1, 1, 1, unit_cube()),
        build_box_mesh(3, 2, 1, Box{Vec3(-1, 0, 2), Vec3(2, 0.5, 2.25)})}) {
    for (int t = 0; t < mesh.tet_count(); ++t) CHECK(tet_volume(mesh, t) > 0);
  }
}

TEST_CASE("degenerate extents and bad cell counts are rejected") {
  CHECK_THROWS_AS(build_box_mesh(1, 1, 1, Box{Vec3(0, 0, 0), Vec3(1, 0, 1)}),
                  InvalidDomainError);
  CHECK_THROWS_AS(build_box_mesh(1, 1, 1, Box{Vec3(0, 0, 0), Vec3(-1, 1, 1)}),
                  InvalidDomainError);
  CHECK_THROWS_AS(build_box_mesh(0, 1, 1, unit_cube()), InvalidDomainError);
}

TEST_CASE("mesh size of anisotropic cell layouts") {
  // (2,1,1) cells on [0,2]x[0,1]x[0,1]: every cell is a unit cube
  const TetMesh mesh =
      build_box_mesh(2, 1, 1, Box{Vec3(0, 0, 0), Vec3(2, 1, 1)});
  CHECK(mesh.h == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(mesh.h == doctest::Approx(max_edge_oracle(mesh)).epsilon(1e-15));
}

TEST_CASE("uniform refinement") {
  const TetMesh coarse = build_box_mesh(1, 1, 1, unit_cube());
  const TetMesh fine = refine_uniform(coarse);

  CHECK(fine.tet_count() == 8 * coarse.tet_count());
  CHECK(fine.h == doctest::Approx(max_edge_oracle(fine)).epsilon(1e-15));
  CHECK(fine.h == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
  CHECK(volume_sum(fine) == doctest::Approx(1.0).epsilon(1e-12));
  check_conforming(fine);

  const TetMesh finer = refine_uniform(fine);
  CHECK(finer.tet_count() == 64 * coarse.tet_count());
  CHECK(finer.h == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-14));
  check_conforming(finer);
}

TEST_CASE("refinement is deterministic") {
  const TetMesh a = refine_uniform(build_box_mesh(2, 2, 2, unit_cube()));
  const TetMesh b = refine_uniform(build_box_mesh(2, 2, 2, unit_cube()));
  REQUIRE(a.tets.size() == b.tets.size());
  CHECK(a.tets == b.tets);
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    CHECK(a.vertices[i] == b.vertices[i]);
}

TEST_CASE("quality report") {
  const TetMesh cube = build_box_mesh(2, 2, 2, unit_cube());
  const QualityReport q = quality_report(cube);
  // every Kuhn tet's diameter is the cell diagonal, so the ratio is 1
  CHECK(q.diameter_ratio == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(q.shape_regularity > 1.0);
  CHECK(std::isfinite(q.shape_regularity));

  // refinement: corner children are half-scale copies, octahedron children
  // are not, so the recompute-on-children oracle gives sqrt(3/2)
  const QualityReport qr = quality_report(refine_uniform(cube));
  CHECK(qr.max_diameter == doctest::Approx(q.max_diameter / 2).epsilon(1e-12));
  CHECK(qr.diameter_ratio ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(qr.shape_regularity >= q.shape_regularity);

  // anisotropic cells: cells stay congruent (ratio 1) but shape regularity
  // degrades; nothing fails
  const TetMesh flat =
      build_box_mesh(1, 1, 1, Box{Vec3(0, 0, 0), Vec3(4, 1, 1)});
  const QualityReport qf = quality_report(flat);
  CHECK(qf.diameter_ratio == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(qf.shape_regularity > q.shape_regularity);
}

TEST_CASE("face table covers every tet face") {
  const TetMesh mesh = build_box_mesh(2, 1, 2, unit_cube());
  const auto counts = face_counts(mesh);
  std::size_t total = 0;
  for (const auto& [face, count] : counts) total += count;
  CHECK(total == 4 * mesh.tets.size());
}
