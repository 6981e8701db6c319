#include "core/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "core/errors.hpp"

namespace nscert {

namespace {

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c,
                     const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

// Swap two vertices if needed so the signed volume is positive.
void normalize_orientation(const std::vector<Vec3>& verts,
                           std::array<int, 4>& tet) {
  const double v = signed_volume(verts[tet[0]], verts[tet[1]], verts[tet[2]],
                                 verts[tet[3]]);
  if (v < 0) std::swap(tet[2], tet[3]);
}

std::array<int, 3> sorted_face(int a, int b, int c) {
  std::array<int, 3> f{a, b, c};
  std::sort(f.begin(), f.end());
  return f;
}

// All four faces of a tet as sorted triples.
std::array<std::array<int, 3>, 4> tet_faces(const std::array<int, 4>& t) {
  return {sorted_face(t[1], t[2], t[3]), sorted_face(t[0], t[2], t[3]),
          sorted_face(t[0], t[1], t[3]), sorted_face(t[0], t[1], t[2])};
}

void finalize_mesh(TetMesh& mesh) {
  for (auto& t : mesh.tets) normalize_orientation(mesh.vertices, t);

  std::map<std::array<int, 3>, int> face_count;
  for (const auto& t : mesh.tets)
    for (const auto& f : tet_faces(t)) ++face_count[f];

  mesh.boundary_faces.clear();
  for (const auto& [face, count] : face_count) {
    if (count == 1)
      mesh.boundary_faces.push_back(face);
    else if (count != 2)
      throw InvalidDomainError("non-conforming mesh: face shared by " +
                               std::to_string(count) + " tets");
  }

  mesh.h = 0.0;
  for (int t = 0; t < mesh.tet_count(); ++t)
    mesh.h = std::max(mesh.h, tet_diameter(mesh, t));

  check_mesh(mesh);
}

}  // namespace

double tet_volume(const TetMesh& mesh, int t) {
  const auto& k = mesh.tets[t];
  return signed_volume(mesh.vertices[k[0]], mesh.vertices[k[1]],
                       mesh.vertices[k[2]], mesh.vertices[k[3]]);
}

double tet_diameter(const TetMesh& mesh, int t) {
  const auto& k = mesh.tets[t];
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      d = std::max(d, (mesh.vertices[k[i]] - mesh.vertices[k[j]]).norm());
  return d;
}

TetMesh build_box_mesh(int nx, int ny, int nz, const Box& extents) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw InvalidDomainError("cell counts must be >= 1");
  if (extents.degenerate())
    throw InvalidDomainError("degenerate box extents");

  TetMesh mesh;
  mesh.box = extents;

  const int vx = nx + 1, vy = ny + 1;
  auto vid = [&](int ix, int iy, int iz) { return (iz * vy + iy) * vx + ix; };

  mesh.vertices.reserve(static_cast<std::size_t>(vx) * vy * (nz + 1));
  for (int iz = 0; iz <= nz; ++iz)
    for (int iy = 0; iy <= ny; ++iy)
      for (int ix = 0; ix <= nx; ++ix)
        mesh.vertices.emplace_back(
            extents.lo.x() + ix * (extents.hi.x() - extents.lo.x()) / nx,
            extents.lo.y() + iy * (extents.hi.y() - extents.lo.y()) / ny,
            extents.lo.z() + iz * (extents.hi.z() - extents.lo.z()) / nz);

  // The 6 Kuhn tets of a cell walk from the low corner to the high corner,
  // one axis at a time, in each of the 6 axis orders.
  static const int orders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.tets.reserve(6ull * nx * ny * nz);
  for (int cz = 0; cz < nz; ++cz)
    for (int cy = 0; cy < ny; ++cy)
      for (int cx = 0; cx < nx; ++cx)
        for (const auto& ord : orders) {
          int g[3] = {cx, cy, cz};
          std::array<int, 4> tet;
          tet[0] = vid(g[0], g[1], g[2]);
          for (int s = 0; s < 3; ++s) {
            ++g[ord[s]];
            tet[s + 1] = vid(g[0], g[1], g[2]);
          }
          mesh.tets.push_back(tet);
        }

  finalize_mesh(mesh);
  return mesh;
}

TetMesh refine_uniform(const TetMesh& mesh) {
  TetMesh out;
  out.box = mesh.box;
  out.vertices = mesh.vertices;

  std::map<std::array<int, 2>, int> midpoint;
  auto mid = [&](int a, int b) {
    std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };

  out.tets.reserve(mesh.tets.size() * 8);
  for (const auto& t : mesh.tets) {
    const int m01 = mid(t[0], t[1]), m02 = mid(t[0], t[2]),
              m03 = mid(t[0], t[3]), m12 = mid(t[1], t[2]),
              m13 = mid(t[1], t[3]), m23 = mid(t[2], t[3]);

    // Four corner children.
    out.tets.push_back({t[0], m01, m02, m03});
    out.tets.push_back({t[1], m01, m12, m13});
    out.tets.push_back({t[2], m02, m12, m23});
    out.tets.push_back({t[3], m03, m13, m23});

    // Interior octahedron: three candidate diagonals between opposite
    // midpoints. Pick the shortest; break exact ties by lowest vertex index.
    struct Diagonal {
      int a, b;
      std::array<int, 4> equator;  // cyclic order around the diagonal
    };
    const Diagonal candidates[3] = {
        {m01, m23, {m02, m03, m13, m12}},
        {m02, m13, {m01, m03, m23, m12}},
        {m03, m12, {m01, m02, m23, m13}},
    };
    int best = 0;
    auto key = [&](const Diagonal& d) {
      return std::make_tuple((out.vertices[d.a] - out.vertices[d.b]).norm(),
                             std::min(d.a, d.b), std::max(d.a, d.b));
    };
    for (int c = 1; c < 3; ++c)
      if (key(candidates[c]) < key(candidates[best])) best = c;

    const Diagonal& d = candidates[best];
    for (int e = 0; e < 4; ++e)
      out.tets.push_back({d.a, d.b, d.equator[e], d.equator[(e + 1) % 4]});
  }

  finalize_mesh(out);
  return out;
}

double mesh_size(const TetMesh& mesh) { return mesh.h; }

QualityReport quality_report(const TetMesh& mesh) {
  QualityReport r;
  r.max_diameter = 0.0;
  r.min_diameter = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const double diam = tet_diameter(mesh, t);
    r.max_diameter = std::max(r.max_diameter, diam);
    r.min_diameter = std::min(r.min_diameter, diam);

    // inradius = 3 * volume / total face area
    const auto& k = mesh.tets[t];
    const Vec3& a = mesh.vertices[k[0]];
    const Vec3& b = mesh.vertices[k[1]];
    const Vec3& c = mesh.vertices[k[2]];
    const Vec3& d = mesh.vertices[k[3]];
    const double area = 0.5 * ((b - a).cross(c - a).norm() +
                               (b - a).cross(d - a).norm() +
                               (c - a).cross(d - a).norm() +
                               (c - b).cross(d - b).norm());
    const double inradius = 3.0 * tet_volume(mesh, t) / area;
    r.shape_regularity = std::max(r.shape_regularity, diam / inradius);
  }
  r.diameter_ratio = r.max_diameter / r.min_diameter;
  return r;
}

void check_mesh(const TetMesh& mesh) {
  double vol = 0.0;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const double v = tet_volume(mesh, t);
    if (!(v > 0))
      throw InvalidDomainError("tet " + std::to_string(t) +
                               " has non-positive volume");
    vol += v;
  }
  const double box_vol = mesh.box.volume();
  if (std::abs(vol - box_vol) > 1e-12 * box_vol)
    throw InvalidDomainError("tet volumes do not sum to the box volume");
}

}  // namespace nscert
