#include "core/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/util.hpp"

namespace nscert {

namespace {

void write_vtk_header(std::ostream& os, const TetMesh& mesh,
                      const std::string& title) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& v : mesh.vertices)
    os << format_g17(v.x()) << " " << format_g17(v.y()) << " "
       << format_g17(v.z()) << "\n";
  os << "CELLS " << mesh.tet_count() << " " << 5 * mesh.tet_count() << "\n";
  for (const auto& t : mesh.tets)
    os << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  os << "CELL_TYPES " << mesh.tet_count() << "\n";
  for (int i = 0; i < mesh.tet_count(); ++i) os << "10\n";
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

}  // namespace

void write_vtk_mesh(const TetMesh& mesh, const std::string& path,
                    const std::string& title) {
  auto os = open_for_write(path);
  write_vtk_header(os, mesh, title);
}

void write_vtk_field(const TetMesh& mesh, const SpacePair& spaces,
                     const DiscreteField& field, const std::string& path,
                     const std::string& title) {
  auto os = open_for_write(path);
  write_vtk_header(os, mesh, title);
  os << "POINT_DATA " << mesh.vertex_count() << "\n";
  os << "VECTORS velocity double\n";
  for (int v = 0; v < mesh.vertex_count(); ++v)
    os << format_g17(field.velocity[3 * v + 0]) << " "
       << format_g17(field.velocity[3 * v + 1]) << " "
       << format_g17(field.velocity[3 * v + 2]) << "\n";
  os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < spaces.pressure_dofs(); ++v)
    os << format_g17(field.pressure[v]) << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  auto os = open_for_write(path);
  os << content;
  if (!os) throw IoError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

}  // namespace nscert
