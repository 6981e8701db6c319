#pragma once

#include <string>

#include "core/fespace.hpp"

namespace nscert {

// Legacy ASCII VTK unstructured grid (cell type 10). When a field is given,
// velocity is written as point vectors (P2 coefficients down-sampled to the
// vertices) and pressure as point scalars. Visualization-grade output.
void write_vtk_mesh(const TetMesh& mesh, const std::string& path,
                    const std::string& title = "mesh");
void write_vtk_field(const TetMesh& mesh, const SpacePair& spaces,
                     const DiscreteField& field, const std::string& path,
                     const std::string& title = "snapshot");

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

}  // namespace nscert
