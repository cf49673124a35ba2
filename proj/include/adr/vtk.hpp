#pragma once

#include "adr/fem.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace adr {

/// Legacy ASCII VTK unstructured grid: mesh vertices, linear triangles
/// (cell type 5) and one POINT_DATA scalar array per field holding the
/// vertex dof values. P2 edge dofs are not written.
void export_vtk(const std::vector<std::pair<std::string, const FEField*>>& fields, const std::filesystem::path& path);
void export_vtk(const FEField& field, const std::filesystem::path& path, const std::string& name = "u");

} // namespace adr
