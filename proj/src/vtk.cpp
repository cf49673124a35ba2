#include "adr/vtk.hpp"

#include "adr/config.hpp"
#include "adr/errors.hpp"

#include <fstream>

namespace adr {

void export_vtk(const std::vector<std::pair<std::string, const FEField*>>& fields, const std::filesystem::path& path)
{
    if (fields.empty()) {
        throw InvalidArgument("export_vtk: no fields given");
    }
    const FESpace& space = fields.front().second->space();
    for (const auto& [name, field] : fields) {
        if (field->space_ptr().get() != &space) {
            throw InvalidArgument("export_vtk: field '" + name + "' lives on another space");
        }
    }
    const StructuredTriMesh& mesh = space.mesh();

    std::ofstream out(path);
    if (!out) {
        throw IoError("export_vtk: cannot open '" + path.string() + "' for writing");
    }
    out << "# vtk DataFile Version 3.0\n"
        << "adr finite element field\n"
        << "ASCII\n"
        << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_vertices() << " double\n";
    for (const Vec2& v : mesh.vertices()) {
        out << format_number(v[0]) << ' ' << format_number(v[1]) << " 0\n";
    }
    out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
    for (const auto& t : mesh.triangles()) {
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    out << "CELL_TYPES " << mesh.num_triangles() << '\n';
    for (std::size_t c = 0; c < mesh.num_triangles(); ++c) {
        out << "5\n";
    }
    out << "POINT_DATA " << mesh.num_vertices() << '\n';
    for (const auto& [name, field] : fields) {
        out << "SCALARS " << name << " double 1\n"
            << "LOOKUP_TABLE default\n";
        // Vertex dofs come first in both P1 and P2 numbering.
        for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
            out << format_number((*field)[v]) << '\n';
        }
    }
    out.flush();
    if (!out) {
        throw IoError("export_vtk: write to '" + path.string() + "' failed");
    }
}

void export_vtk(const FEField& field, const std::filesystem::path& path, const std::string& name)
{
    export_vtk({{name, &field}}, path);
}

} // namespace adr
