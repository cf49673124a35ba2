#pragma once

#include "adr/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace adr {

/// Uniform triangulation of the unit square: n x n sub-squares, each cut along
/// its lower-left to upper-right diagonal. Vertex (i/n, j/n) has index
/// j*(n+1) + i. Immutable after construction.
class StructuredTriMesh {
public:
    explicit StructuredTriMesh(int n);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::span<const Vec2> vertices() const noexcept { return vertices_; }
    [[nodiscard]] std::span<const std::array<int, 3>> triangles() const noexcept { return triangles_; }
    [[nodiscard]] std::size_t num_vertices() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t num_triangles() const noexcept { return triangles_.size(); }

    [[nodiscard]] bool is_boundary_vertex(std::size_t v) const { return boundary_[v] != 0; }
    [[nodiscard]] int vertex_index(int i, int j) const noexcept { return j * (n_ + 1) + i; }

    /// Longest edge, sqrt(2)/n.
    [[nodiscard]] double h() const noexcept;
    /// Shortest edge, 1/n.
    [[nodiscard]] double h_min() const noexcept;

    [[nodiscard]] double signed_area(std::size_t tri) const;
    /// Longest edge of one triangle.
    [[nodiscard]] double diameter(std::size_t tri) const;

private:
    int n_;
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<unsigned char> boundary_;
};

StructuredTriMesh build_structured_mesh(int n);

/// Pe_h = b_inf * h / (2 mu) with h = sqrt(2)/n.
double local_peclet(const StructuredTriMesh& mesh, double b_inf, double mu);

} // namespace adr
