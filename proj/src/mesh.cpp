#include "adr/mesh.hpp"

#include "adr/errors.hpp"

#include <algorithm>
#include <cmath>

namespace adr {

StructuredTriMesh::StructuredTriMesh(int n) : n_(n)
{
    if (n < 1) {
        throw InvalidArgument("StructuredTriMesh: n must be >= 1, got " + std::to_string(n));
    }
    const int np = n + 1;
    vertices_.reserve(static_cast<std::size_t>(np) * np);
    boundary_.reserve(static_cast<std::size_t>(np) * np);
    for (int j = 0; j < np; ++j) {
        for (int i = 0; i < np; ++i) {
            vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
            boundary_.push_back(i == 0 || j == 0 || i == n || j == n ? 1 : 0);
        }
    }

    triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = vertex_index(i, j);
            const int v10 = vertex_index(i + 1, j);
            const int v11 = vertex_index(i + 1, j + 1);
            const int v01 = vertex_index(i, j + 1);
            triangles_.push_back({v00, v10, v11});
            triangles_.push_back({v00, v11, v01});
        }
    }
}

double StructuredTriMesh::h() const noexcept { return std::sqrt(2.0) / n_; }

double StructuredTriMesh::h_min() const noexcept { return 1.0 / n_; }

double StructuredTriMesh::signed_area(std::size_t tri) const
{
    const auto& t = triangles_.at(tri);
    const Vec2& a = vertices_[t[0]];
    const Vec2& b = vertices_[t[1]];
    const Vec2& c = vertices_[t[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double StructuredTriMesh::diameter(std::size_t tri) const
{
    const auto& t = triangles_.at(tri);
    double longest = 0.0;
    for (int e = 0; e < 3; ++e) {
        const Vec2& p = vertices_[t[e]];
        const Vec2& q = vertices_[t[(e + 1) % 3]];
        longest = std::max(longest, std::hypot(q[0] - p[0], q[1] - p[1]));
    }
    return longest;
}

StructuredTriMesh build_structured_mesh(int n) { return StructuredTriMesh(n); }

double local_peclet(const StructuredTriMesh& mesh, double b_inf, double mu)
{
    if (!(mu > 0.0)) {
        throw InvalidArgument("local_peclet: mu must be positive");
    }
    return b_inf * mesh.h() / (2.0 * mu);
}

} // namespace adr
