#include "adr/fem.hpp"

#include "adr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace adr {
namespace {

constexpr std::array<Vec2, 3> barycentric_grad{Vec2{-1.0, -1.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
constexpr std::array<std::array<int, 2>, 3> local_edges{{{0, 1}, {1, 2}, {2, 0}}};

Mat2 outer_sym(const Vec2& a, const Vec2& b)
{
    return {{{a[0] * b[0] + b[0] * a[0], a[0] * b[1] + b[0] * a[1]},
             {a[1] * b[0] + b[1] * a[0], a[1] * b[1] + b[1] * a[1]}}};
}

bool on_boundary(const Vec2& p)
{
    return p[0] == 0.0 || p[1] == 0.0 || p[0] == 1.0 || p[1] == 1.0;
}

} // namespace

BasisValues reference_basis(int degree, Vec2 point)
{
    BasisValues out;
    const std::array<double, 3> lambda{1.0 - point[0] - point[1], point[0], point[1]};
    if (degree == 1) {
        out.count = 3;
        for (int i = 0; i < 3; ++i) {
            out.values[i] = lambda[i];
            out.gradients[i] = barycentric_grad[i];
            out.hessians[i] = Mat2{};
        }
        return out;
    }
    if (degree != 2) {
        throw InvalidArgument("reference_basis: unsupported degree " + std::to_string(degree));
    }
    out.count = 6;
    for (int i = 0; i < 3; ++i) {
        const Vec2& g = barycentric_grad[i];
        out.values[i] = lambda[i] * (2.0 * lambda[i] - 1.0);
        out.gradients[i] = {(4.0 * lambda[i] - 1.0) * g[0], (4.0 * lambda[i] - 1.0) * g[1]};
        const Mat2 gg = outer_sym(g, g);
        out.hessians[i] = {{{2.0 * gg[0][0], 2.0 * gg[0][1]}, {2.0 * gg[1][0], 2.0 * gg[1][1]}}};
    }
    for (int e = 0; e < 3; ++e) {
        const int a = local_edges[e][0];
        const int b = local_edges[e][1];
        const Vec2& ga = barycentric_grad[a];
        const Vec2& gb = barycentric_grad[b];
        out.values[3 + e] = 4.0 * lambda[a] * lambda[b];
        out.gradients[3 + e] = {4.0 * (lambda[b] * ga[0] + lambda[a] * gb[0]),
                                4.0 * (lambda[b] * ga[1] + lambda[a] * gb[1])};
        const Mat2 s = outer_sym(ga, gb);
        out.hessians[3 + e] = {{{4.0 * s[0][0], 4.0 * s[0][1]}, {4.0 * s[1][0], 4.0 * s[1][1]}}};
    }
    return out;
}

FESpace::FESpace(std::shared_ptr<const StructuredTriMesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree)
{
    if (!mesh_) {
        throw InvalidArgument("FESpace: null mesh");
    }
    if (degree != 1 && degree != 2) {
        throw InvalidArgument("FESpace: unsupported degree " + std::to_string(degree));
    }
    const auto verts = mesh_->vertices();
    const auto tris = mesh_->triangles();
    const auto k = static_cast<std::size_t>(dofs_per_cell());

    dof_coords_.assign(verts.begin(), verts.end());
    cell_dofs_.resize(tris.size() * k);
    std::unordered_map<std::uint64_t, int> edge_dofs;
    edge_dofs.reserve(tris.size() * 2);
    for (std::size_t c = 0; c < tris.size(); ++c) {
        for (int i = 0; i < 3; ++i) {
            cell_dofs_[c * k + static_cast<std::size_t>(i)] = tris[c][i];
        }
        if (degree_ == 2) {
            for (int e = 0; e < 3; ++e) {
                const int a = tris[c][local_edges[e][0]];
                const int b = tris[c][local_edges[e][1]];
                const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                                          static_cast<std::uint32_t>(std::max(a, b));
                auto [it, inserted] = edge_dofs.try_emplace(key, static_cast<int>(dof_coords_.size()));
                if (inserted) {
                    dof_coords_.push_back({0.5 * (verts[a][0] + verts[b][0]), 0.5 * (verts[a][1] + verts[b][1])});
                }
                cell_dofs_[c * k + 3 + static_cast<std::size_t>(e)] = it->second;
            }
        }
    }

    dirichlet_mask_.assign(dof_coords_.size(), 0);
    for (std::size_t d = 0; d < dof_coords_.size(); ++d) {
        // Midpoint test: an interior diagonal may join two boundary vertices.
        if (on_boundary(dof_coords_[d])) {
            dirichlet_mask_[d] = 1;
            dirichlet_dofs_.push_back(static_cast<int>(d));
        }
    }

    geometry_.resize(tris.size());
    for (std::size_t c = 0; c < tris.size(); ++c) {
        const Vec2& p0 = verts[tris[c][0]];
        const Vec2& p1 = verts[tris[c][1]];
        const Vec2& p2 = verts[tris[c][2]];
        CellGeometry& g = geometry_[c];
        g.origin = p0;
        g.jacobian = {{{p1[0] - p0[0], p2[0] - p0[0]}, {p1[1] - p0[1], p2[1] - p0[1]}}};
        g.det = g.jacobian[0][0] * g.jacobian[1][1] - g.jacobian[0][1] * g.jacobian[1][0];
        g.inverse = {{{g.jacobian[1][1] / g.det, -g.jacobian[0][1] / g.det},
                      {-g.jacobian[1][0] / g.det, g.jacobian[0][0] / g.det}}};
        g.diameter = mesh_->diameter(c);
    }

    // Sparsity pattern and per-cell scatter positions.
    const std::size_t ndofs = dof_coords_.size();
    std::vector<std::vector<int>> neighbours(ndofs);
    for (std::size_t c = 0; c < tris.size(); ++c) {
        const auto dofs = cell_dofs(c);
        for (int i : dofs) {
            for (int j : dofs) {
                neighbours[static_cast<std::size_t>(i)].push_back(j);
            }
        }
    }
    std::vector<std::size_t> offsets(ndofs + 1, 0);
    std::vector<int> cols;
    for (std::size_t i = 0; i < ndofs; ++i) {
        auto& row = neighbours[i];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        cols.insert(cols.end(), row.begin(), row.end());
        offsets[i + 1] = cols.size();
        std::vector<int>().swap(row);
    }
    const std::size_t nnz = cols.size();
    pattern_ = CsrMatrix(ndofs, ndofs, std::move(offsets), std::move(cols), std::vector<double>(nnz, 0.0));

    cell_positions_.resize(tris.size() * k * k);
    for (std::size_t c = 0; c < tris.size(); ++c) {
        const auto dofs = cell_dofs(c);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                cell_positions_[(c * k + i) * k + j] = static_cast<std::uint32_t>(
                    pattern_.find(static_cast<std::size_t>(dofs[i]), static_cast<std::size_t>(dofs[j])));
            }
        }
    }
}

CsrMatrix FESpace::new_matrix() const { return pattern_; }

void FESpace::scatter(CsrMatrix& a, std::size_t cell, std::span<const double> local) const
{
    const auto k = static_cast<std::size_t>(dofs_per_cell());
    auto values = a.values();
    const std::uint32_t* pos = cell_positions_.data() + cell * k * k;
    for (std::size_t m = 0; m < k * k; ++m) {
        values[pos[m]] += local[m];
    }
}

FEField::FEField(std::shared_ptr<const FESpace> space) : space_(std::move(space))
{
    if (!space_) {
        throw InvalidArgument("FEField: null space");
    }
    values_.assign(space_->num_dofs(), 0.0);
}

FEField::FEField(std::shared_ptr<const FESpace> space, Vector values)
    : space_(std::move(space)), values_(std::move(values))
{
    if (!space_) {
        throw InvalidArgument("FEField: null space");
    }
    if (values_.size() != space_->num_dofs()) {
        throw InvalidArgument("FEField: " + std::to_string(values_.size()) + " values for a space with " +
                              std::to_string(space_->num_dofs()) + " dofs");
    }
}

double FEField::evaluate(std::size_t cell, Vec2 ref) const
{
    const BasisValues basis = reference_basis(space_->degree(), ref);
    const auto dofs = space_->cell_dofs(cell);
    double s = 0.0;
    for (int i = 0; i < basis.count; ++i) {
        s += basis.values[i] * values_[static_cast<std::size_t>(dofs[i])];
    }
    return s;
}

CellValues::CellValues(const FESpace& space, const QuadratureRule& rule)
    : space_(space), rule_(rule), k_(space.dofs_per_cell()), nq_(rule.size())
{
    ref_values_.resize(nq_ * k_);
    ref_grads_.resize(nq_ * k_);
    ref_hessians_.resize(k_);
    for (std::size_t q = 0; q < nq_; ++q) {
        const BasisValues b = reference_basis(space.degree(), rule.points[q]);
        for (int i = 0; i < k_; ++i) {
            ref_values_[q * k_ + i] = b.values[i];
            ref_grads_[q * k_ + i] = b.gradients[i];
            ref_hessians_[i] = b.hessians[i]; // constant on the reference cell
        }
    }
    grads_.resize(nq_ * k_);
    points_.resize(nq_);
    jxw_.resize(nq_);
}

void CellValues::reinit(std::size_t cell)
{
    cell_ = cell;
    const CellGeometry& g = space_.geometry(cell);
    const Mat2& inv = g.inverse;
    for (std::size_t q = 0; q < nq_; ++q) {
        points_[q] = g.map(rule_.points[q]);
        jxw_[q] = rule_.weights[q] * std::abs(g.det);
        for (int i = 0; i < k_; ++i) {
            const Vec2& r = ref_grads_[q * k_ + i];
            grads_[q * k_ + i] = {inv[0][0] * r[0] + inv[1][0] * r[1], inv[0][1] * r[0] + inv[1][1] * r[1]};
        }
    }
    // Physical Hessian H = inv^T Href inv; only its trace is needed.
    for (int i = 0; i < k_; ++i) {
        const Mat2& h = ref_hessians_[i];
        double trace = 0.0;
        for (int d = 0; d < 2; ++d) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    trace += inv[a][d] * h[a][b] * inv[b][d];
                }
            }
        }
        laplacians_[i] = trace;
    }
}

double CellValues::value(std::span<const double> field, std::size_t q) const
{
    const auto dofs = space_.cell_dofs(cell_);
    double s = 0.0;
    for (int i = 0; i < k_; ++i) {
        s += field[static_cast<std::size_t>(dofs[i])] * ref_values_[q * k_ + i];
    }
    return s;
}

Vec2 CellValues::gradient(std::span<const double> field, std::size_t q) const
{
    const auto dofs = space_.cell_dofs(cell_);
    Vec2 s{0.0, 0.0};
    for (int i = 0; i < k_; ++i) {
        const double c = field[static_cast<std::size_t>(dofs[i])];
        s[0] += c * grads_[q * k_ + i][0];
        s[1] += c * grads_[q * k_ + i][1];
    }
    return s;
}

CsrMatrix assemble_operator(const FESpace& space, double mu, const Vec2& b, double sigma_eff)
{
    return assemble_matrix(space, 2 * space.degree(), [&](const CellValues& cv, std::span<double> local) {
        const int k = cv.dofs_per_cell();
        for (std::size_t q = 0; q < cv.num_points(); ++q) {
            const double w = cv.jxw(q);
            for (int i = 0; i < k; ++i) {
                const double phi_i = cv.shape(i, q);
                const Vec2& gi = cv.grad(i, q);
                for (int j = 0; j < k; ++j) {
                    const Vec2& gj = cv.grad(j, q);
                    local[i * k + j] +=
                        w * (mu * dot(gi, gj) + dot(b, gj) * phi_i + sigma_eff * cv.shape(j, q) * phi_i);
                }
            }
        }
    });
}

CsrMatrix assemble_mass(const FESpace& space) { return assemble_operator(space, 0.0, {0.0, 0.0}, 1.0); }

CsrMatrix assemble_stiffness(const FESpace& space) { return assemble_operator(space, 1.0, {0.0, 0.0}, 0.0); }

Vector assemble_load(const FESpace& space, const SpatialFunction& g, int quad_degree)
{
    return assemble_vector(space, quad_degree, [&](const CellValues& cv, std::span<double> local) {
        for (std::size_t q = 0; q < cv.num_points(); ++q) {
            const Vec2& x = cv.point(q);
            const double gw = g(x[0], x[1]) * cv.jxw(q);
            for (int i = 0; i < cv.dofs_per_cell(); ++i) {
                local[i] += gw * cv.shape(i, q);
            }
        }
    });
}

namespace {

std::vector<unsigned char> constraint_mask(std::size_t n, std::span<const int> dofs)
{
    std::vector<unsigned char> mask(n, 0);
    for (int d : dofs) {
        if (d < 0 || static_cast<std::size_t>(d) >= n) {
            throw InvalidArgument("apply_dirichlet: dof " + std::to_string(d) + " out of range");
        }
        mask[static_cast<std::size_t>(d)] = 1;
    }
    return mask;
}

} // namespace

void constrain_matrix(CsrMatrix& a, std::span<const int> dofs)
{
    const auto mask = constraint_mask(a.rows(), dofs);
    const auto offsets = a.row_offsets();
    const auto cols = a.column_indices();
    auto vals = a.values();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            const auto j = static_cast<std::size_t>(cols[k]);
            if (mask[i] != 0 || mask[j] != 0) {
                vals[k] = (i == j) ? 1.0 : 0.0;
            }
        }
    }
}

void lift_rhs(const CsrMatrix& unconstrained, Vector& rhs, std::span<const int> dofs, std::span<const double> values)
{
    if (dofs.size() != values.size()) {
        throw InvalidArgument("apply_dirichlet: dofs and values differ in length");
    }
    if (rhs.size() != unconstrained.rows()) {
        throw InvalidArgument("apply_dirichlet: rhs length does not match matrix");
    }
    const auto mask = constraint_mask(unconstrained.rows(), dofs);
    Vector g(unconstrained.cols(), 0.0);
    bool any_nonzero = false;
    for (std::size_t m = 0; m < dofs.size(); ++m) {
        g[static_cast<std::size_t>(dofs[m])] = values[m];
        any_nonzero = any_nonzero || values[m] != 0.0;
    }
    if (any_nonzero) {
        const Vector lift = spmv(unconstrained, g);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            if (mask[i] == 0) {
                rhs[i] -= lift[i];
            }
        }
    }
    for (std::size_t m = 0; m < dofs.size(); ++m) {
        rhs[static_cast<std::size_t>(dofs[m])] = values[m];
    }
}

void apply_dirichlet(CsrMatrix& a, Vector& rhs, std::span<const int> dofs, std::span<const double> values)
{
    lift_rhs(a, rhs, dofs, values);
    constrain_matrix(a, dofs);
}

FEField interpolate(const std::shared_ptr<const FESpace>& space, const SpatialFunction& g)
{
    FEField u(space);
    const auto coords = space->dof_coords();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        u[i] = g(coords[i][0], coords[i][1]);
    }
    return u;
}

ErrorNorms compute_errors(const FEField& uh, const SpatialFunction& exact,
                          const std::function<Vec2(double, double)>& exact_gradient, int quad_degree)
{
    const FESpace& space = uh.space();
    CellValues cv(space, quadrature_rule(quad_degree));
    double l2 = 0.0;
    double semi = 0.0;
    for (std::size_t c = 0; c < space.num_cells(); ++c) {
        cv.reinit(c);
        for (std::size_t q = 0; q < cv.num_points(); ++q) {
            const Vec2& x = cv.point(q);
            const double e = cv.value(uh.values(), q) - exact(x[0], x[1]);
            const Vec2 gh = cv.gradient(uh.values(), q);
            const Vec2 g = exact_gradient(x[0], x[1]);
            l2 += cv.jxw(q) * e * e;
            semi += cv.jxw(q) * ((gh[0] - g[0]) * (gh[0] - g[0]) + (gh[1] - g[1]) * (gh[1] - g[1]));
        }
    }
    ErrorNorms out;
    out.l2 = std::sqrt(l2);
    out.h1_semi = std::sqrt(semi);
    out.h1_norm = std::sqrt(l2 + semi);
    return out;
}

double l2_norm(const FEField& u, const CsrMatrix& mass)
{
    const Vector mu = spmv(mass, u.values());
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        s += mu[i] * u[i];
    }
    return std::sqrt(std::max(s, 0.0));
}

} // namespace adr
