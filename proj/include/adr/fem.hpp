#pragma once

#include "adr/mesh.hpp"
#include "adr/quadrature.hpp"
#include "adr/sparse.hpp"
#include "adr/types.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace adr {

constexpr int max_dofs_per_cell = 6;

struct BasisValues {
    int count = 0; ///< 3 for P1, 6 for P2
    std::array<double, max_dofs_per_cell> values{};
    std::array<Vec2, max_dofs_per_cell> gradients{};
    std::array<Mat2, max_dofs_per_cell> hessians{};
};

/// Lagrange basis on the reference triangle. Local order: vertices 0, 1, 2
/// then (P2) midpoints of edges 01, 12, 20.
BasisValues reference_basis(int degree, Vec2 point);

/// Affine map data of one triangle.
struct CellGeometry {
    Vec2 origin{};
    Mat2 jacobian{};     ///< columns are the edge vectors v1 - v0, v2 - v0
    Mat2 inverse{};      ///< inverse of the jacobian
    double det = 0.0;
    double diameter = 0.0;

    [[nodiscard]] Vec2 map(Vec2 ref) const
    {
        return {origin[0] + jacobian[0][0] * ref[0] + jacobian[0][1] * ref[1],
                origin[1] + jacobian[1][0] * ref[0] + jacobian[1][1] * ref[1]};
    }
};

/// Continuous P1 or P2 Lagrange space on a structured mesh, with every
/// boundary dof treated as Dirichlet. P2 numbering: all vertices first (same
/// index as the mesh vertex), then edge midpoints in order of first visit.
class FESpace {
public:
    FESpace(std::shared_ptr<const StructuredTriMesh> mesh, int degree);

    [[nodiscard]] const StructuredTriMesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int dofs_per_cell() const noexcept { return degree_ == 1 ? 3 : 6; }
    [[nodiscard]] std::size_t num_dofs() const noexcept { return dof_coords_.size(); }
    [[nodiscard]] std::size_t num_cells() const noexcept { return mesh_->num_triangles(); }

    [[nodiscard]] std::span<const Vec2> dof_coords() const noexcept { return dof_coords_; }
    [[nodiscard]] std::span<const int> cell_dofs(std::size_t cell) const
    {
        const auto k = static_cast<std::size_t>(dofs_per_cell());
        return {cell_dofs_.data() + cell * k, k};
    }
    [[nodiscard]] const std::vector<int>& dirichlet_dofs() const noexcept { return dirichlet_dofs_; }
    [[nodiscard]] bool is_dirichlet(std::size_t dof) const { return dirichlet_mask_[dof] != 0; }
    [[nodiscard]] const CellGeometry& geometry(std::size_t cell) const { return geometry_[cell]; }

    /// Zero matrix carrying the sparsity pattern of this space.
    [[nodiscard]] CsrMatrix new_matrix() const;
    /// Adds a dense local matrix (row-major, local[i * k + j] couples test i with trial j).
    void scatter(CsrMatrix& a, std::size_t cell, std::span<const double> local) const;

private:
    std::shared_ptr<const StructuredTriMesh> mesh_;
    int degree_;
    std::vector<Vec2> dof_coords_;
    std::vector<int> cell_dofs_;
    std::vector<int> dirichlet_dofs_;
    std::vector<unsigned char> dirichlet_mask_;
    std::vector<CellGeometry> geometry_;
    CsrMatrix pattern_;
    std::vector<std::uint32_t> cell_positions_;
};

/// Coefficient vector over the dofs of a space.
class FEField {
public:
    explicit FEField(std::shared_ptr<const FESpace> space);
    FEField(std::shared_ptr<const FESpace> space, Vector values);

    [[nodiscard]] const FESpace& space() const noexcept { return *space_; }
    [[nodiscard]] const std::shared_ptr<const FESpace>& space_ptr() const noexcept { return space_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Value at a reference point of one cell.
    [[nodiscard]] double evaluate(std::size_t cell, Vec2 ref) const;

private:
    std::shared_ptr<const FESpace> space_;
    Vector values_;
};

/// Basis data mapped to one physical cell at the points of a quadrature rule.
class CellValues {
public:
    CellValues(const FESpace& space, const QuadratureRule& rule);

    void reinit(std::size_t cell);

    [[nodiscard]] std::size_t cell() const noexcept { return cell_; }
    [[nodiscard]] int dofs_per_cell() const noexcept { return k_; }
    [[nodiscard]] std::size_t num_points() const noexcept { return nq_; }
    [[nodiscard]] std::span<const int> dofs() const { return space_.cell_dofs(cell_); }

    [[nodiscard]] double shape(int i, std::size_t q) const { return ref_values_[q * k_ + i]; }
    [[nodiscard]] const Vec2& grad(int i, std::size_t q) const { return grads_[q * k_ + i]; }
    /// Elementwise Laplacian (constant on affine cells, zero for P1).
    [[nodiscard]] double laplacian(int i) const { return laplacians_[i]; }
    [[nodiscard]] const Vec2& point(std::size_t q) const { return points_[q]; }
    [[nodiscard]] double jxw(std::size_t q) const { return jxw_[q]; }

    /// Interpolated value of a field at point q of the current cell.
    [[nodiscard]] double value(std::span<const double> field, std::size_t q) const;
    [[nodiscard]] Vec2 gradient(std::span<const double> field, std::size_t q) const;

private:
    const FESpace& space_;
    const QuadratureRule& rule_;
    int k_;
    std::size_t nq_;
    std::size_t cell_ = 0;
    std::vector<double> ref_values_;
    std::vector<Vec2> ref_grads_;
    std::vector<Mat2> ref_hessians_;
    std::vector<Vec2> grads_;
    std::array<double, max_dofs_per_cell> laplacians_{};
    std::vector<Vec2> points_;
    std::vector<double> jxw_;
};

/// Cell loop assembling a matrix. kernel(cv, local) fills the k*k local matrix
/// (zeroed beforehand) for the cell cv was reinitialized on.
template <class Kernel>
CsrMatrix assemble_matrix(const FESpace& space, int quad_degree, Kernel&& kernel)
{
    CsrMatrix a = space.new_matrix();
    CellValues cv(space, quadrature_rule(quad_degree));
    const auto k = static_cast<std::size_t>(space.dofs_per_cell());
    std::vector<double> local(k * k);
    for (std::size_t c = 0; c < space.num_cells(); ++c) {
        cv.reinit(c);
        std::fill(local.begin(), local.end(), 0.0);
        kernel(cv, std::span<double>(local));
        space.scatter(a, c, local);
    }
    return a;
}

/// Cell loop assembling a vector. kernel(cv, local) fills the k local entries.
template <class Kernel>
Vector assemble_vector(const FESpace& space, int quad_degree, Kernel&& kernel)
{
    Vector v(space.num_dofs(), 0.0);
    CellValues cv(space, quadrature_rule(quad_degree));
    const auto k = static_cast<std::size_t>(space.dofs_per_cell());
    std::vector<double> local(k);
    for (std::size_t c = 0; c < space.num_cells(); ++c) {
        cv.reinit(c);
        std::fill(local.begin(), local.end(), 0.0);
        kernel(cv, std::span<double>(local));
        const auto dofs = space.cell_dofs(c);
        for (std::size_t i = 0; i < k; ++i) {
            v[static_cast<std::size_t>(dofs[i])] += local[i];
        }
    }
    return v;
}

/// A[i][j] = mu (grad phi_j, grad phi_i) + (b . grad phi_j, phi_i) + sigma_eff (phi_j, phi_i),
/// before boundary conditions. Quadrature exact to degree 2p.
CsrMatrix assemble_operator(const FESpace& space, double mu, const Vec2& b, double sigma_eff);

CsrMatrix assemble_mass(const FESpace& space);
CsrMatrix assemble_stiffness(const FESpace& space);

/// Entries int g phi_i.
Vector assemble_load(const FESpace& space, const SpatialFunction& g, int quad_degree);

/// Symmetric elimination of Dirichlet dofs: the lift A[:, D] * values moves to
/// the rhs, rows and columns of D are zeroed and the diagonal set to one.
void apply_dirichlet(CsrMatrix& a, Vector& rhs, std::span<const int> dofs, std::span<const double> values);

/// Matrix part of apply_dirichlet; reusable across right-hand sides.
void constrain_matrix(CsrMatrix& a, std::span<const int> dofs);
/// Rhs part of apply_dirichlet, given the unconstrained matrix.
void lift_rhs(const CsrMatrix& unconstrained, Vector& rhs, std::span<const int> dofs,
              std::span<const double> values);

FEField interpolate(const std::shared_ptr<const FESpace>& space, const SpatialFunction& g);

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double h1_norm = 0.0; ///< sqrt(l2^2 + h1_semi^2)
};

/// L2 and H1 errors against an exact solution and its gradient.
ErrorNorms compute_errors(const FEField& uh, const SpatialFunction& exact,
                          const std::function<Vec2(double, double)>& exact_gradient, int quad_degree);

/// Mass-weighted L2 norm of a field (exact for the discrete field).
double l2_norm(const FEField& u, const CsrMatrix& mass);

} // namespace adr
