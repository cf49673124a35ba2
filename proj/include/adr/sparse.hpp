#pragma once

#include "adr/types.hpp"

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

namespace adr {

/// Compressed sparse row matrix. Column indices are sorted and unique in each row.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
              std::vector<int> column_indices, std::vector<double> values);

    static CsrMatrix identity(std::size_t n);
    /// Duplicate (row, col) entries are summed.
    static CsrMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                   std::vector<std::tuple<int, int, double>> triplets);

    [[nodiscard]] std::size_t rows() const noexcept { return nrows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return ncols_; }
    [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }

    [[nodiscard]] std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    [[nodiscard]] std::span<const int> column_indices() const noexcept { return column_indices_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    /// Entry (i, j), zero when outside the pattern.
    [[nodiscard]] double at(std::size_t i, std::size_t j) const;
    /// Position of (i, j) in values(), or npos.
    [[nodiscard]] std::size_t find(std::size_t i, std::size_t j) const;

    [[nodiscard]] bool same_pattern(const CsrMatrix& other) const noexcept;
    /// this += alpha * other; patterns must match.
    void add_scaled(double alpha, const CsrMatrix& other);
    void scale(double alpha);
    void set_zero();

    [[nodiscard]] CsrMatrix transpose() const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t nrows_ = 0;
    std::size_t ncols_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<int> column_indices_;
    std::vector<double> values_;
};

Vector spmv(const CsrMatrix& a, std::span<const double> x);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

double norm2(std::span<const double> x);

enum class SolverMethod { cg, bicgstab };

struct SolverOptions {
    double tol = 1e-10;
    int max_iter = 5000;
    SolverMethod method = SolverMethod::bicgstab;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Krylov solver bound to one matrix. The ILU(0) factors are computed once at
/// construction and reused by every solve. Initial guess is always zero.
class LinearSolver {
public:
    LinearSolver(CsrMatrix a, SolverOptions options = {});

    [[nodiscard]] const CsrMatrix& matrix() const noexcept { return a_; }
    [[nodiscard]] const SolverOptions& options() const noexcept { return options_; }

    /// Throws SolverFailure when the relative residual is still above tol after max_iter.
    Vector solve(std::span<const double> rhs, SolveStats* stats = nullptr) const;

private:
    void precondition(std::span<const double> r, std::span<double> z) const;
    Vector solve_cg(std::span<const double> rhs, SolveStats& stats) const;
    Vector solve_bicgstab(std::span<const double> rhs, SolveStats& stats) const;

    CsrMatrix a_;
    SolverOptions options_;
    std::vector<double> ilu_;          // L (unit lower) and U packed on a_'s pattern
    std::vector<std::size_t> diag_;    // position of the diagonal in each row
};

Vector solve(const CsrMatrix& a, std::span<const double> rhs, const SolverOptions& options = {},
             SolveStats* stats = nullptr);

} // namespace adr
