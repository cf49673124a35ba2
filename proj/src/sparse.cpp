#include "adr/sparse.hpp"

#include "adr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace adr {

CsrMatrix::CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
                     std::vector<int> column_indices, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), row_offsets_(std::move(row_offsets)),
      column_indices_(std::move(column_indices)), values_(std::move(values))
{
    if (row_offsets_.size() != nrows_ + 1 || row_offsets_.front() != 0 ||
        row_offsets_.back() != column_indices_.size() || column_indices_.size() != values_.size()) {
        throw InvalidArgument("CsrMatrix: inconsistent array sizes");
    }
    for (std::size_t i = 0; i < nrows_; ++i) {
        if (row_offsets_[i] > row_offsets_[i + 1]) {
            throw InvalidArgument("CsrMatrix: row offsets not monotone");
        }
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const int c = column_indices_[k];
            if (c < 0 || static_cast<std::size_t>(c) >= ncols_) {
                throw InvalidArgument("CsrMatrix: column index out of range");
            }
            if (k > row_offsets_[i] && column_indices_[k - 1] >= c) {
                throw InvalidArgument("CsrMatrix: column indices not sorted and unique");
            }
        }
    }
}

CsrMatrix CsrMatrix::identity(std::size_t n)
{
    std::vector<std::size_t> offsets(n + 1);
    std::iota(offsets.begin(), offsets.end(), std::size_t{0});
    std::vector<int> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    return CsrMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                   std::vector<std::tuple<int, int, double>> triplets)
{
    for (const auto& [r, c, v] : triplets) {
        if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= nrows || static_cast<std::size_t>(c) >= ncols) {
            throw InvalidArgument("CsrMatrix::from_triplets: index out of range");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::size_t> offsets(nrows + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const auto [r, c, v] = triplets[k];
        if (!cols.empty() && k > 0 && std::get<0>(triplets[k - 1]) == r && std::get<1>(triplets[k - 1]) == c) {
            vals.back() += v;
            continue;
        }
        cols.push_back(c);
        vals.push_back(v);
        ++offsets[static_cast<std::size_t>(r) + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    return CsrMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

std::size_t CsrMatrix::find(std::size_t i, std::size_t j) const
{
    if (i >= nrows_ || j >= ncols_) {
        return npos;
    }
    const auto first = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto last = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<int>(j));
    if (it == last || *it != static_cast<int>(j)) {
        return npos;
    }
    return static_cast<std::size_t>(it - column_indices_.begin());
}

double CsrMatrix::at(std::size_t i, std::size_t j) const
{
    const std::size_t k = find(i, j);
    return k == npos ? 0.0 : values_[k];
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const noexcept
{
    return nrows_ == other.nrows_ && ncols_ == other.ncols_ && row_offsets_ == other.row_offsets_ &&
           column_indices_ == other.column_indices_;
}

void CsrMatrix::add_scaled(double alpha, const CsrMatrix& other)
{
    if (!same_pattern(other)) {
        throw InvalidArgument("CsrMatrix::add_scaled: sparsity patterns differ");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        values_[k] += alpha * other.values_[k];
    }
}

void CsrMatrix::scale(double alpha)
{
    for (double& v : values_) {
        v *= alpha;
    }
}

void CsrMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

CsrMatrix CsrMatrix::transpose() const
{
    std::vector<std::size_t> offsets(ncols_ + 1, 0);
    for (int c : column_indices_) {
        ++offsets[static_cast<std::size_t>(c) + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<int> cols(nnz());
    std::vector<double> vals(nnz());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < nrows_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const std::size_t dst = cursor[static_cast<std::size_t>(column_indices_[k])]++;
            cols[dst] = static_cast<int>(i);
            vals[dst] = values_[k];
        }
    }
    return CsrMatrix(ncols_, nrows_, std::move(offsets), std::move(cols), std::move(vals));
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y)
{
    if (x.size() != a.cols() || y.size() != a.rows()) {
        std::ostringstream msg;
        msg << "spmv: dimension mismatch (" << a.rows() << "x" << a.cols() << " times " << x.size() << ")";
        throw InvalidArgument(msg.str());
    }
    const auto offsets = a.row_offsets();
    const auto cols = a.column_indices();
    const auto vals = a.values();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            sum += vals[k] * x[static_cast<std::size_t>(cols[k])];
        }
        y[i] = sum;
    }
}

Vector spmv(const CsrMatrix& a, std::span<const double> x)
{
    Vector y(a.rows());
    spmv(a, x, y);
    return y;
}

double norm2(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

namespace {

double dot_product(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double relative_residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> rhs,
                         double rhs_norm)
{
    Vector r = spmv(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = rhs[i] - r[i];
    }
    return norm2(r) / rhs_norm;
}

} // namespace

LinearSolver::LinearSolver(CsrMatrix a, SolverOptions options) : a_(std::move(a)), options_(options)
{
    if (a_.rows() != a_.cols()) {
        throw InvalidArgument("LinearSolver: matrix must be square");
    }
    const std::size_t n = a_.rows();
    const auto offsets = a_.row_offsets();
    const auto cols = a_.column_indices();
    diag_.assign(n, CsrMatrix::npos);
    for (std::size_t i = 0; i < n; ++i) {
        if (offsets[i] == offsets[i + 1]) {
            throw SingularMatrix("LinearSolver: row " + std::to_string(i) + " is empty");
        }
        diag_[i] = a_.find(i, i);
        if (diag_[i] == CsrMatrix::npos) {
            throw SingularMatrix("LinearSolver: row " + std::to_string(i) + " has no diagonal entry");
        }
    }

    // ILU(0): IKJ variant restricted to the pattern of a_.
    ilu_.assign(a_.values().begin(), a_.values().end());
    std::vector<std::size_t> position(n, CsrMatrix::npos);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            position[static_cast<std::size_t>(cols[k])] = k;
        }
        for (std::size_t kk = offsets[i]; kk < offsets[i + 1]; ++kk) {
            const auto k = static_cast<std::size_t>(cols[kk]);
            if (k >= i) {
                break;
            }
            const double pivot = ilu_[diag_[k]];
            ilu_[kk] /= pivot;
            const double lik = ilu_[kk];
            for (std::size_t jj = diag_[k] + 1; jj < offsets[k + 1]; ++jj) {
                const std::size_t p = position[static_cast<std::size_t>(cols[jj])];
                if (p != CsrMatrix::npos) {
                    ilu_[p] -= lik * ilu_[jj];
                }
            }
        }
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            position[static_cast<std::size_t>(cols[k])] = CsrMatrix::npos;
        }
        if (ilu_[diag_[i]] == 0.0 || !std::isfinite(ilu_[diag_[i]])) {
            throw SingularMatrix("LinearSolver: zero pivot in row " + std::to_string(i));
        }
    }
}

void LinearSolver::precondition(std::span<const double> r, std::span<double> z) const
{
    const std::size_t n = a_.rows();
    const auto offsets = a_.row_offsets();
    const auto cols = a_.column_indices();
    for (std::size_t i = 0; i < n; ++i) {
        double s = r[i];
        for (std::size_t k = offsets[i]; k < diag_[i]; ++k) {
            s -= ilu_[k] * z[static_cast<std::size_t>(cols[k])];
        }
        z[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = z[i];
        for (std::size_t k = diag_[i] + 1; k < offsets[i + 1]; ++k) {
            s -= ilu_[k] * z[static_cast<std::size_t>(cols[k])];
        }
        z[i] = s / ilu_[diag_[i]];
    }
}

Vector LinearSolver::solve(std::span<const double> rhs, SolveStats* stats) const
{
    if (rhs.size() != a_.rows()) {
        throw InvalidArgument("LinearSolver::solve: rhs length does not match matrix");
    }
    SolveStats local;
    Vector x = options_.method == SolverMethod::cg ? solve_cg(rhs, local) : solve_bicgstab(rhs, local);
    if (stats != nullptr) {
        *stats = local;
    }
    return x;
}

Vector LinearSolver::solve_cg(std::span<const double> rhs, SolveStats& stats) const
{
    const std::size_t n = rhs.size();
    Vector x(n, 0.0);
    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) {
        return x;
    }
    Vector r(rhs.begin(), rhs.end());
    Vector z(n), p(n), q(n);
    precondition(r, z);
    p = z;
    double rz = dot_product(r, z);
    double res = 1.0;
    int it = 0;
    while (it < options_.max_iter) {
        spmv(a_, p, q);
        const double pq = dot_product(p, q);
        if (pq == 0.0 || !std::isfinite(pq)) {
            break;
        }
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        ++it;
        res = norm2(r) / rhs_norm;
        if (res <= options_.tol) {
            res = relative_residual(a_, x, rhs, rhs_norm);
            if (res <= options_.tol) {
                break;
            }
            // Drift between recurrence and true residual: restart from the true one.
            r = spmv(a_, x);
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = rhs[i] - r[i];
            }
        }
        precondition(r, z);
        const double rz_new = dot_product(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    stats.iterations = it;
    stats.relative_residual = relative_residual(a_, x, rhs, rhs_norm);
    if (!(stats.relative_residual <= options_.tol)) {
        throw SolverFailure("CG did not converge: relative residual " + std::to_string(stats.relative_residual) +
                                " after " + std::to_string(it) + " iterations",
                            stats.relative_residual, it);
    }
    return x;
}

Vector LinearSolver::solve_bicgstab(std::span<const double> rhs, SolveStats& stats) const
{
    const std::size_t n = rhs.size();
    Vector x(n, 0.0);
    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) {
        return x;
    }
    Vector r(rhs.begin(), rhs.end());
    Vector r_hat = r;
    Vector p(n, 0.0), v(n, 0.0), s(n), t(n), p_hat(n), s_hat(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    int it = 0;
    int restarts = 0;
    while (it < options_.max_iter) {
        const double rho_new = dot_product(r_hat, r);
        if (rho_new == 0.0 || omega == 0.0 || !std::isfinite(rho_new)) {
            // Breakdown: restart from the current iterate with a fresh shadow residual.
            if (++restarts > 10) {
                break;
            }
            r = spmv(a_, x);
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = rhs[i] - r[i];
            }
            r_hat = r;
            std::fill(p.begin(), p.end(), 0.0);
            std::fill(v.begin(), v.end(), 0.0);
            rho = alpha = omega = 1.0;
            continue;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        precondition(p, p_hat);
        spmv(a_, p_hat, v);
        const double rv = dot_product(r_hat, v);
        if (rv == 0.0) {
            omega = 0.0;
            continue;
        }
        alpha = rho / rv;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = r[i] - alpha * v[i];
        }
        ++it;
        if (norm2(s) / rhs_norm <= options_.tol) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p_hat[i];
            }
            if (relative_residual(a_, x, rhs, rhs_norm) <= options_.tol) {
                break;
            }
            r = spmv(a_, x);
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = rhs[i] - r[i];
            }
            r_hat = r;
            std::fill(p.begin(), p.end(), 0.0);
            std::fill(v.begin(), v.end(), 0.0);
            rho = alpha = omega = 1.0;
            continue;
        }
        precondition(s, s_hat);
        spmv(a_, s_hat, t);
        const double tt = dot_product(t, t);
        omega = tt == 0.0 ? 0.0 : dot_product(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        if (norm2(r) / rhs_norm <= options_.tol) {
            if (relative_residual(a_, x, rhs, rhs_norm) <= options_.tol) {
                break;
            }
            r = spmv(a_, x);
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = rhs[i] - r[i];
            }
            r_hat = r;
            std::fill(p.begin(), p.end(), 0.0);
            std::fill(v.begin(), v.end(), 0.0);
            rho = alpha = omega = 1.0;
        }
    }
    stats.iterations = it;
    stats.relative_residual = relative_residual(a_, x, rhs, rhs_norm);
    if (!(stats.relative_residual <= options_.tol)) {
        throw SolverFailure("BiCGStab did not converge: relative residual " +
                                std::to_string(stats.relative_residual) + " after " + std::to_string(it) +
                                " iterations",
                            stats.relative_residual, it);
    }
    return x;
}

Vector solve(const CsrMatrix& a, std::span<const double> rhs, const SolverOptions& options, SolveStats* stats)
{
    return LinearSolver(a, options).solve(rhs, stats);
}

} // namespace adr
