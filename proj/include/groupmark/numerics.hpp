#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace groupmark {

/// Row-major dense matrix of finite reals.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> data() const noexcept { return data_; }

    std::vector<double> multiply(std::span<const double> x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Default relative cut-off for `pinv_solve`: singular values below
/// max(rows, cols) * 64 * machine epsilon times the largest one are dropped.
double default_rank_tolerance(std::size_t rows, std::size_t cols);

/// Minimum-norm least-squares solution of Q x = w (x = pinv(Q) w).
///
/// Singular values below `rank_tol * sigma_max` are treated as zero. A
/// negative `rank_tol` selects `default_rank_tolerance`. Throws
/// ErrorKind::Degenerate for an all-zero Q and ErrorKind::Shape when
/// Q.rows() != w.size().
std::vector<double> pinv_solve(const DenseMatrix& q, std::span<const double> w, double rank_tol = -1.0);

struct PowerIterationOptions {
    double tol = 1e-12;
    std::size_t max_iter = 100000;
};

struct Eigenpair {
    std::vector<double> vector;
    double value = 0.0;
    std::size_t iterations = 0;
};

/// Perron vector of a square, entrywise non-negative matrix by power
/// iteration from the uniform vector. The returned vector is non-negative
/// and sums to `total`. An all-zero matrix yields the uniform vector with
/// eigenvalue zero.
///
/// Throws NonConvergenceError when successive sum-normalised iterates still
/// differ by more than `tol` (infinity norm) after `max_iter` steps.
Eigenpair leading_eigenvector(const DenseMatrix& a, double total, PowerIterationOptions options = {});

} // namespace groupmark
