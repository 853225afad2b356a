#include "groupmark/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "groupmark/error.hpp"

namespace groupmark {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorKind::Shape, "matrix data length does not equal rows * cols");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::Parameter, "matrix entries must be finite");
        }
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) {
        throw Error(ErrorKind::Shape, "matrix-vector dimension mismatch");
    }
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) {
            acc += data_[r * cols_ + c] * x[c];
        }
        y[r] = acc;
    }
    return y;
}

double default_rank_tolerance(std::size_t rows, std::size_t cols) {
    return static_cast<double>(std::max(rows, cols)) * 64.0 * std::numeric_limits<double>::epsilon();
}

std::vector<double> pinv_solve(const DenseMatrix& q, std::span<const double> w, double rank_tol) {
    if (q.rows() != w.size()) {
        throw Error(ErrorKind::Shape, "pinv_solve: Q has " + std::to_string(q.rows()) +
                                          " rows but w has " + std::to_string(w.size()) + " entries");
    }
    if (q.cols() == 0 || std::all_of(q.data().begin(), q.data().end(), [](double v) { return v == 0.0; })) {
        throw Error(ErrorKind::Degenerate, "pinv_solve: Q is all zero");
    }
    if (rank_tol < 0.0) {
        rank_tol = default_rank_tolerance(q.rows(), q.cols());
    }

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> qm(q.data().data(), static_cast<Eigen::Index>(q.rows()),
                                        static_cast<Eigen::Index>(q.cols()));
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(qm, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double cutoff = rank_tol * sigma(0);

    Eigen::VectorXd coeff = svd.matrixU().transpose() * wv;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        coeff(k) = sigma(k) > cutoff ? coeff(k) / sigma(k) : 0.0;
    }
    const Eigen::VectorXd x = svd.matrixV() * coeff;
    return {x.data(), x.data() + x.size()};
}

Eigenpair leading_eigenvector(const DenseMatrix& a, double total, PowerIterationOptions options) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) {
        throw Error(ErrorKind::Shape, "leading_eigenvector: matrix must be square and non-empty");
    }
    for (double v : a.data()) {
        if (v < 0.0) {
            throw Error(ErrorKind::Domain, "leading_eigenvector: matrix must be entrywise non-negative");
        }
    }

    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    Eigenpair result;

    if (std::all_of(a.data().begin(), a.data().end(), [](double x) { return x == 0.0; })) {
        for (auto& x : v) {
            x *= total;
        }
        result.vector = std::move(v);
        return result;
    }

    if (options.max_iter == 0) {
        throw NonConvergenceError(0, std::numeric_limits<double>::infinity());
    }
    double residual = 0.0;
    for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
        std::vector<double> next = a.multiply(v);
        double sum = 0.0;
        for (double x : next) {
            sum += x;
        }
        if (sum <= 0.0) {
            // The iterate fell into the null space; no Perron direction is reachable.
            throw NonConvergenceError(iter, residual);
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= sum;
            residual = std::max(residual, std::abs(next[i] - v[i]));
        }
        v = std::move(next);
        // With v summing to one, sum(A v_prev) is the Rayleigh-style eigenvalue estimate.
        result.value = sum;
        if (residual < options.tol) {
            result.iterations = iter;
            break;
        }
        if (iter == options.max_iter) {
            throw NonConvergenceError(iter, residual);
        }
    }

    const std::vector<double> av = a.multiply(v);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += av[i] * v[i];
        den += v[i] * v[i];
    }
    result.value = num / den;

    for (auto& x : v) {
        x = std::max(0.0, x) * total;
    }
    result.vector = std::move(v);
    return result;
}

} // namespace groupmark
