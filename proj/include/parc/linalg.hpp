#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "parc/errors.hpp"

namespace parc {

/// Dense row-major matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool all_finite() const noexcept;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// A = X^T X + lambda I. The `_serial` variant is the reference
/// implementation; the parallel kernel splits output rows across threads and
/// accumulates each entry in the same order, so both produce bit-identical
/// results for any thread count.
Matrix gram_regularized_serial(const Matrix& x, double lambda);
Matrix gram_regularized(const Matrix& x, double lambda, int num_threads = 0);

/// In-place lower Cholesky factorization of a symmetric positive definite
/// matrix (upper triangle ignored). Throws DegenerateError if a pivot is not
/// strictly positive. Row updates within a column run in parallel; per-entry
/// accumulation order is fixed, so results do not depend on thread count.
void cholesky_factor(Matrix& a, int num_threads = 0);

/// Solve L L^T x = b given the factized lower triangle.
std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b);

/// Convenience: solve (X^T X + lambda I) w = rhs.
std::vector<double> spd_solve(Matrix a, std::span<const double> b, int num_threads = 0);

/// y = X w
std::vector<double> matvec(const Matrix& x, std::span<const double> w);

/// y = X^T v
std::vector<double> matvec_transposed(const Matrix& x, std::span<const double> v);

}  // namespace parc
