#include "parc/linalg.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parc {

namespace {

int resolve_threads(int requested) {
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

}  // namespace

bool Matrix::all_finite() const noexcept {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix gram_regularized_serial(const Matrix& x, double lambda) {
    const std::size_t n = x.rows(), d = x.cols();
    Matrix a(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double* ai = a.row(i);
        for (std::size_t r = 0; r < n; ++r) {
            const double* xr = x.row(r);
            const double xi = xr[i];
            for (std::size_t j = i; j < d; ++j) ai[j] += xi * xr[j];
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        a(i, i) += lambda;
        for (std::size_t j = i + 1; j < d; ++j) a(j, i) = a(i, j);
    }
    return a;
}

Matrix gram_regularized(const Matrix& x, double lambda, int num_threads) {
    const std::size_t n = x.rows(), d = x.cols();
    Matrix a(d, d, 0.0);
    const int nt = resolve_threads(num_threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(nt)
#endif
    for (long ii = 0; ii < static_cast<long>(d); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double* ai = a.row(i);
        for (std::size_t r = 0; r < n; ++r) {
            const double* xr = x.row(r);
            const double xi = xr[i];
            for (std::size_t j = i; j < d; ++j) ai[j] += xi * xr[j];
        }
    }
    (void)nt;
    for (std::size_t i = 0; i < d; ++i) {
        a(i, i) += lambda;
        for (std::size_t j = i + 1; j < d; ++j) a(j, i) = a(i, j);
    }
    return a;
}

void cholesky_factor(Matrix& a, int num_threads) {
    const std::size_t d = a.rows();
    if (a.cols() != d) throw InvalidStateError("cholesky_factor: matrix must be square");
    const int nt = resolve_threads(num_threads);
    (void)nt;
    for (std::size_t j = 0; j < d; ++j) {
        double* lj = a.row(j);
        double diag = lj[j];
        for (std::size_t k = 0; k < j; ++k) diag -= lj[k] * lj[k];
        if (!(diag > 0.0))
            throw DegenerateError("cholesky_factor: matrix not positive definite at column " +
                                  std::to_string(j));
        const double ljj = std::sqrt(diag);
        lj[j] = ljj;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
        for (long ii = static_cast<long>(j) + 1; ii < static_cast<long>(d); ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            double* li = a.row(i);
            double s = li[j];
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
            li[j] = s / ljj;
        }
    }
    // zero strict upper triangle so the factor is self-contained
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) a(i, j) = 0.0;
}

std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b) {
    const std::size_t d = l.rows();
    if (b.size() != d) throw InvalidStateError("cholesky_solve: dimension mismatch");
    std::vector<double> y(d);
    for (std::size_t i = 0; i < d; ++i) {
        double s = b[i];
        const double* li = l.row(i);
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
        y[i] = s / li[i];
    }
    std::vector<double> x(d);
    for (std::size_t ii = d; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < d; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

std::vector<double> spd_solve(Matrix a, std::span<const double> b, int num_threads) {
    cholesky_factor(a, num_threads);
    return cholesky_solve(a, b);
}

std::vector<double> matvec(const Matrix& x, std::span<const double> w) {
    if (w.size() != x.cols()) throw InvalidStateError("matvec: dimension mismatch");
    std::vector<double> y(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* xi = x.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) s += xi[j] * w[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec_transposed(const Matrix& x, std::span<const double> v) {
    if (v.size() != x.rows()) throw InvalidStateError("matvec_transposed: dimension mismatch");
    std::vector<double> y(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* xi = x.row(i);
        const double vi = v[i];
        for (std::size_t j = 0; j < x.cols(); ++j) y[j] += vi * xi[j];
    }
    return y;
}

}  // namespace parc
