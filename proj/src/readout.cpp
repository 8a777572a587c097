#include "parc/readout.hpp"

#include <cmath>

namespace parc {

std::vector<double> make_targets(const NormalizedSeries& series) {
    if (series.values.size() < 2)
        throw InsufficientDataError("make_targets: need at least 2 symbols");
    return {series.values.begin() + 1, series.values.end()};
}

SupervisedSplit split(const Matrix& features, std::span<const double> targets,
                      const SplitSpec& spec) {
    spec.validate();
    if (features.rows() != targets.size())
        throw InvalidStateError("split: feature/target row mismatch");
    if (spec.washout >= targets.size())
        throw InsufficientDataError("split: washout leaves no rows");

    const std::size_t n = targets.size() - spec.washout;
    const auto n_train = static_cast<std::size_t>(spec.train_fraction * static_cast<double>(n));
    const std::size_t n_test = n - n_train;
    if (n_train == 0 || n_test == 0)
        throw InsufficientDataError("split: empty train or test partition");

    SupervisedSplit out;
    out.x_train = Matrix(n_train, features.cols());
    out.x_test = Matrix(n_test, features.cols());
    out.y_train.resize(n_train);
    out.y_test.resize(n_test);
    for (std::size_t i = 0; i < n_train; ++i) {
        const std::size_t r = spec.washout + i;
        std::copy(features.row(r), features.row(r) + features.cols(), out.x_train.row(i));
        out.y_train[i] = targets[r];
    }
    for (std::size_t i = 0; i < n_test; ++i) {
        const std::size_t r = spec.washout + n_train + i;
        std::copy(features.row(r), features.row(r) + features.cols(), out.x_test.row(i));
        out.y_test[i] = targets[r];
    }
    return out;
}

RidgeModel ridge_fit(const Matrix& x, std::span<const double> y, double lambda, int num_threads) {
    if (!(lambda > 0.0)) throw InvalidStateError("ridge_fit: lambda must be > 0");
    if (x.rows() != y.size()) throw InvalidStateError("ridge_fit: row/target mismatch");
    if (!x.all_finite()) throw InvalidStateError("ridge_fit: non-finite feature entries");
    for (double v : y)
        if (!std::isfinite(v)) throw InvalidStateError("ridge_fit: non-finite target");

    const Matrix a = gram_regularized(x, lambda, num_threads);
    const std::vector<double> rhs = matvec_transposed(x, y);
    RidgeModel model;
    model.lambda = lambda;
    model.weights = spd_solve(a, rhs, num_threads);
    return model;
}

std::vector<double> predict(const RidgeModel& model, const Matrix& x) {
    if (x.cols() != model.weights.size())
        throw InvalidStateError("predict: feature width does not match weights");
    return matvec(x, model.weights);
}

double nmse(std::span<const double> truth, std::span<const double> prediction) {
    if (truth.size() != prediction.size()) throw InvalidStateError("nmse: length mismatch");
    if (truth.size() < 2) throw InsufficientDataError("nmse: need at least 2 samples");
    double mean = 0.0;
    for (double v : truth) mean += v;
    mean /= static_cast<double>(truth.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double e = truth[i] - prediction[i];
        const double d = truth[i] - mean;
        num += e * e;
        den += d * d;
    }
    if (!(den > 0.0)) throw DegenerateError("nmse: constant truth signal");
    return num / den;
}

Matrix with_intercept(const Matrix& x) {
    Matrix out(x.rows(), x.cols() + 1);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::copy(x.row(i), x.row(i) + x.cols(), out.row(i));
        out(i, x.cols()) = 1.0;
    }
    return out;
}

}  // namespace parc
