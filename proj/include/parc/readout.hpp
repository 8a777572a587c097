#pragma once

#include <span>
#include <vector>

#include "parc/benchmarks.hpp"
#include "parc/features.hpp"
#include "parc/linalg.hpp"

namespace parc {

struct SplitSpec {
    std::size_t washout = 200;
    double train_fraction = 0.8;

    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0))
            throw ConfigError("SplitSpec: train_fraction must lie in (0,1)");
    }
};

/// One-step-ahead targets y(n) = s(n+1); the last symbol has no target, so
/// the returned vector has length series-1 and callers drop the last feature
/// row to align.
std::vector<double> make_targets(const NormalizedSeries& series);

struct SupervisedSplit {
    Matrix x_train, x_test;
    std::vector<double> y_train, y_test;
};

/// Drop the first `washout` rows, then split chronologically, train first.
SupervisedSplit split(const Matrix& features, std::span<const double> targets,
                      const SplitSpec& spec);

struct RidgeModel {
    std::vector<double> weights;
    double lambda = 1e-3;
    PreprocessState preprocess_state;  // statistics in effect at fit time
};

/// Closed-form ridge: solve (X^T X + lambda I) w = X^T y via Cholesky.
/// X is expected to be standardized (plus optional intercept column).
RidgeModel ridge_fit(const Matrix& x, std::span<const double> y, double lambda,
                     int num_threads = 0);

std::vector<double> predict(const RidgeModel& model, const Matrix& x);

/// sum((s - shat)^2) / sum((s - mean(s))^2)
double nmse(std::span<const double> truth, std::span<const double> prediction);

/// Append a constant all-ones column (absorbs the target mean; the feature
/// columns are zero-mean after standardization but the targets are not
/// centered).
Matrix with_intercept(const Matrix& x);

}  // namespace parc
