#pragma once

#include <cstdint>

#include "ensbench/core.hpp"

namespace ensbench::linear {

enum class Variant {
    ridge,
    lasso,
    elastic_net,
    lasso_lars,
    omp,
    bayesian_ridge,
    ard,
    passive_aggressive,
    huber,
    theil_sen,
};

struct LinearSpec {
    Variant variant = Variant::ridge;

    double penalty = 1.0;    // ridge / lasso / elastic_net / lasso_lars alpha
    double l1_ratio = 0.5;   // elastic_net mixing
    double tol = 1e-4;       // coordinate-descent stopping tolerance
    int max_iter = 1000;

    int omp_atoms = 0;  // 0 = ceil(0.10 * n_features)

    // bayesian_ridge / ard gamma hyperpriors and the ARD pruning threshold
    double bayes_alpha1 = 1e-6;
    double bayes_alpha2 = 1e-6;
    double bayes_lambda1 = 1e-6;
    double bayes_lambda2 = 1e-6;
    int bayes_max_iter = 300;
    double bayes_tol = 1e-3;
    double ard_prune_threshold = 1e4;

    double pa_C = 1.0;
    double pa_epsilon = 0.1;
    int pa_max_epochs = 1000;
    double pa_tol = 1e-3;

    double huber_threshold = 1.35;
    double huber_l2 = 1e-4;

    int theilsen_max_subpopulation = 10000;

    std::uint64_t seed = 0;  // stochastic variants only

    static LinearSpec defaults(Variant variant);
    void validate() const;
};

struct LinearModel : public FittedRegressor {
    Vector coefficients;
    double intercept = 0.0;
    Variant variant = Variant::ridge;

    struct Diagnostics {
        int iterations = 0;
        bool converged = true;
        // Preprocessing applied before fitting, so tests can reconstruct the
        // internal standardized frame.
        Vector feature_mean;
        Vector feature_scale;  // ones when the variant only centers
        double target_mean = 0.0;
        // Variant extras: posterior precisions for bayesian_ridge / ard.
        double noise_precision = 0.0;
        Vector weight_precisions;
    } diagnostics;

    Vector predict(const Matrix& features) const override;
    int n_features() const override { return static_cast<int>(coefficients.size()); }
};

LinearModel fit_linear(const LinearSpec& spec, const Matrix& features, const Vector& target);

/// Plain least squares via column-pivoted QR (internal building block, also
/// used by theil_sen subsets). Returns coefficients with intercept appended
/// handled by the caller's design matrix.
Vector solve_least_squares(const Matrix& design, const Vector& target);

}  // namespace ensbench::linear
