#pragma once

#include <cstdint>

#include "ensbench/core.hpp"

namespace ensbench::kernel {

enum class KernelKind { linear, rbf, polynomial };

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double gamma = -1.0;  // <= 0 means "scale": 1 / (n_features * feature_variance)
    int degree = 3;
    double coef0 = 1.0;
};

/// Dense Gram matrix k(a_i, b_j). `gamma_resolved` must be positive for
/// rbf/polynomial; resolve_gamma() applies the "scale" convention.
Matrix gram(const KernelSpec& spec, double gamma_resolved, const Matrix& a, const Matrix& b);
double resolve_gamma(const KernelSpec& spec, const Matrix& features);

enum class KernelVariant { kernel_ridge, svr };

struct KernelModel : public FittedRegressor {
    Vector dual_coefficients;  // one per support row
    Matrix support_rows;
    double intercept = 0.0;
    KernelSpec kernel;
    double gamma_resolved = 0.0;
    KernelVariant variant = KernelVariant::kernel_ridge;
    bool converged = true;
    int iterations = 0;
    // svr diagnostic: the full (alpha, alpha*) vector of length 2n
    Vector dual_alphas;

    Vector predict(const Matrix& features) const override;
    int n_features() const override { return static_cast<int>(support_rows.cols()); }
};

KernelModel fit_kernel_ridge(double penalty, const KernelSpec& kernel, const Matrix& features,
                             const Vector& target);

struct SvrSpec {
    double C = 1.0;
    double epsilon = 0.1;
    KernelSpec kernel{KernelKind::rbf};
    double tol = 1e-3;
    // iteration cap = iter_cap_factor * n_samples
    int iter_cap_factor = 100;
};

KernelModel fit_svr(const SvrSpec& spec, const Matrix& features, const Vector& target);

/// Dual objective value 0.5 a'Qa + p'a of an epsilon-SVR solution given as
/// the 2n vector (alpha, alpha*); shared by the solver and its QP oracle.
double svr_dual_objective(const SvrSpec& spec, const Matrix& features, const Vector& target,
                          const Vector& alphas);

}  // namespace ensbench::kernel
