#include "ensbench/kernel.hpp"

#include <cmath>

namespace ensbench::kernel {

double resolve_gamma(const KernelSpec& spec, const Matrix& features) {
    if (spec.kind == KernelKind::linear) return 0.0;
    if (spec.gamma > 0.0) return spec.gamma;
    // "scale" convention: 1 / (n_features * overall feature variance)
    const double mean = features.mean();
    const double var = (features.array() - mean).square().mean();
    if (var > 0.0) return 1.0 / (static_cast<double>(features.cols()) * var);
    return 1.0 / static_cast<double>(features.cols());
}

namespace {

Matrix gram_impl(const KernelSpec& spec, double gamma_resolved, const Matrix& a, const Matrix& b) {
    switch (spec.kind) {
        case KernelKind::linear: return a * b.transpose();
        case KernelKind::polynomial: {
            Matrix g = gamma_resolved * (a * b.transpose());
            g.array() += spec.coef0;
            return g.array().pow(spec.degree).matrix();
        }
        case KernelKind::rbf: {
            Vector an = a.rowwise().squaredNorm();
            Vector bn = b.rowwise().squaredNorm();
            Matrix g = -2.0 * (a * b.transpose());
            g.colwise() += an;
            g.rowwise() += bn.transpose();
            return (-gamma_resolved * g.array()).exp().matrix();
        }
    }
    throw std::logic_error("gram: unknown kernel kind");
}

}  // namespace

Matrix gram(const KernelSpec& spec, double gamma_resolved, const Matrix& a, const Matrix& b) {
    Matrix g = gram_impl(spec, gamma_resolved, a, b);
    // self-gram must be exactly symmetric; summation order breaks it at ulp level
    if (&a == &b) g = 0.5 * (g + g.transpose()).eval();
    return g;
}

Vector KernelModel::predict(const Matrix& features) const {
    check_predict_width(n_features(), features.cols());
    if (support_rows.rows() == 0) return Vector::Constant(features.rows(), intercept);
    Matrix k = gram(kernel, gamma_resolved, features, support_rows);
    return (k * dual_coefficients).array() + intercept;
}

KernelModel fit_kernel_ridge(double penalty, const KernelSpec& kernel, const Matrix& features,
                             const Vector& target) {
    if (features.rows() != target.size())
        throw std::invalid_argument("fit_kernel_ridge: shape mismatch");
    if (penalty < 0.0) throw std::invalid_argument("fit_kernel_ridge: penalty must be >= 0");

    KernelModel model;
    model.variant = KernelVariant::kernel_ridge;
    model.kernel = kernel;
    model.gamma_resolved = resolve_gamma(kernel, features);
    model.support_rows = features;

    Matrix k = gram(kernel, model.gamma_resolved, features, features);
    k.diagonal().array() += penalty;
    if (penalty <= 0.0) {
        Eigen::FullPivLU<Matrix> lu(k);
        if (!lu.isInvertible())
            throw std::runtime_error("fit_kernel_ridge: singular Gram matrix with zero penalty");
        model.dual_coefficients = lu.solve(target);
    } else {
        model.dual_coefficients = Eigen::LDLT<Matrix>(k).solve(target);
    }
    return model;
}

double svr_dual_objective(const SvrSpec& spec, const Matrix& features, const Vector& target,
                          const Vector& alphas) {
    const int n = static_cast<int>(target.size());
    Matrix k = gram(spec.kernel, resolve_gamma(spec.kernel, features), features, features);
    Vector beta = alphas.head(n) - alphas.tail(n);
    double obj = 0.5 * beta.dot(k * beta);
    for (int i = 0; i < n; ++i) {
        obj += alphas[i] * (spec.epsilon - target[i]);
        obj += alphas[n + i] * (spec.epsilon + target[i]);
    }
    return obj;
}

// Maximal-violating-pair SMO on the 2n-variable epsilon-SVR dual.
KernelModel fit_svr(const SvrSpec& spec, const Matrix& features, const Vector& target) {
    if (features.rows() != target.size()) throw std::invalid_argument("fit_svr: shape mismatch");
    const int n = static_cast<int>(target.size());

    KernelModel model;
    model.variant = KernelVariant::svr;
    model.kernel = spec.kernel;
    model.gamma_resolved = resolve_gamma(spec.kernel, features);

    Matrix k = gram(spec.kernel, model.gamma_resolved, features, features);
    const auto sign_of = [n](int t) { return t < n ? 1.0 : -1.0; };
    const auto row_of = [n](int t) { return t < n ? t : t - n; };

    Vector a = Vector::Zero(2 * n);
    Vector grad(2 * n);  // grad_t = s_t * (K beta)_row + p_t; beta = 0 initially
    for (int t = 0; t < 2 * n; ++t)
        grad[t] = spec.epsilon - sign_of(t) * target[row_of(t)];

    const int cap = spec.iter_cap_factor * n;
    bool converged = false;
    int iter = 0;
    double m_val = 0.0;
    double big_m_val = 0.0;
    for (; iter < cap; ++iter) {
        int i = -1;
        int j = -1;
        m_val = -std::numeric_limits<double>::infinity();
        big_m_val = std::numeric_limits<double>::infinity();
        for (int t = 0; t < 2 * n; ++t) {
            const double s = sign_of(t);
            const double v = -s * grad[t];
            const bool can_up = (s > 0.0 && a[t] < spec.C) || (s < 0.0 && a[t] > 0.0);
            const bool can_down = (s > 0.0 && a[t] > 0.0) || (s < 0.0 && a[t] < spec.C);
            if (can_up && v > m_val) {
                m_val = v;
                i = t;
            }
            if (can_down && v < big_m_val) {
                big_m_val = v;
                j = t;
            }
        }
        if (i < 0 || j < 0 || m_val - big_m_val <= spec.tol) {
            converged = true;
            break;
        }
        const int ri = row_of(i);
        const int rj = row_of(j);
        const double si = sign_of(i);
        const double sj = sign_of(j);
        // feasible direction d_i = s_i, d_j = -s_j keeps sum(s*a) fixed
        const double g = -(m_val - big_m_val);
        double h = k(ri, ri) + k(rj, rj) - 2.0 * k(ri, rj);
        h = std::max(h, 1e-12);
        double lambda = -g / h;
        lambda = std::min(lambda, si > 0.0 ? spec.C - a[i] : a[i]);
        lambda = std::min(lambda, sj > 0.0 ? a[j] : spec.C - a[j]);
        if (lambda <= 0.0) {
            converged = true;  // numerically stuck at the boundary
            break;
        }
        a[i] += lambda * si;
        a[j] -= lambda * sj;
        for (int t = 0; t < 2 * n; ++t)
            grad[t] += lambda * sign_of(t) * (k(row_of(t), ri) - k(row_of(t), rj));
    }
    model.converged = converged;
    model.iterations = iter;
    model.intercept = 0.5 * (m_val + big_m_val);
    if (!std::isfinite(model.intercept)) model.intercept = target.mean();

    model.dual_alphas = a;
    Vector beta = a.head(n) - a.tail(n);
    std::vector<int> support;
    for (int i = 0; i < n; ++i)
        if (std::abs(beta[i]) > 1e-12) support.push_back(i);
    model.support_rows.resize(static_cast<Eigen::Index>(support.size()), features.cols());
    model.dual_coefficients.resize(static_cast<Eigen::Index>(support.size()));
    for (std::size_t s = 0; s < support.size(); ++s) {
        model.support_rows.row(static_cast<Eigen::Index>(s)) = features.row(support[s]);
        model.dual_coefficients[static_cast<Eigen::Index>(s)] = beta[support[s]];
    }
    return model;
}

}  // namespace ensbench::kernel
