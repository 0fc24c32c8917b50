#include "ensbench/linear.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ensbench::linear {

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    const std::size_t n = values.size();
    std::nth_element(values.begin(), values.begin() + n / 2, values.end());
    double hi = values[n / 2];
    if (n % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + n / 2 - 1, values.end());
    return 0.5 * (values[n / 2 - 1] + hi);
}

struct Preprocessed {
    Matrix x;           // centered (and possibly scaled)
    Vector y;           // centered target
    Vector mean;
    Vector scale;       // ones when not scaling
    double target_mean = 0.0;
};

Preprocessed preprocess(const Matrix& features, const Vector& target, bool scale) {
    Preprocessed p;
    p.mean = features.colwise().mean();
    p.target_mean = target.mean();
    p.x = features.rowwise() - p.mean.transpose();
    p.y = target.array() - p.target_mean;
    p.scale = Vector::Ones(features.cols());
    if (scale) {
        const double n = static_cast<double>(features.rows());
        for (Eigen::Index j = 0; j < p.x.cols(); ++j) {
            const double s = std::sqrt(p.x.col(j).squaredNorm() / n);
            if (s > 0.0) {
                p.scale[j] = s;
                p.x.col(j) /= s;
            } else {
                p.x.col(j).setZero();  // constant column; coefficient stays 0
            }
        }
    }
    return p;
}

void finish(LinearModel& model, const Preprocessed& p, const Vector& scaled_coef) {
    model.coefficients = scaled_coef.cwiseQuotient(p.scale);
    model.intercept = p.target_mean - p.mean.dot(model.coefficients);
    model.diagnostics.feature_mean = p.mean;
    model.diagnostics.feature_scale = p.scale;
    model.diagnostics.target_mean = p.target_mean;
}

Vector ridge_solve(const Matrix& xc, const Vector& yc, double penalty) {
    const Eigen::Index n = xc.rows();
    const Eigen::Index d = xc.cols();
    if (d <= n) {
        Matrix a = xc.transpose() * xc;
        a.diagonal().array() += penalty;
        return Eigen::LDLT<Matrix>(a).solve(xc.transpose() * yc);
    }
    Matrix a = xc * xc.transpose();
    a.diagonal().array() += penalty;
    return xc.transpose() * Eigen::LDLT<Matrix>(a).solve(yc);
}

void fit_ridge(const LinearSpec& spec, const Matrix& features, const Vector& target,
               LinearModel& model) {
    Preprocessed p = preprocess(features, target, false);
    finish(model, p, ridge_solve(p.x, p.y, spec.penalty));
}

// Cyclic coordinate descent on
//   1/(2n) ||y - X v||^2 + alpha*l1_ratio*||v||_1 + alpha*(1-l1_ratio)/2*||v||^2
void fit_coordinate_descent(const LinearSpec& spec, const Matrix& features, const Vector& target,
                            LinearModel& model) {
    const double l1_ratio = spec.variant == Variant::lasso ? 1.0 : spec.l1_ratio;
    Preprocessed p = preprocess(features, target, true);
    const double n = static_cast<double>(p.x.rows());
    const Eigen::Index d = p.x.cols();
    const double l1 = spec.penalty * l1_ratio;
    const double l2 = spec.penalty * (1.0 - l1_ratio);

    Vector col_sq(d);
    for (Eigen::Index j = 0; j < d; ++j) col_sq[j] = p.x.col(j).squaredNorm() / n;

    Vector v = Vector::Zero(d);
    Vector r = p.y;
    bool converged = false;
    int sweep = 0;
    for (; sweep < spec.max_iter; ++sweep) {
        double max_change = 0.0;
        double max_coef = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (col_sq[j] <= 0.0) continue;
            const double rho = p.x.col(j).dot(r) / n + col_sq[j] * v[j];
            const double vnew = soft_threshold(rho, l1) / (col_sq[j] + l2);
            if (vnew != v[j]) {
                r += p.x.col(j) * (v[j] - vnew);
                max_change = std::max(max_change, std::abs(vnew - v[j]));
                v[j] = vnew;
            }
            max_coef = std::max(max_coef, std::abs(v[j]));
        }
        if (max_change <= spec.tol * std::max(1.0, max_coef)) {
            converged = true;
            break;
        }
    }
    model.diagnostics.iterations = sweep + 1;
    model.diagnostics.converged = converged;
    finish(model, p, v);
}

// LARS homotopy with the lasso modification, truncated at the penalty level.
// Same objective as coordinate descent, so the two solvers agree.
void fit_lasso_lars(const LinearSpec& spec, const Matrix& features, const Vector& target,
                    LinearModel& model) {
    Preprocessed p = preprocess(features, target, true);
    const double n = static_cast<double>(p.x.rows());
    const Eigen::Index d = p.x.cols();
    const double alpha = spec.penalty;

    Vector v = Vector::Zero(d);
    std::vector<int> active;
    std::vector<char> in_active(d, 0);
    const int cap = 8 * static_cast<int>(std::min<Eigen::Index>(p.x.rows(), d)) + 100;
    bool converged = true;
    int iter = 0;

    Vector c = p.x.transpose() * p.y / n;
    double lambda_cur = c.cwiseAbs().maxCoeff();
    if (lambda_cur > alpha) {
        int j0 = 0;
        c.cwiseAbs().maxCoeff(&j0);
        active.push_back(j0);
        in_active[j0] = 1;
    }

    while (lambda_cur > alpha + 1e-15 && !active.empty()) {
        if (++iter > cap) {
            converged = false;
            break;
        }
        const int k = static_cast<int>(active.size());
        Matrix g(k, k);
        Vector s(k);
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b)
                g(a, b) = p.x.col(active[a]).dot(p.x.col(active[b])) / n;
            s[a] = c[active[a]] >= 0.0 ? 1.0 : -1.0;
        }
        Eigen::LDLT<Matrix> ldlt(g);
        if (ldlt.info() != Eigen::Success) {
            converged = false;
            break;
        }
        Vector dir = ldlt.solve(s);

        // correlation drift of every column along the direction
        Vector xd = Vector::Zero(p.x.rows());
        for (int a = 0; a < k; ++a) xd += p.x.col(active[a]) * dir[a];
        Vector drift = p.x.transpose() * xd / n;  // drift on active columns == sign

        double t_best = lambda_cur - alpha;  // stop event
        int join = -1;
        int drop = -1;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (in_active[j]) continue;
            const double den1 = 1.0 - drift[j];
            const double den2 = 1.0 + drift[j];
            if (std::abs(den1) > 1e-12) {
                const double t = (lambda_cur - c[j]) / den1;
                if (t > 1e-12 && t < t_best - 1e-15) {
                    t_best = t;
                    join = static_cast<int>(j);
                    drop = -1;
                }
            }
            if (std::abs(den2) > 1e-12) {
                const double t = (lambda_cur + c[j]) / den2;
                if (t > 1e-12 && t < t_best - 1e-15) {
                    t_best = t;
                    join = static_cast<int>(j);
                    drop = -1;
                }
            }
        }
        for (int a = 0; a < k; ++a) {
            if (std::abs(dir[a]) > 1e-15) {
                const double t = -v[active[a]] / dir[a];
                if (t > 1e-12 && t < t_best - 1e-15) {
                    t_best = t;
                    drop = a;
                    join = -1;
                }
            }
        }

        for (int a = 0; a < k; ++a) v[active[a]] += t_best * dir[a];
        c -= t_best * drift;
        lambda_cur -= t_best;

        if (join >= 0) {
            active.push_back(join);
            in_active[join] = 1;
        } else if (drop >= 0) {
            v[active[drop]] = 0.0;
            in_active[active[drop]] = 0;
            active.erase(active.begin() + drop);
        } else {
            break;  // reached the penalty level
        }
    }
    model.diagnostics.iterations = iter;
    model.diagnostics.converged = converged;
    finish(model, p, v);
}

void fit_omp(const LinearSpec& spec, const Matrix& features, const Vector& target,
             LinearModel& model) {
    Preprocessed p = preprocess(features, target, false);
    const Eigen::Index d = p.x.cols();
    int budget = spec.omp_atoms > 0
                     ? spec.omp_atoms
                     : static_cast<int>(std::ceil(0.10 * static_cast<double>(d)));
    budget = std::max(1, std::min<int>(budget, static_cast<int>(std::min(p.x.rows(), d))));

    Vector norms(d);
    for (Eigen::Index j = 0; j < d; ++j) norms[j] = p.x.col(j).norm();

    std::vector<int> active;
    std::vector<char> in_active(d, 0);
    Vector r = p.y;
    Vector v_active;
    for (int step = 0; step < budget; ++step) {
        int best = -1;
        double best_corr = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (in_active[j] || norms[j] <= 0.0) continue;
            const double corr = std::abs(p.x.col(j).dot(r)) / norms[j];
            if (corr > best_corr) {
                best_corr = corr;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) break;
        active.push_back(best);
        in_active[best] = 1;
        Matrix sub(p.x.rows(), active.size());
        for (std::size_t a = 0; a < active.size(); ++a)
            sub.col(static_cast<Eigen::Index>(a)) = p.x.col(active[a]);
        v_active = sub.colPivHouseholderQr().solve(p.y);
        r = p.y - sub * v_active;
        if (r.norm() <= 1e-12 * std::max(1.0, p.y.norm())) break;
    }
    Vector v = Vector::Zero(d);
    for (std::size_t a = 0; a < active.size(); ++a)
        v[active[a]] = v_active[static_cast<Eigen::Index>(a)];
    model.diagnostics.iterations = static_cast<int>(active.size());
    finish(model, p, v);
}

void fit_bayesian_ridge(const LinearSpec& spec, const Matrix& features, const Vector& target,
                        LinearModel& model) {
    Preprocessed p = preprocess(features, target, false);
    const double n = static_cast<double>(p.x.rows());
    const Eigen::Index d = p.x.cols();

    Eigen::BDCSVD<Matrix> svd(p.x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const Vector uty = svd.matrixU().transpose() * p.y;
    const Vector sv2 = sv.array().square();

    const double y_var = p.y.squaredNorm() / n;
    double alpha = 1.0 / (y_var + 1e-7);  // noise precision
    double lambda = 1.0;                  // weight precision

    Vector coef = Vector::Zero(d);
    bool converged = false;
    int iter = 0;
    for (; iter < spec.bayes_max_iter; ++iter) {
        Vector shrink = (sv.array() * alpha / (lambda + alpha * sv2.array())).matrix();
        Vector new_coef = svd.matrixV() * shrink.cwiseProduct(uty);
        const double rss = (p.y - p.x * new_coef).squaredNorm();
        const double gamma = (alpha * sv2.array() / (lambda + alpha * sv2.array())).sum();
        lambda = (gamma + 2.0 * spec.bayes_lambda1) /
                 (new_coef.squaredNorm() + 2.0 * spec.bayes_lambda2);
        alpha = (n - gamma + 2.0 * spec.bayes_alpha1) / (rss + 2.0 * spec.bayes_alpha2);
        if (iter > 0 && (new_coef - coef).cwiseAbs().sum() < spec.bayes_tol) {
            coef = new_coef;
            converged = true;
            break;
        }
        coef = new_coef;
    }
    // final coefficients at the converged precisions
    Vector shrink = (sv.array() * alpha / (lambda + alpha * sv2.array())).matrix();
    coef = svd.matrixV() * shrink.cwiseProduct(uty);

    model.diagnostics.iterations = iter + 1;
    model.diagnostics.converged = converged;
    model.diagnostics.noise_precision = alpha;
    model.diagnostics.weight_precisions = Vector::Constant(d, lambda);
    finish(model, p, coef);
}

void fit_ard(const LinearSpec& spec, const Matrix& features, const Vector& target,
             LinearModel& model) {
    Preprocessed p = preprocess(features, target, false);
    const double n = static_cast<double>(p.x.rows());
    const Eigen::Index d = p.x.cols();

    const double y_var = p.y.squaredNorm() / n;
    double alpha = 1.0 / (y_var + 1e-7);
    Vector lambda = Vector::Ones(d);
    std::vector<char> keep(d, 1);

    Vector coef = Vector::Zero(d);
    bool converged = false;
    int iter = 0;
    for (; iter < spec.bayes_max_iter; ++iter) {
        std::vector<int> kept;
        for (Eigen::Index j = 0; j < d; ++j)
            if (keep[j]) kept.push_back(static_cast<int>(j));
        if (kept.empty()) break;
        const int k = static_cast<int>(kept.size());
        Matrix xk(p.x.rows(), k);
        Vector lam(k);
        for (int a = 0; a < k; ++a) {
            xk.col(a) = p.x.col(kept[a]);
            lam[a] = lambda[kept[a]];
        }

        Vector w(k);
        Vector sigma_diag(k);
        if (k <= p.x.rows()) {
            Matrix a = alpha * (xk.transpose() * xk);
            a.diagonal() += lam;
            Eigen::LDLT<Matrix> ldlt(a);
            w = ldlt.solve(alpha * (xk.transpose() * p.y));
            Matrix sigma = ldlt.solve(Matrix::Identity(k, k));
            sigma_diag = sigma.diagonal();
        } else {
            // Woodbury form for the wide case
            Vector dinv = lam.cwiseInverse();
            Matrix xd = xk * dinv.asDiagonal();               // n x k
            Matrix m = xd * xk.transpose();                   // n x n
            m.diagonal().array() += 1.0 / alpha;
            Eigen::LDLT<Matrix> ldlt(m);
            Vector t = xk.transpose() * p.y;                  // k
            Vector w1 = dinv.cwiseProduct(t);
            Vector sres = ldlt.solve(xk * w1);
            // coef = alpha * Sigma X'y with Sigma = D - D X' M^{-1} X D
            w = alpha * (w1 - dinv.cwiseProduct(xk.transpose() * sres));
            Matrix b = ldlt.solve(xk);                        // n x k
            for (int a2 = 0; a2 < k; ++a2) {
                const double q = xk.col(a2).dot(b.col(a2));
                sigma_diag[a2] = dinv[a2] - dinv[a2] * dinv[a2] * q;
            }
        }

        Vector new_coef = Vector::Zero(d);
        for (int a = 0; a < k; ++a) new_coef[kept[a]] = w[a];
        const double rss = (p.y - p.x * new_coef).squaredNorm();
        double gamma_sum = 0.0;
        for (int a = 0; a < k; ++a) {
            const double gamma_a = 1.0 - lam[a] * sigma_diag[a];
            gamma_sum += gamma_a;
            lambda[kept[a]] = (gamma_a + 2.0 * spec.bayes_lambda1) /
                              (w[a] * w[a] + 2.0 * spec.bayes_lambda2);
        }
        alpha = (n - gamma_sum + 2.0 * spec.bayes_alpha1) / (rss + 2.0 * spec.bayes_alpha2);
        for (Eigen::Index j = 0; j < d; ++j) {
            if (keep[j] && lambda[j] >= spec.ard_prune_threshold) keep[j] = 0;
        }
        const double change = (new_coef - coef).cwiseAbs().sum();
        coef = new_coef;
        if (iter > 0 && change < spec.bayes_tol) {
            converged = true;
            break;
        }
    }
    for (Eigen::Index j = 0; j < d; ++j)
        if (!keep[j]) coef[j] = 0.0;

    model.diagnostics.iterations = iter + 1;
    model.diagnostics.converged = converged;
    model.diagnostics.noise_precision = alpha;
    model.diagnostics.weight_precisions = lambda;
    finish(model, p, coef);
}

void fit_passive_aggressive(const LinearSpec& spec, const Matrix& features, const Vector& target,
                            LinearModel& model) {
    Preprocessed p = preprocess(features, target, false);
    const int n = static_cast<int>(p.x.rows());
    const Eigen::Index d = p.x.cols();
    std::mt19937_64 rng(spec.seed);

    Vector w = Vector::Zero(d);
    double b = 0.0;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    double best_loss = std::numeric_limits<double>::infinity();
    int stall = 0;
    bool converged = false;
    int epoch = 0;
    for (; epoch < spec.pa_max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (int i : order) {
            const double err = p.y[i] - (p.x.row(i).dot(w) + b);
            const double loss = std::max(0.0, std::abs(err) - spec.pa_epsilon);
            epoch_loss += loss;
            if (loss > 0.0) {
                const double sq = p.x.row(i).squaredNorm() + 1.0;
                const double tau = std::min(spec.pa_C, loss / sq);
                const double step = (err > 0.0 ? tau : -tau);
                w += step * p.x.row(i).transpose();
                b += step;
            }
        }
        epoch_loss /= n;
        if (epoch_loss > best_loss - spec.pa_tol) {
            if (++stall >= 5) {
                converged = true;
                break;
            }
        } else {
            stall = 0;
        }
        best_loss = std::min(best_loss, epoch_loss);
    }
    model.diagnostics.iterations = epoch + 1;
    model.diagnostics.converged = converged;
    finish(model, p, w);
}

// IRLS with a MAD-based residual scale; threshold -> infinity recovers
// (l2-regularized) least squares.
void fit_huber(const LinearSpec& spec, const Matrix& features, const Vector& target,
               LinearModel& model) {
    Preprocessed p = preprocess(features, target, false);
    const Eigen::Index n = p.x.rows();
    const Eigen::Index d = p.x.cols();
    // dual form of the weighted ridge step when d > n:
    //   (X'WX + lambda I)^-1 X'Wy = X'S (S X X' S + lambda I)^-1 S y,  S = W^(1/2)
    const bool dual = d > n;
    Matrix gram_xx;
    if (dual) gram_xx = p.x * p.x.transpose();

    Vector w = ridge_solve(p.x, p.y, std::max(spec.huber_l2, 1e-8));
    bool converged = false;
    int iter = 0;
    for (; iter < 100; ++iter) {
        Vector r = p.y - p.x * w;
        std::vector<double> absdev(r.size());
        const double med = median_of(std::vector<double>(r.data(), r.data() + r.size()));
        for (Eigen::Index i = 0; i < r.size(); ++i) absdev[i] = std::abs(r[i] - med);
        double sigma = 1.4826 * median_of(absdev);
        sigma = std::max(sigma, 1e-8 * (1.0 + std::sqrt(p.y.squaredNorm() / p.y.size())));
        const double delta = spec.huber_threshold * sigma;

        Vector omega(r.size());
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            const double a = std::abs(r[i]);
            omega[i] = a <= delta ? 1.0 : delta / a;
        }
        Vector w_new;
        if (dual) {
            const Vector s = omega.cwiseSqrt();
            Matrix a = s.asDiagonal() * gram_xx * s.asDiagonal();
            a.diagonal().array() += spec.huber_l2;
            w_new = p.x.transpose() *
                    (s.asDiagonal() * Eigen::LDLT<Matrix>(a).solve(s.cwiseProduct(p.y)));
        } else {
            Matrix xw = omega.asDiagonal() * p.x;
            Matrix a = p.x.transpose() * xw;
            a.diagonal().array() += spec.huber_l2;
            w_new = Eigen::LDLT<Matrix>(a).solve(xw.transpose() * p.y);
        }
        const double change = (w_new - w).norm();
        w = w_new;
        if (change < 1e-10 * std::max(1.0, w.norm())) {
            converged = true;
            break;
        }
    }
    model.diagnostics.iterations = iter + 1;
    model.diagnostics.converged = converged;
    finish(model, p, w);
}

Vector spatial_median(const std::vector<Vector>& points, double tol, int max_iter) {
    Vector est = Vector::Zero(points.front().size());
    for (const Vector& q : points) est += q;
    est /= static_cast<double>(points.size());
    for (int iter = 0; iter < max_iter; ++iter) {
        Vector num = Vector::Zero(est.size());
        double den = 0.0;
        for (const Vector& q : points) {
            const double dist = std::max((q - est).norm(), 1e-12);
            num += q / dist;
            den += 1.0 / dist;
        }
        Vector next = num / den;
        const double move = (next - est).norm();
        est = next;
        if (move < tol) break;
    }
    return est;
}

void fit_theil_sen(const LinearSpec& spec, const Matrix& features, const Vector& target,
                   LinearModel& model) {
    const int n = static_cast<int>(features.rows());
    const Eigen::Index d = features.cols();
    model.diagnostics.feature_mean = Vector::Zero(d);
    model.diagnostics.feature_scale = Vector::Ones(d);
    model.diagnostics.target_mean = target.mean();

    if (d == 1) {
        // exact median of pairwise slopes
        std::vector<double> slopes;
        slopes.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double dx = features(j, 0) - features(i, 0);
                if (dx != 0.0) slopes.push_back((target[j] - target[i]) / dx);
            }
        }
        double slope = 0.0;
        if (!slopes.empty()) slope = median_of(std::move(slopes));
        std::vector<double> intercepts(n);
        for (int i = 0; i < n; ++i) intercepts[i] = target[i] - slope * features(i, 0);
        model.coefficients = Vector::Constant(1, slope);
        model.intercept = median_of(std::move(intercepts));
        return;
    }

    const int subset = static_cast<int>(std::min<Eigen::Index>(d + 1, n));
    Matrix design(n, d + 1);
    design.leftCols(d) = features;
    design.col(d).setOnes();

    if (subset >= n) {
        Vector full = solve_least_squares(design, target);
        model.coefficients = full.head(d);
        model.intercept = full[d];
        return;
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<Vector> solutions;
    solutions.reserve(spec.theilsen_max_subpopulation);
    Matrix sub(subset, d + 1);
    Vector suby(subset);
    for (int t = 0; t < spec.theilsen_max_subpopulation; ++t) {
        for (int i = 0; i < subset; ++i) {
            std::uniform_int_distribution<int> pick(i, n - 1);
            std::swap(pool[i], pool[pick(rng)]);
            sub.row(i) = design.row(pool[i]);
            suby[i] = target[pool[i]];
        }
        solutions.push_back(solve_least_squares(sub, suby));
    }
    Vector med = spatial_median(solutions, 1e-7, 300);
    model.coefficients = med.head(d);
    model.intercept = med[d];
    model.diagnostics.iterations = static_cast<int>(solutions.size());
}

}  // namespace

LinearSpec LinearSpec::defaults(Variant variant) {
    LinearSpec spec;
    spec.variant = variant;
    switch (variant) {
        case Variant::ridge: spec.penalty = 1.0; break;
        case Variant::lasso:
            spec.penalty = 1.0;
            spec.tol = 1e-4;
            spec.max_iter = 1000;
            break;
        case Variant::elastic_net:
            spec.penalty = 1.0;
            spec.l1_ratio = 0.5;
            break;
        case Variant::lasso_lars: spec.penalty = 1.0; break;
        case Variant::omp: spec.omp_atoms = 0; break;
        case Variant::bayesian_ridge:
        case Variant::ard: break;
        case Variant::passive_aggressive: break;
        case Variant::huber: break;
        case Variant::theil_sen: break;
    }
    return spec;
}

void LinearSpec::validate() const {
    if (penalty < 0.0) throw std::invalid_argument("regularization strength must be >= 0");
    if (l1_ratio < 0.0 || l1_ratio > 1.0)
        throw std::invalid_argument("elastic_net mixing ratio must be in [0,1]");
    if (omp_atoms < 0) throw std::invalid_argument("OMP atom budget must be >= 1 (or 0 = auto)");
    if (huber_threshold <= 1.0) throw std::invalid_argument("Huber threshold must be > 1");
}

Vector LinearModel::predict(const Matrix& features) const {
    check_predict_width(n_features(), features.cols());
    return (features * coefficients).array() + intercept;
}

Vector solve_least_squares(const Matrix& design, const Vector& target) {
    return design.colPivHouseholderQr().solve(target);
}

LinearModel fit_linear(const LinearSpec& spec, const Matrix& features, const Vector& target) {
    spec.validate();
    if (features.rows() < 2) throw std::invalid_argument("fit_linear: need at least 2 samples");
    if (features.rows() != target.size())
        throw std::invalid_argument("fit_linear: shape mismatch");
    if (!features.allFinite() || !target.allFinite())
        throw std::invalid_argument("fit_linear: non-finite input");

    LinearModel model;
    model.variant = spec.variant;
    switch (spec.variant) {
        case Variant::ridge: fit_ridge(spec, features, target, model); break;
        case Variant::lasso:
        case Variant::elastic_net: fit_coordinate_descent(spec, features, target, model); break;
        case Variant::lasso_lars: fit_lasso_lars(spec, features, target, model); break;
        case Variant::omp: fit_omp(spec, features, target, model); break;
        case Variant::bayesian_ridge: fit_bayesian_ridge(spec, features, target, model); break;
        case Variant::ard: fit_ard(spec, features, target, model); break;
        case Variant::passive_aggressive:
            fit_passive_aggressive(spec, features, target, model);
            break;
        case Variant::huber: fit_huber(spec, features, target, model); break;
        case Variant::theil_sen: fit_theil_sen(spec, features, target, model); break;
    }
    if (!model.coefficients.allFinite() || !std::isfinite(model.intercept))
        throw std::runtime_error("fit_linear: produced non-finite model");
    return model;
}

}  // namespace ensbench::linear
