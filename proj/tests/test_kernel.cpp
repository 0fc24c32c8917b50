#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ensbench/kernel.hpp"
#include "ensbench/linear.hpp"

using namespace ensbench;

namespace {

Matrix random_matrix(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = gauss(rng);
    return x;
}

// Projected-gradient solve of the 2n-variable epsilon-SVR dual:
//   min 0.5 a'Qa + p'a  s.t.  0 <= a <= C,  sum_t s_t a_t = 0.
// Projection onto box-and-hyperplane is exact via bisection on the equality
// multiplier; independent of the library's pairwise solver.
Vector qp_oracle(const kernel::SvrSpec& spec, const Matrix& x, const Vector& y) {
    const int n = static_cast<int>(x.rows());
    const double gamma = kernel::resolve_gamma(spec.kernel, x);
    const Matrix k = kernel::gram(spec.kernel, gamma, x, x);
    Matrix q(2 * n, 2 * n);
    q << k, -k, -k, k;
    Vector p(2 * n), s(2 * n);
    for (int t = 0; t < 2 * n; ++t) {
        s[t] = t < n ? 1.0 : -1.0;
        p[t] = spec.epsilon - s[t] * y[t % n];
    }
    const auto project = [&](const Vector& raw) {
        double lo = -1e6, hi = 1e6;
        const auto shifted_sum = [&](double lambda) {
            double acc = 0.0;
            for (int t = 0; t < 2 * n; ++t)
                acc += s[t] * std::clamp(raw[t] - lambda * s[t], 0.0, spec.C);
            return acc;
        };
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (shifted_sum(mid) > 0) lo = mid; else hi = mid;
        }
        const double lambda = 0.5 * (lo + hi);
        Vector out(2 * n);
        for (int t = 0; t < 2 * n; ++t) out[t] = std::clamp(raw[t] - lambda * s[t], 0.0, spec.C);
        return out;
    };
    const double lipschitz =
        Eigen::SelfAdjointEigenSolver<Matrix>(q).eigenvalues().maxCoeff() + 1e-9;
    Vector a = project(Vector::Zero(2 * n));
    for (int it = 0; it < 60000; ++it) {
        a = project(a - (1.0 / lipschitz) * (q * a + p));
    }
    return a;
}

}  // namespace

TEST_CASE("gram matrices are symmetric and positive semidefinite") {
    for (kernel::KernelKind kind :
         {kernel::KernelKind::linear, kernel::KernelKind::rbf, kernel::KernelKind::polynomial}) {
        kernel::KernelSpec spec;
        spec.kind = kind;
        Matrix x = random_matrix(15, 4, 1 + static_cast<int>(kind));
        const double gamma = kernel::resolve_gamma(spec, x);
        Matrix k = kernel::gram(spec, gamma, x, x);
        CHECK(k == k.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("the scale gamma convention uses feature count and variance") {
    Matrix x = random_matrix(30, 5, 3);
    kernel::KernelSpec spec;
    spec.kind = kernel::KernelKind::rbf;
    spec.gamma = -1.0;
    double var = 0.0;
    const double mean = x.mean();
    var = (x.array() - mean).square().mean();
    CHECK(kernel::resolve_gamma(spec, x) == doctest::Approx(1.0 / (5 * var)).epsilon(1e-12));
    spec.gamma = 0.7;
    CHECK(kernel::resolve_gamma(spec, x) == 0.7);
}

TEST_CASE("linear-kernel ridge matches primal ridge on centered data") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Matrix x = random_matrix(25, 4, 10 + seed);
        for (int j = 0; j < 4; ++j) x.col(j).array() -= x.col(j).mean();
        Vector y = random_matrix(25, 1, 20 + seed).col(0);
        y.array() -= y.mean();
        kernel::KernelModel km =
            kernel::fit_kernel_ridge(1.0, kernel::KernelSpec{kernel::KernelKind::linear}, x, y);
        // primal oracle: ridge objective ||y-Xw||^2 + p||w||^2 at the same p
        linear::LinearSpec spec = linear::LinearSpec::defaults(linear::Variant::ridge);
        spec.penalty = 1.0;
        linear::LinearModel pm = linear::fit_linear(spec, x, y);
        Matrix probe = random_matrix(8, 4, 30 + seed);
        CHECK((km.predict(probe) - pm.predict(probe)).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("kernel ridge on a single rbf point reproduces its target") {
    Matrix x(1, 3);
    x << 0.5, -1.0, 2.0;
    Vector y(1);
    y << 4.25;
    kernel::KernelSpec spec;
    spec.kind = kernel::KernelKind::rbf;
    spec.gamma = 0.3;
    kernel::KernelModel model = kernel::fit_kernel_ridge(1e-12, spec, x, y);
    CHECK(model.predict(x)[0] == doctest::Approx(4.25).epsilon(1e-9));
}

TEST_CASE("a dominating ridge penalty drives predictions to zero") {
    Matrix x = random_matrix(20, 3, 40);
    Vector y = random_matrix(20, 1, 41).col(0);
    y.array() -= y.mean();
    kernel::KernelModel model =
        kernel::fit_kernel_ridge(1e9, kernel::KernelSpec{kernel::KernelKind::linear}, x, y);
    CHECK(model.predict(x).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("kernel ridge refuses a singular system at zero penalty") {
    Matrix x(3, 2);
    x << 1, 2, 1, 2, 3, 4;  // duplicate rows make the linear Gram singular
    Vector y(3);
    y << 1, 2, 3;
    CHECK_THROWS_AS(
        kernel::fit_kernel_ridge(0.0, kernel::KernelSpec{kernel::KernelKind::linear}, x, y),
        std::runtime_error);
}

TEST_CASE("svr on a constant target keeps everything inside the tube") {
    Matrix x = random_matrix(12, 3, 50);
    Vector y = Vector::Constant(12, 3.75);
    kernel::SvrSpec spec;
    kernel::KernelModel model = kernel::fit_svr(spec, x, y);
    CHECK(model.intercept == doctest::Approx(3.75).epsilon(1e-9));
    CHECK(model.support_rows.rows() == 0);
    CHECK(model.predict(x) == Vector::Constant(12, model.intercept));
}

TEST_CASE("svr training residuals respect the epsilon tube on easy data") {
    Matrix x = random_matrix(20, 1, 51);
    Vector y = 0.05 * x.col(0) + Vector::Constant(20, 1.0);  // range well under epsilon*C reach
    kernel::SvrSpec spec;
    spec.kernel.kind = kernel::KernelKind::linear;
    kernel::KernelModel model = kernel::fit_svr(spec, x, y);
    CHECK((model.predict(x) - y).cwiseAbs().maxCoeff() <= spec.epsilon + 1e-6);
}

TEST_CASE("svr dual solution is feasible and matches a QP oracle") {
    std::mt19937_64 rng(60);
    std::uniform_int_distribution<int> size(4, 12);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = size(rng);
        Matrix x = random_matrix(n, 3, 100 + trial);
        Vector y = random_matrix(n, 1, 200 + trial).col(0) * 2.0;
        kernel::SvrSpec spec;
        kernel::KernelModel model = kernel::fit_svr(spec, x, y);

        REQUIRE(model.dual_alphas.size() == 2 * n);
        const Vector& a = model.dual_alphas;
        CHECK(a.minCoeff() >= -1e-8);
        CHECK(a.maxCoeff() <= spec.C + 1e-8);
        double balance = 0.0;
        for (int t = 0; t < 2 * n; ++t) balance += (t < n ? 1.0 : -1.0) * a[t];
        CHECK(std::abs(balance) <= 1e-8);

        const double solver_obj = kernel::svr_dual_objective(spec, x, y, a);
        const double oracle_obj =
            kernel::svr_dual_objective(spec, x, y, qp_oracle(spec, x, y));
        CHECK(solver_obj <= oracle_obj + 1e-4 * std::max(1.0, std::abs(oracle_obj)));
        CHECK(std::abs(solver_obj - oracle_obj) <= 1e-4 * std::max(1.0, std::abs(oracle_obj)));
    }
}

TEST_CASE("svr support rows carry the nonzero dual coefficients") {
    Matrix x = random_matrix(15, 2, 70);
    Vector y = x.col(0) * 3.0;
    kernel::SvrSpec spec;
    kernel::KernelModel model = kernel::fit_svr(spec, x, y);
    CHECK(model.support_rows.rows() == model.dual_coefficients.size());
    for (Eigen::Index i = 0; i < model.dual_coefficients.size(); ++i) {
        CHECK(std::abs(model.dual_coefficients[i]) > 0.0);
        CHECK(std::abs(model.dual_coefficients[i]) <= spec.C + 1e-8);
    }
}

TEST_CASE("prediction rejects a feature-width mismatch") {
    Matrix x = random_matrix(10, 3, 80);
    Vector y = random_matrix(10, 1, 81).col(0);
    kernel::KernelModel model =
        kernel::fit_kernel_ridge(1.0, kernel::KernelSpec{kernel::KernelKind::linear}, x, y);
    Matrix wrong = random_matrix(4, 5, 82);
    CHECK_THROWS_AS(model.predict(wrong), std::invalid_argument);
}
