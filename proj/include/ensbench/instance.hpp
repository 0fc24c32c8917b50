#pragma once

#include <cstdint>

#include "ensbench/core.hpp"

namespace ensbench::instance {

enum class KnnWeighting { uniform, inverse_distance };

struct KnnSpec {
    int k = 5;
    KnnWeighting weighting = KnnWeighting::uniform;
};

class KnnModel : public FittedRegressor {
public:
    KnnSpec spec;
    Matrix train_features;
    Vector train_target;

    Vector predict(const Matrix& features) const override;
    int n_features() const override { return static_cast<int>(train_features.cols()); }
};

KnnModel fit_knn(const KnnSpec& spec, const Matrix& features, const Vector& target);

enum class Activation { relu, tanh, logistic };

struct MlpSpec {
    std::vector<int> hidden_layers{100};
    Activation activation = Activation::relu;
    double step_size = 1e-3;
    double l2_penalty = 1e-4;
    int max_iterations = 200;
    int batch_size = 200;  // clamped to n_samples at fit time
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;
};

/// Layer weights and biases; kept public so the finite-difference gradient
/// oracle can address parameters directly.
struct MlpParams {
    std::vector<Matrix> weights;  // weights[l]: fan_in x fan_out
    std::vector<Vector> biases;
};

class MlpModel : public FittedRegressor {
public:
    MlpSpec spec;
    MlpParams params;
    bool converged = false;
    std::vector<double> loss_history;  // per-epoch training objective

    Vector predict(const Matrix& features) const override;
    int n_features() const override {
        return static_cast<int>(params.weights.front().rows());
    }
};

MlpModel fit_mlp(const MlpSpec& spec, const Matrix& features, const Vector& target);

/// Objective (0.5 * MSE + 0.5 * l2_penalty * ||W||^2 / n) and its gradient on
/// the given batch. Gradient output mirrors the parameter structure.
double mlp_loss_and_gradient(const MlpSpec& spec, const MlpParams& params, const Matrix& features,
                             const Vector& target, MlpParams* gradient);

MlpParams mlp_init_params(const MlpSpec& spec, int n_features, std::uint64_t seed);

}  // namespace ensbench::instance
