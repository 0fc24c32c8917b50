#include "ensbench/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ensbench::instance {

KnnModel fit_knn(const KnnSpec& spec, const Matrix& features, const Vector& target) {
    if (spec.k < 1) throw std::invalid_argument("fit_knn: k must be >= 1");
    if (features.rows() != target.size()) throw std::invalid_argument("fit_knn: shape mismatch");
    if (spec.k > features.rows())
        throw std::invalid_argument("fit_knn: k exceeds training sample count");
    KnnModel model;
    model.spec = spec;
    model.train_features = features;
    model.train_target = target;
    return model;
}

Vector KnnModel::predict(const Matrix& features) const {
    check_predict_width(n_features(), features.cols());
    const int n = static_cast<int>(train_features.rows());
    if (spec.k > n) throw std::invalid_argument("knn predict: k exceeds training sample count");
    Vector out(features.rows());
    std::vector<std::pair<double, int>> dist(n);
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
        for (int i = 0; i < n; ++i) {
            dist[i] = {(train_features.row(i) - features.row(r)).squaredNorm(), i};
        }
        // distance ties include the lower training-row index
        std::partial_sort(dist.begin(), dist.begin() + spec.k, dist.end());
        if (spec.weighting == KnnWeighting::uniform) {
            double acc = 0.0;
            for (int t = 0; t < spec.k; ++t) acc += train_target[dist[t].second];
            out[r] = acc / spec.k;
        } else {
            // exact matches dominate: average the zero-distance targets
            bool exact = false;
            double exact_acc = 0.0;
            int exact_count = 0;
            double num = 0.0;
            double den = 0.0;
            for (int t = 0; t < spec.k; ++t) {
                const double d2 = dist[t].first;
                if (d2 <= 0.0) {
                    exact = true;
                    exact_acc += train_target[dist[t].second];
                    ++exact_count;
                } else {
                    const double w = 1.0 / std::sqrt(d2);
                    num += w * train_target[dist[t].second];
                    den += w;
                }
            }
            out[r] = exact ? exact_acc / exact_count : num / den;
        }
    }
    return out;
}

namespace {

void apply_activation(Activation act, Matrix& z) {
    switch (act) {
        case Activation::relu: z = z.cwiseMax(0.0); break;
        case Activation::tanh: z = z.array().tanh().matrix(); break;
        case Activation::logistic: z = (1.0 / (1.0 + (-z.array()).exp())).matrix(); break;
    }
}

// derivative expressed through the activation output
Matrix activation_grad(Activation act, const Matrix& a) {
    switch (act) {
        case Activation::relu: return (a.array() > 0.0).cast<double>().matrix();
        case Activation::tanh: return (1.0 - a.array().square()).matrix();
        case Activation::logistic: return (a.array() * (1.0 - a.array())).matrix();
    }
    throw std::logic_error("unknown activation");
}

}  // namespace

MlpParams mlp_init_params(const MlpSpec& spec, int n_features, std::uint64_t seed) {
    std::vector<int> sizes;
    sizes.push_back(n_features);
    for (int h : spec.hidden_layers) sizes.push_back(h);
    sizes.push_back(1);

    std::mt19937_64 rng(seed);
    MlpParams params;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l];
        const int fan_out = sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        Matrix w(fan_in, fan_out);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
        Vector b(fan_out);
        for (Eigen::Index j = 0; j < b.size(); ++j) b[j] = dist(rng);
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    return params;
}

double mlp_loss_and_gradient(const MlpSpec& spec, const MlpParams& params, const Matrix& features,
                             const Vector& target, MlpParams* gradient) {
    const std::size_t n_layers = params.weights.size();
    const double n = static_cast<double>(features.rows());

    std::vector<Matrix> activations;  // activations[0] = input
    activations.reserve(n_layers + 1);
    activations.push_back(features);
    for (std::size_t l = 0; l < n_layers; ++l) {
        Matrix z = activations.back() * params.weights[l];
        z.rowwise() += params.biases[l].transpose();
        if (l + 1 < n_layers) apply_activation(spec.activation, z);
        activations.push_back(std::move(z));
    }
    const Vector pred = activations.back().col(0);
    double loss = 0.5 * (pred - target).squaredNorm() / n;
    for (const Matrix& w : params.weights)
        loss += 0.5 * spec.l2_penalty * w.squaredNorm() / n;

    if (gradient) {
        gradient->weights.assign(n_layers, Matrix());
        gradient->biases.assign(n_layers, Vector());
        Matrix delta = (pred - target) / n;  // n x 1
        for (std::size_t l = n_layers; l-- > 0;) {
            gradient->weights[l] =
                activations[l].transpose() * delta + (spec.l2_penalty / n) * params.weights[l];
            gradient->biases[l] = delta.colwise().sum();
            if (l > 0) {
                delta = (delta * params.weights[l].transpose())
                            .cwiseProduct(activation_grad(spec.activation, activations[l]));
            }
        }
    }
    return loss;
}

Vector MlpModel::predict(const Matrix& features) const {
    check_predict_width(n_features(), features.cols());
    Matrix a = features;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        Matrix z = a * params.weights[l];
        z.rowwise() += params.biases[l].transpose();
        if (l + 1 < params.weights.size()) apply_activation(spec.activation, z);
        a = std::move(z);
    }
    return a.col(0);
}

MlpModel fit_mlp(const MlpSpec& spec, const Matrix& features, const Vector& target) {
    if (spec.hidden_layers.empty())
        throw std::invalid_argument("fit_mlp: at least one hidden layer required");
    if (spec.step_size <= 0.0) throw std::invalid_argument("fit_mlp: step_size must be > 0");
    if (features.rows() != target.size()) throw std::invalid_argument("fit_mlp: shape mismatch");

    const int n = static_cast<int>(features.rows());
    const int batch = std::min(spec.batch_size, n);

    MlpModel model;
    model.spec = spec;
    model.params = mlp_init_params(spec, static_cast<int>(features.cols()), spec.seed);

    // Adam state mirrors the parameter structure
    MlpParams m, v;
    for (std::size_t l = 0; l < model.params.weights.size(); ++l) {
        m.weights.push_back(Matrix::Zero(model.params.weights[l].rows(),
                                         model.params.weights[l].cols()));
        m.biases.push_back(Vector::Zero(model.params.biases[l].size()));
        v.weights.push_back(m.weights.back());
        v.biases.push_back(m.biases.back());
    }

    std::mt19937_64 rng(derive_seed(spec.seed, 0x5487));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    long step = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    int stall = 0;
    for (int epoch = 0; epoch < spec.max_iterations; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (int start = 0; start < n; start += batch) {
            const int count = std::min(batch, n - start);
            Matrix xb(count, features.cols());
            Vector yb(count);
            for (int i = 0; i < count; ++i) {
                xb.row(i) = features.row(order[start + i]);
                yb[i] = target[order[start + i]];
            }
            MlpParams grad;
            const double loss = mlp_loss_and_gradient(spec, model.params, xb, yb, &grad);
            if (!std::isfinite(loss))
                throw std::runtime_error("fit_mlp: non-finite loss at epoch " +
                                         std::to_string(epoch));
            epoch_loss += loss * count / n;

            ++step;
            const double rate = spec.step_size *
                                std::sqrt(1.0 - std::pow(spec.adam_beta2, double(step))) /
                                (1.0 - std::pow(spec.adam_beta1, double(step)));
            for (std::size_t l = 0; l < model.params.weights.size(); ++l) {
                m.weights[l] = spec.adam_beta1 * m.weights[l] +
                               (1.0 - spec.adam_beta1) * grad.weights[l];
                v.weights[l] = spec.adam_beta2 * v.weights[l] +
                               (1.0 - spec.adam_beta2) * grad.weights[l].cwiseAbs2();
                model.params.weights[l].array() -=
                    rate * m.weights[l].array() /
                    (v.weights[l].array().sqrt() + spec.adam_epsilon);
                m.biases[l] =
                    spec.adam_beta1 * m.biases[l] + (1.0 - spec.adam_beta1) * grad.biases[l];
                v.biases[l] = spec.adam_beta2 * v.biases[l] +
                              (1.0 - spec.adam_beta2) * grad.biases[l].cwiseAbs2();
                model.params.biases[l].array() -=
                    rate * m.biases[l].array() /
                    (v.biases[l].array().sqrt() + spec.adam_epsilon);
            }
        }
        model.loss_history.push_back(epoch_loss);
        if (epoch_loss > best_loss - 1e-4) {
            if (++stall >= 10) {
                model.converged = true;
                break;
            }
        } else {
            stall = 0;
        }
        best_loss = std::min(best_loss, epoch_loss);
    }
    return model;
}

}  // namespace ensbench::instance
