#include "ensbench/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ensbench::boost_core {

std::vector<int> weighted_bootstrap_indices(const Vector& weights, int n, std::mt19937_64& rng) {
    std::discrete_distribution<int> dist(weights.data(), weights.data() + weights.size());
    std::vector<int> indices(n);
    for (int i = 0; i < n; ++i) indices[i] = dist(rng);
    return indices;
}

RoundUpdate adaboost_round_update(const Vector& weights, const Vector& losses,
                                  double learning_rate) {
    RoundUpdate update;
    update.avg_loss = weights.dot(losses);
    update.new_weights = weights;
    if (update.avg_loss >= 0.5) return update;
    update.accepted = true;
    if (update.avg_loss <= 0.0) {
        update.beta = kZeroLossBeta;
        update.member_weight = learning_rate * std::log(1.0 / kZeroLossBeta);
        return update;
    }
    update.beta = update.avg_loss / (1.0 - update.avg_loss);
    update.member_weight = learning_rate * std::log(1.0 / update.beta);
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        update.new_weights[i] =
            weights[i] * std::pow(update.beta, learning_rate * (1.0 - losses[i]));
    }
    update.new_weights /= update.new_weights.sum();
    return update;
}

BoostResult adaboost_r2(
    const std::function<std::unique_ptr<FittedRegressor>(const Matrix&, const Vector&,
                                                         std::uint64_t)>& fit_on,
    const Matrix& features, const Vector& target, int n_rounds, double learning_rate,
    LossShape loss_shape, std::uint64_t seed) {
    const int n = static_cast<int>(target.size());
    BoostResult result;
    Vector sample_weights = Vector::Constant(n, 1.0 / n);

    for (int round = 0; round < n_rounds; ++round) {
        const std::uint64_t round_seed = derive_seed(seed, static_cast<std::uint64_t>(round));
        std::mt19937_64 rng(round_seed);
        std::vector<int> picks = weighted_bootstrap_indices(sample_weights, n, rng);
        Matrix x_boot(n, features.cols());
        Vector y_boot(n);
        for (int i = 0; i < n; ++i) {
            x_boot.row(i) = features.row(picks[i]);
            y_boot[i] = target[picks[i]];
        }
        auto member = fit_on(x_boot, y_boot, derive_seed(round_seed, 0xf17));

        // losses are evaluated on the full training set
        Vector errors = (member->predict(features) - target).cwiseAbs();
        const double max_error = errors.maxCoeff();
        if (max_error <= 0.0) {
            result.members.push_back(std::move(member));
            result.member_weights.push_back(learning_rate * std::log(1.0 / kZeroLossBeta));
            result.stopped_early = true;
            break;
        }
        Vector losses(n);
        for (int i = 0; i < n; ++i) losses[i] = shape_loss(loss_shape, errors[i] / max_error);
        RoundUpdate update = adaboost_round_update(sample_weights, losses, learning_rate);
        if (!update.accepted) {
            // reject the round; keep whatever was accepted so far
            result.stopped_early = true;
            break;
        }
        result.members.push_back(std::move(member));
        result.member_weights.push_back(update.member_weight);
        if (update.beta <= kZeroLossBeta) {
            result.stopped_early = true;
            break;
        }
        sample_weights = update.new_weights;
    }

    if (result.members.empty()) {
        // every round was rejected; fall back to one member trained on the
        // original data so the model still predicts
        auto member = fit_on(features, target, derive_seed(seed, 0xfa11));
        result.members.push_back(std::move(member));
        result.member_weights.push_back(1.0);
        result.stopped_early = true;
    }
    return result;
}

}  // namespace ensbench::boost_core

namespace ensbench::ensemble {

Vector EnsembleModel::predict(const Matrix& features) const {
    check_predict_width(trained_features, features.cols());
    const auto n = features.rows();
    if (mode.kind == ModeKind::additive_regression &&
        mode.combination == ArCombination::median) {
        // weighted median across members, per row
        Matrix preds(n, static_cast<Eigen::Index>(members.size()));
        for (std::size_t t = 0; t < members.size(); ++t)
            preds.col(static_cast<Eigen::Index>(t)) = members[t]->predict(features);
        Vector out(n);
        const double half = member_weights.sum() / 2.0;
        std::vector<int> order(members.size());
        for (Eigen::Index r = 0; r < n; ++r) {
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return preds(r, a) < preds(r, b); });
            double acc = 0.0;
            double value = preds(r, order.back());
            for (int t : order) {
                acc += member_weights[t];
                if (acc >= half) {
                    value = preds(r, t);
                    break;
                }
            }
            out[r] = value;
        }
        return out;
    }
    Vector acc = Vector::Zero(n);
    for (std::size_t t = 0; t < members.size(); ++t)
        acc += member_weights[static_cast<Eigen::Index>(t)] * members[t]->predict(features);
    return acc / member_weights.sum();
}

std::unique_ptr<EnsembleModel> fit_bagging(const registry::RegressorSpec& base,
                                           const EnsembleMode& mode, const Matrix& features,
                                           const Vector& target) {
    if (mode.kind != ModeKind::bagging)
        throw std::invalid_argument("fit_bagging: mode.kind must be bagging");
    if (mode.n_members < 1) throw std::invalid_argument("fit_bagging: n_members must be >= 1");
    auto model = std::make_unique<EnsembleModel>();
    model->mode = mode;
    model->trained_features = static_cast<int>(features.cols());
    const int n = static_cast<int>(target.size());
    for (int t = 0; t < mode.n_members; ++t) {
        registry::RegressorSpec member_spec = base;
        member_spec.seed = derive_seed(mode.seed, static_cast<std::uint64_t>(t), 0xba5e);
        try {
            if (mode.identity_resample) {
                model->members.push_back(registry::fit_base(member_spec, features, target));
            } else {
                std::mt19937_64 rng(derive_seed(mode.seed, static_cast<std::uint64_t>(t)));
                std::uniform_int_distribution<int> pick(0, n - 1);
                Matrix x_boot(n, features.cols());
                Vector y_boot(n);
                for (int i = 0; i < n; ++i) {
                    const int j = pick(rng);
                    x_boot.row(i) = features.row(j);
                    y_boot[i] = target[j];
                }
                model->members.push_back(registry::fit_base(member_spec, x_boot, y_boot));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("bagging member " + std::to_string(t) +
                                     " failed: " + e.what());
        }
    }
    model->member_weights = Vector::Ones(mode.n_members);
    return model;
}

std::unique_ptr<EnsembleModel> fit_additive_regression(const registry::RegressorSpec& base,
                                                       const EnsembleMode& mode,
                                                       const Matrix& features,
                                                       const Vector& target) {
    if (mode.kind != ModeKind::additive_regression)
        throw std::invalid_argument("fit_additive_regression: mode.kind must be additive_regression");
    if (mode.n_rounds < 1)
        throw std::invalid_argument("fit_additive_regression: n_rounds must be >= 1");
    auto fitter = [&base](const Matrix& x, const Vector& y,
                          std::uint64_t seed) -> std::unique_ptr<FittedRegressor> {
        registry::RegressorSpec member_spec = base;
        member_spec.seed = seed;
        return registry::fit_base(member_spec, x, y);
    };
    auto result = boost_core::adaboost_r2(fitter, features, target, mode.n_rounds, 1.0,
                                          mode.loss_shape, mode.seed);
    auto model = std::make_unique<EnsembleModel>();
    model->mode = mode;
    model->trained_features = static_cast<int>(features.cols());
    model->member_weights =
        Eigen::Map<const Vector>(result.member_weights.data(),
                                 static_cast<Eigen::Index>(result.member_weights.size()));
    model->members = std::move(result.members);
    return model;
}

std::unique_ptr<FittedRegressor> fit_mode(const registry::RegressorSpec& base,
                                          const EnsembleMode& mode, const Matrix& features,
                                          const Vector& target) {
    switch (mode.kind) {
        case ModeKind::single: {
            registry::RegressorSpec spec = base;
            spec.seed = derive_seed(mode.seed, 0x51);
            return registry::fit_base(spec, features, target);
        }
        case ModeKind::bagging: return fit_bagging(base, mode, features, target);
        case ModeKind::additive_regression:
            return fit_additive_regression(base, mode, features, target);
    }
    throw std::logic_error("fit_mode: unknown kind");
}

}  // namespace ensbench::ensemble
