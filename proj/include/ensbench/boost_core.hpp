#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "ensbench/core.hpp"

namespace ensbench::boost_core {

enum class LossShape { linear, square, exponential };

inline double shape_loss(LossShape shape, double normalized_abs_error) {
    switch (shape) {
        case LossShape::linear: return normalized_abs_error;
        case LossShape::square: return normalized_abs_error * normalized_abs_error;
        case LossShape::exponential: return 1.0 - std::exp(-normalized_abs_error);
    }
    return normalized_abs_error;
}

// Capped beta for the zero-average-loss early stop.
inline constexpr double kZeroLossBeta = 1e-10;

struct BoostResult {
    std::vector<std::unique_ptr<FittedRegressor>> members;
    std::vector<double> member_weights;  // ln(1/beta_t), scaled by learning_rate
    bool stopped_early = false;
};

/// AdaBoost.R2 driver shared by the additive-regression meta-ensemble and the
/// default-configured AdaBoost tree regressor. `fit_on` trains one base model
/// on a weighted bootstrap resample drawn with the given rng.
///
/// Per round: fit on a resample drawn from the current sample distribution,
/// compute normalized losses L_i on the full training set, average loss
/// Lbar = sum w_i L_i. Rounds with Lbar >= 0.5 are rejected and stop the loop;
/// Lbar == 0 adds the member with a capped weight and stops.
BoostResult adaboost_r2(
    const std::function<std::unique_ptr<FittedRegressor>(const Matrix&, const Vector&,
                                                         std::uint64_t)>& fit_on,
    const Matrix& features, const Vector& target, int n_rounds, double learning_rate,
    LossShape loss_shape, std::uint64_t seed);

/// One round of the sample-weight update, isolated from model fitting.
/// `weights` must be a probability distribution; `losses` are the normalized
/// per-sample losses in [0, 1]. Rejected rounds (avg_loss >= 0.5) leave the
/// weights untouched.
struct RoundUpdate {
    double avg_loss = 0.0;
    bool accepted = false;
    double beta = 0.0;
    double member_weight = 0.0;
    Vector new_weights;
};
RoundUpdate adaboost_round_update(const Vector& weights, const Vector& losses,
                                  double learning_rate);

/// Weighted bootstrap resample of size n from the discrete distribution
/// `weights` (need not be normalized).
std::vector<int> weighted_bootstrap_indices(const Vector& weights, int n, std::mt19937_64& rng);

}  // namespace ensbench::boost_core
