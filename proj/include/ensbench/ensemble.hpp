#pragma once

#include <cstdint>

#include "ensbench/boost_core.hpp"
#include "ensbench/core.hpp"
#include "ensbench/registry.hpp"

namespace ensbench::ensemble {

enum class ModeKind { single, bagging, additive_regression };
enum class ArCombination { mean, median };

struct EnsembleMode {
    ModeKind kind = ModeKind::single;
    int n_members = 10;  // bagging
    int n_rounds = 10;   // additive_regression
    boost_core::LossShape loss_shape = boost_core::LossShape::linear;
    ArCombination combination = ArCombination::mean;
    std::uint64_t seed = 0;
    bool identity_resample = false;  // test hook: bagging reuses the data as-is
};

class EnsembleModel : public FittedRegressor {
public:
    std::vector<std::unique_ptr<FittedRegressor>> members;
    Vector member_weights;  // uniform for bagging, ln(1/beta) for AR
    EnsembleMode mode;
    int trained_features = 0;

    Vector predict(const Matrix& features) const override;
    int n_features() const override { return trained_features; }
};

std::unique_ptr<EnsembleModel> fit_bagging(const registry::RegressorSpec& base,
                                           const EnsembleMode& mode, const Matrix& features,
                                           const Vector& target);

std::unique_ptr<EnsembleModel> fit_additive_regression(const registry::RegressorSpec& base,
                                                       const EnsembleMode& mode,
                                                       const Matrix& features,
                                                       const Vector& target);

/// Dispatch over mode.kind; `single` fits the base directly.
std::unique_ptr<FittedRegressor> fit_mode(const registry::RegressorSpec& base,
                                          const EnsembleMode& mode, const Matrix& features,
                                          const Vector& target);

}  // namespace ensbench::ensemble
