#pragma once

#include <cstdint>
#include <string>

#include "ensbench/core.hpp"

namespace ensbench::registry {

/// The 19 base regressors, in the grid's canonical row order.
enum class BaseAlgorithm {
    lasso,
    ridge,
    elastic_net,
    lasso_lars,
    omp,
    bayesian_ridge,
    ard,
    passive_aggressive,
    theil_sen,
    huber,
    kernel_ridge,
    svr,
    knn,
    decision_tree,
    random_forest,
    extra_trees,
    adaboost,
    gradient_boosting,
    mlp,
};

inline constexpr int kNumBaseAlgorithms = 19;

struct RegressorSpec {
    BaseAlgorithm algo = BaseAlgorithm::lasso;
    std::uint64_t seed = 0;
    bool force_fail = false;  // test hook: fit throws
};

/// Display name matching the benchmark tables ("Lasso Regression", ...).
std::string display_name(BaseAlgorithm algo);

/// Short config-file identifier ("lasso", "ridge", ...).
std::string config_name(BaseAlgorithm algo);
BaseAlgorithm algorithm_from_config_name(const std::string& name);

/// All 19 algorithms in canonical order.
std::vector<BaseAlgorithm> all_base_algorithms();

/// Fit the given base with its pinned default hyperparameters.
std::unique_ptr<FittedRegressor> fit_base(const RegressorSpec& spec, const Matrix& features,
                                          const Vector& target);

}  // namespace ensbench::registry
