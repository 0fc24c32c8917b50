#include "ensbench/registry.hpp"

#include <unordered_map>

#include "ensbench/instance.hpp"
#include "ensbench/kernel.hpp"
#include "ensbench/linear.hpp"
#include "ensbench/tree.hpp"

namespace ensbench::registry {

namespace {

struct AlgoInfo {
    BaseAlgorithm algo;
    const char* config;
    const char* display;
};

constexpr AlgoInfo kAlgos[] = {
    {BaseAlgorithm::lasso, "lasso", "Lasso Regression"},
    {BaseAlgorithm::ridge, "ridge", "Ridge Regression"},
    {BaseAlgorithm::elastic_net, "elastic_net", "Elastic Net"},
    {BaseAlgorithm::lasso_lars, "lasso_lars", "Lasso Least Angle Regression"},
    {BaseAlgorithm::omp, "omp", "Orthogonal Matching Pursuit"},
    {BaseAlgorithm::bayesian_ridge, "bayesian_ridge", "Bayesian Ridge"},
    {BaseAlgorithm::ard, "ard", "Automatic Relevance Determination"},
    {BaseAlgorithm::passive_aggressive, "passive_aggressive", "Passive Aggressive Regressor"},
    {BaseAlgorithm::theil_sen, "theil_sen", "TheilSen Regressor"},
    {BaseAlgorithm::huber, "huber", "Huber Regressor"},
    {BaseAlgorithm::kernel_ridge, "kernel_ridge", "Kernel Ridge"},
    {BaseAlgorithm::svr, "svr", "Support Vector Machine"},
    {BaseAlgorithm::knn, "knn", "K Neighbors Regressor"},
    {BaseAlgorithm::decision_tree, "decision_tree", "Decision Tree"},
    {BaseAlgorithm::random_forest, "random_forest", "Random Forest"},
    {BaseAlgorithm::extra_trees, "extra_trees", "Extra Trees Regressor"},
    {BaseAlgorithm::adaboost, "adaboost", "AdaBoost Regressor"},
    {BaseAlgorithm::gradient_boosting, "gradient_boosting", "Gradient Boosting Regressor"},
    {BaseAlgorithm::mlp, "mlp", "Multi Level Perceptron"},
};

}  // namespace

std::string display_name(BaseAlgorithm algo) {
    for (const AlgoInfo& info : kAlgos)
        if (info.algo == algo) return info.display;
    throw std::logic_error("display_name: unknown algorithm");
}

std::string config_name(BaseAlgorithm algo) {
    for (const AlgoInfo& info : kAlgos)
        if (info.algo == algo) return info.config;
    throw std::logic_error("config_name: unknown algorithm");
}

BaseAlgorithm algorithm_from_config_name(const std::string& name) {
    for (const AlgoInfo& info : kAlgos)
        if (name == info.config) return info.algo;
    throw std::invalid_argument("unknown base algorithm: \"" + name + "\"");
}

std::vector<BaseAlgorithm> all_base_algorithms() {
    std::vector<BaseAlgorithm> out;
    for (const AlgoInfo& info : kAlgos) out.push_back(info.algo);
    return out;
}

std::unique_ptr<FittedRegressor> fit_base(const RegressorSpec& spec, const Matrix& features,
                                          const Vector& target) {
    if (spec.force_fail) throw std::runtime_error("fit_base: forced failure (test hook)");

    using linear::Variant;
    const auto fit_lin = [&](Variant variant) {
        linear::LinearSpec lspec = linear::LinearSpec::defaults(variant);
        lspec.seed = spec.seed;
        return std::make_unique<linear::LinearModel>(linear::fit_linear(lspec, features, target));
    };
    const auto fit_trees = [&](tree::EnsembleKind kind) {
        tree::TreeEnsembleSpec tspec = tree::TreeEnsembleSpec::defaults(kind);
        tspec.seed = spec.seed;
        return tree::fit_tree_ensemble(tspec, features, target);
    };

    switch (spec.algo) {
        case BaseAlgorithm::lasso: return fit_lin(Variant::lasso);
        case BaseAlgorithm::ridge: return fit_lin(Variant::ridge);
        case BaseAlgorithm::elastic_net: return fit_lin(Variant::elastic_net);
        case BaseAlgorithm::lasso_lars: return fit_lin(Variant::lasso_lars);
        case BaseAlgorithm::omp: return fit_lin(Variant::omp);
        case BaseAlgorithm::bayesian_ridge: return fit_lin(Variant::bayesian_ridge);
        case BaseAlgorithm::ard: return fit_lin(Variant::ard);
        case BaseAlgorithm::passive_aggressive: return fit_lin(Variant::passive_aggressive);
        case BaseAlgorithm::theil_sen: return fit_lin(Variant::theil_sen);
        case BaseAlgorithm::huber: return fit_lin(Variant::huber);
        case BaseAlgorithm::kernel_ridge:
            return std::make_unique<kernel::KernelModel>(
                kernel::fit_kernel_ridge(1.0, kernel::KernelSpec{kernel::KernelKind::linear},
                                         features, target));
        case BaseAlgorithm::svr:
            return std::make_unique<kernel::KernelModel>(
                kernel::fit_svr(kernel::SvrSpec{}, features, target));
        case BaseAlgorithm::knn: {
            instance::KnnSpec kspec;
            kspec.k = std::min<int>(kspec.k, static_cast<int>(features.rows()));
            return std::make_unique<instance::KnnModel>(
                instance::fit_knn(kspec, features, target));
        }
        case BaseAlgorithm::decision_tree: {
            tree::TreeSpec tspec;
            tspec.seed = spec.seed;
            return std::make_unique<tree::TreeModel>(tree::fit_tree(tspec, features, target));
        }
        case BaseAlgorithm::random_forest: return fit_trees(tree::EnsembleKind::random_forest);
        case BaseAlgorithm::extra_trees: return fit_trees(tree::EnsembleKind::extra_trees);
        case BaseAlgorithm::adaboost: return fit_trees(tree::EnsembleKind::adaboost_default);
        case BaseAlgorithm::gradient_boosting:
            return fit_trees(tree::EnsembleKind::gradient_boosting);
        case BaseAlgorithm::mlp: {
            instance::MlpSpec mspec;
            mspec.seed = spec.seed;
            return std::make_unique<instance::MlpModel>(
                instance::fit_mlp(mspec, features, target));
        }
    }
    throw std::logic_error("fit_base: unknown algorithm");
}

}  // namespace ensbench::registry
