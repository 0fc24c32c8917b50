#pragma once

#include <cstdint>
#include <optional>

#include "ensbench/core.hpp"

namespace ensbench::tree {

enum class FeatureSubset { all, sqrt_of, fraction };
enum class Splitter { best, random };

struct TreeSpec {
    std::optional<int> max_depth;  // absent = unbounded
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    FeatureSubset feature_subset = FeatureSubset::all;
    double subset_fraction = 1.0;  // used when feature_subset == fraction
    Splitter splitter = Splitter::best;
    std::uint64_t seed = 0;
};

enum class EnsembleKind { random_forest, extra_trees, gradient_boosting, adaboost_default };

struct TreeEnsembleSpec {
    EnsembleKind kind = EnsembleKind::random_forest;
    int n_estimators = 100;
    double learning_rate = 0.1;  // boosting kinds
    TreeSpec base_tree;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    static TreeEnsembleSpec defaults(EnsembleKind kind);
};

/// A fitted CART regression tree. Nodes are stored in one flat array;
/// feature < 0 marks a leaf.
class TreeModel : public FittedRegressor {
public:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    std::vector<Node> nodes;
    int depth = 0;
    int trained_features = 0;
    // Per-feature weighted impurity decrease, normalized to sum 1 when any
    // split occurred; all zeros otherwise.
    Vector importances;

    Vector predict(const Matrix& features) const override;
    int n_features() const override { return trained_features; }
    double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

TreeModel fit_tree(const TreeSpec& spec, const Matrix& features, const Vector& target,
                   const Vector* sample_weights = nullptr);

class ForestModel : public FittedRegressor {
public:
    std::vector<TreeModel> trees;
    int trained_features = 0;
    Vector importances;

    Vector predict(const Matrix& features) const override;
    int n_features() const override { return trained_features; }
};

class GradientBoostingModel : public FittedRegressor {
public:
    double init_value = 0.0;
    double learning_rate = 0.1;
    std::vector<TreeModel> stages;
    int trained_features = 0;
    // Training MSE after stage k (index 0 = initialization only).
    std::vector<double> train_loss;

    Vector predict(const Matrix& features) const override;
    int n_features() const override { return trained_features; }
};

std::unique_ptr<FittedRegressor> fit_tree_ensemble(const TreeEnsembleSpec& spec,
                                                   const Matrix& features,
                                                   const Vector& target);

/// Mean normalized impurity importance over the ensemble's trees, re-normalized
/// to sum 1. Defined for random_forest and extra_trees.
Vector ensemble_importances(const TreeEnsembleSpec& spec, const Matrix& features,
                            const Vector& target);

}  // namespace ensbench::tree
