#pragma once

#include <cstdint>
#include <string>

#include "ensbench/core.hpp"
#include "ensbench/tree.hpp"

namespace ensbench::data {

/// Named descriptor matrix with one target vector. Immutable after
/// construction; validate() enforces the shape and finiteness contract.
struct Dataset {
    std::string name;
    Matrix features;  // n_samples x n_features
    Vector target;    // n_samples
    std::vector<std::string> feature_names;
    std::string provenance;  // source path or "synthetic"

    Eigen::Index n_samples() const { return features.rows(); }
    Eigen::Index n_features() const { return features.cols(); }
    void validate() const;  // throws std::invalid_argument on violation
};

struct FeatureSelection {
    int k = 10;
    tree::TreeEnsembleSpec forest_params = tree::TreeEnsembleSpec::defaults(tree::EnsembleKind::random_forest);
    std::uint64_t seed = 0;
};

Dataset load_dataset(const std::string& path, const std::string& target_column,
                     const std::string& name);

void save_dataset(const Dataset& dataset, const std::string& path,
                  const std::string& target_column = "target");

/// Top-k features by random-forest impurity importance, fitted once on the
/// full dataset. Kept features preserve their original column order; the
/// name gains a "_reduced" suffix.
Dataset select_features(const Dataset& dataset, const FeatureSelection& selection);

/// Importance vector the selection is based on (exposed for auditing).
Vector rf_importances(const Dataset& dataset, const FeatureSelection& selection);

/// Gaussian descriptor matrix with a smooth low-dimensional signal plus
/// noise; stands in for the unpublished benchmark data.
Dataset make_synthetic(const std::string& name, int n_samples, int n_features,
                       std::uint64_t seed);

}  // namespace ensbench::data
