#include "ensbench/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ensbench/boost_core.hpp"

namespace ensbench::tree {

namespace {

struct SortedValue {
    double x;
    double y;
    double w;
};

struct NodeRange {
    int node_id;
    int start;
    int end;
    int depth;
};

class TreeBuilder {
public:
    TreeBuilder(const TreeSpec& spec, const Matrix& features, const Vector& target,
                const Vector* sample_weights)
        : spec_(spec), features_(features), target_(target), rng_(spec.seed) {
        const int n = static_cast<int>(features.rows());
        weights_.resize(n);
        if (sample_weights) {
            weights_ = *sample_weights;
        } else {
            weights_.setOnes();
        }
        indices_.reserve(n);
        for (int i = 0; i < n; ++i) {
            if (weights_[i] > 0.0) indices_.push_back(i);
        }
        sort_buf_.resize(indices_.size());
    }

    TreeModel build() {
        TreeModel model;
        const int d = static_cast<int>(features_.cols());
        model.trained_features = d;
        model.importances = Vector::Zero(d);
        if (indices_.empty()) throw std::invalid_argument("fit_tree: empty input");

        model.nodes.emplace_back();
        std::vector<NodeRange> stack;
        stack.push_back({0, 0, static_cast<int>(indices_.size()), 0});
        while (!stack.empty()) {
            NodeRange range = stack.back();
            stack.pop_back();
            grow(model, range, stack);
        }
        const double total = model.importances.sum();
        if (total > 0.0) model.importances /= total;
        return model;
    }

private:
    struct Stats {
        double weight = 0.0;
        double sum = 0.0;
        double sumsq = 0.0;
        double sse() const { return weight > 0.0 ? sumsq - sum * sum / weight : 0.0; }
    };

    Stats node_stats(int start, int end) const {
        Stats s;
        for (int p = start; p < end; ++p) {
            const int i = indices_[p];
            const double w = weights_[i];
            s.weight += w;
            s.sum += w * target_[i];
            s.sumsq += w * target_[i] * target_[i];
        }
        return s;
    }

    std::vector<int> candidate_features() {
        const int d = static_cast<int>(features_.cols());
        int m = d;
        switch (spec_.feature_subset) {
            case FeatureSubset::all: m = d; break;
            case FeatureSubset::sqrt_of:
                m = std::max(1, static_cast<int>(std::lround(std::sqrt(double(d)))));
                break;
            case FeatureSubset::fraction:
                m = std::max(1, static_cast<int>(spec_.subset_fraction * d));
                break;
        }
        std::vector<int> feats(d);
        std::iota(feats.begin(), feats.end(), 0);
        if (m >= d) return feats;
        // partial Fisher-Yates, then ascending for the tie rule
        for (int i = 0; i < m; ++i) {
            std::uniform_int_distribution<int> pick(i, d - 1);
            std::swap(feats[i], feats[pick(rng_)]);
        }
        feats.resize(m);
        std::sort(feats.begin(), feats.end());
        return feats;
    }

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    void best_split_for_feature(int feature, int start, int end, const Stats& parent,
                                Split& best) {
        const int n = end - start;
        for (int p = 0; p < n; ++p) {
            const int i = indices_[start + p];
            sort_buf_[p] = {features_(i, feature), target_[i], weights_[i]};
        }
        std::sort(sort_buf_.begin(), sort_buf_.begin() + n,
                  [](const SortedValue& a, const SortedValue& b) { return a.x < b.x; });
        Stats left;
        const int min_leaf = spec_.min_samples_leaf;
        for (int p = 1; p < n; ++p) {
            const SortedValue& prev = sort_buf_[p - 1];
            left.weight += prev.w;
            left.sum += prev.w * prev.y;
            left.sumsq += prev.w * prev.y * prev.y;
            if (sort_buf_[p].x <= prev.x) continue;  // cannot split between equal values
            if (p < min_leaf || n - p < min_leaf) continue;
            Stats right{parent.weight - left.weight, parent.sum - left.sum,
                        parent.sumsq - left.sumsq};
            const double gain = parent.sse() - left.sse() - right.sse();
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = feature;
                best.threshold = 0.5 * (prev.x + sort_buf_[p].x);
            }
        }
    }

    void random_split_for_feature(int feature, int start, int end, const Stats& parent,
                                  Split& best) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int p = start; p < end; ++p) {
            const double x = features_(indices_[p], feature);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (!(hi > lo)) return;
        std::uniform_real_distribution<double> dist(lo, hi);
        const double threshold = dist(rng_);
        Stats left;
        int left_count = 0;
        for (int p = start; p < end; ++p) {
            const int i = indices_[p];
            if (features_(i, feature) <= threshold) {
                const double w = weights_[i];
                left.weight += w;
                left.sum += w * target_[i];
                left.sumsq += w * target_[i] * target_[i];
                ++left_count;
            }
        }
        const int n = end - start;
        if (left_count < spec_.min_samples_leaf || n - left_count < spec_.min_samples_leaf)
            return;
        Stats right{parent.weight - left.weight, parent.sum - left.sum, parent.sumsq - left.sumsq};
        const double gain = parent.sse() - left.sse() - right.sse();
        if (gain > best.gain) {
            best.gain = gain;
            best.feature = feature;
            best.threshold = threshold;
        }
    }

    void grow(TreeModel& model, const NodeRange& range, std::vector<NodeRange>& stack) {
        const int n = range.end - range.start;
        const Stats parent = node_stats(range.start, range.end);
        TreeModel::Node& node = model.nodes[range.node_id];
        node.value = parent.sum / parent.weight;
        model.depth = std::max(model.depth, range.depth);

        const bool depth_capped = spec_.max_depth && range.depth >= *spec_.max_depth;
        const bool pure = parent.sse() <= 1e-12 * std::max(1.0, std::abs(parent.sumsq));
        if (n < spec_.min_samples_split || n < 2 * spec_.min_samples_leaf || depth_capped ||
            pure) {
            return;
        }

        Split best;
        for (int feature : candidate_features()) {
            if (spec_.splitter == Splitter::best) {
                best_split_for_feature(feature, range.start, range.end, parent, best);
            } else {
                random_split_for_feature(feature, range.start, range.end, parent, best);
            }
        }
        if (best.feature < 0 || !(best.gain > 0.0)) return;

        // in-place partition preserving [start, mid) left, [mid, end) right
        auto mid_it = std::stable_partition(
            indices_.begin() + range.start, indices_.begin() + range.end,
            [&](int i) { return features_(i, best.feature) <= best.threshold; });
        const int mid = static_cast<int>(mid_it - indices_.begin());
        if (mid == range.start || mid == range.end) return;  // numeric guard

        model.importances[best.feature] += best.gain;

        const int left_id = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        const int right_id = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        TreeModel::Node& parent_node = model.nodes[range.node_id];
        parent_node.feature = best.feature;
        parent_node.threshold = best.threshold;
        parent_node.left = left_id;
        parent_node.right = right_id;
        stack.push_back({right_id, mid, range.end, range.depth + 1});
        stack.push_back({left_id, range.start, mid, range.depth + 1});
    }

    const TreeSpec& spec_;
    const Matrix& features_;
    const Vector& target_;
    Vector weights_;
    std::vector<int> indices_;
    std::vector<SortedValue> sort_buf_;
    std::mt19937_64 rng_;
};

Vector bootstrap_counts(int n, std::mt19937_64& rng) {
    Vector counts = Vector::Zero(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < n; ++i) counts[pick(rng)] += 1.0;
    return counts;
}

class AdaBoostTreeModel : public FittedRegressor {
public:
    std::vector<std::unique_ptr<FittedRegressor>> members;
    std::vector<double> member_weights;
    int trained_features = 0;

    Vector predict(const Matrix& features) const override {
        check_predict_width(trained_features, features.cols());
        Vector acc = Vector::Zero(features.rows());
        double total = 0.0;
        for (std::size_t t = 0; t < members.size(); ++t) {
            acc += member_weights[t] * members[t]->predict(features);
            total += member_weights[t];
        }
        return acc / total;
    }
    int n_features() const override { return trained_features; }
};

}  // namespace

TreeEnsembleSpec TreeEnsembleSpec::defaults(EnsembleKind kind) {
    TreeEnsembleSpec spec;
    spec.kind = kind;
    switch (kind) {
        case EnsembleKind::random_forest:
            spec.n_estimators = 100;
            spec.bootstrap = true;
            break;
        case EnsembleKind::extra_trees:
            spec.n_estimators = 100;
            spec.bootstrap = false;
            spec.base_tree.splitter = Splitter::random;
            break;
        case EnsembleKind::gradient_boosting:
            spec.n_estimators = 100;
            spec.learning_rate = 0.1;
            spec.base_tree.max_depth = 3;
            spec.bootstrap = false;
            break;
        case EnsembleKind::adaboost_default:
            spec.n_estimators = 50;
            spec.learning_rate = 1.0;
            spec.base_tree.max_depth = 3;
            spec.bootstrap = false;
            break;
    }
    return spec;
}

double TreeModel::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    int id = 0;
    while (nodes[id].feature >= 0) {
        const Node& node = nodes[id];
        id = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes[id].value;
}

Vector TreeModel::predict(const Matrix& features) const {
    check_predict_width(trained_features, features.cols());
    Vector out(features.rows());
    for (Eigen::Index r = 0; r < features.rows(); ++r) out[r] = predict_row(features.row(r));
    return out;
}

TreeModel fit_tree(const TreeSpec& spec, const Matrix& features, const Vector& target,
                   const Vector* sample_weights) {
    if (features.rows() == 0) throw std::invalid_argument("fit_tree: empty input");
    if (features.rows() != target.size())
        throw std::invalid_argument("fit_tree: feature/target shape mismatch");
    if (sample_weights) {
        if (sample_weights->size() != target.size())
            throw std::invalid_argument("fit_tree: weight length mismatch");
        if (sample_weights->minCoeff() < 0.0 || sample_weights->sum() <= 0.0)
            throw std::invalid_argument("fit_tree: weights must be nonnegative with positive sum");
    }
    return TreeBuilder(spec, features, target, sample_weights).build();
}

Vector ForestModel::predict(const Matrix& features) const {
    check_predict_width(trained_features, features.cols());
    Vector acc = Vector::Zero(features.rows());
    for (const TreeModel& t : trees) acc += t.predict(features);
    return acc / static_cast<double>(trees.size());
}

Vector GradientBoostingModel::predict(const Matrix& features) const {
    check_predict_width(trained_features, features.cols());
    Vector acc = Vector::Constant(features.rows(), init_value);
    for (const TreeModel& t : stages) acc += learning_rate * t.predict(features);
    return acc;
}

namespace {

ForestModel fit_forest(const TreeEnsembleSpec& spec, const Matrix& features,
                       const Vector& target) {
    ForestModel model;
    model.trained_features = static_cast<int>(features.cols());
    model.trees.reserve(spec.n_estimators);
    Vector imp_sum = Vector::Zero(features.cols());
    for (int t = 0; t < spec.n_estimators; ++t) {
        TreeSpec tree_spec = spec.base_tree;
        tree_spec.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(t));
        if (spec.bootstrap) {
            std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t), 0x0b00f));
            Vector counts = bootstrap_counts(static_cast<int>(features.rows()), rng);
            model.trees.push_back(fit_tree(tree_spec, features, target, &counts));
        } else {
            model.trees.push_back(fit_tree(tree_spec, features, target));
        }
        imp_sum += model.trees.back().importances;
    }
    model.importances = imp_sum / static_cast<double>(spec.n_estimators);
    const double total = model.importances.sum();
    if (total > 0.0) model.importances /= total;
    return model;
}

GradientBoostingModel fit_gradient_boosting(const TreeEnsembleSpec& spec, const Matrix& features,
                                            const Vector& target) {
    GradientBoostingModel model;
    model.trained_features = static_cast<int>(features.cols());
    model.learning_rate = spec.learning_rate;
    model.init_value = target.mean();
    Vector pred = Vector::Constant(target.size(), model.init_value);
    model.train_loss.push_back((target - pred).squaredNorm() / target.size());
    for (int t = 0; t < spec.n_estimators; ++t) {
        TreeSpec tree_spec = spec.base_tree;
        tree_spec.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(t));
        Vector residual = target - pred;
        model.stages.push_back(fit_tree(tree_spec, features, residual));
        pred += spec.learning_rate * model.stages.back().predict(features);
        model.train_loss.push_back((target - pred).squaredNorm() / target.size());
    }
    return model;
}

std::unique_ptr<FittedRegressor> fit_adaboost_trees(const TreeEnsembleSpec& spec,
                                                    const Matrix& features,
                                                    const Vector& target) {
    auto fitter = [&spec](const Matrix& x, const Vector& y,
                          std::uint64_t seed) -> std::unique_ptr<FittedRegressor> {
        TreeSpec tree_spec = spec.base_tree;
        tree_spec.seed = seed;
        return std::make_unique<TreeModel>(fit_tree(tree_spec, x, y));
    };
    auto result = boost_core::adaboost_r2(fitter, features, target, spec.n_estimators,
                                          spec.learning_rate, boost_core::LossShape::linear,
                                          spec.seed);
    auto model = std::make_unique<AdaBoostTreeModel>();
    model->trained_features = static_cast<int>(features.cols());
    model->members = std::move(result.members);
    model->member_weights = std::move(result.member_weights);
    return model;
}

}  // namespace

std::unique_ptr<FittedRegressor> fit_tree_ensemble(const TreeEnsembleSpec& spec,
                                                   const Matrix& features,
                                                   const Vector& target) {
    if (spec.n_estimators < 1 && spec.kind != EnsembleKind::gradient_boosting)
        throw std::invalid_argument("fit_tree_ensemble: n_estimators must be >= 1");
    switch (spec.kind) {
        case EnsembleKind::random_forest:
        case EnsembleKind::extra_trees:
            return std::make_unique<ForestModel>(fit_forest(spec, features, target));
        case EnsembleKind::gradient_boosting:
            return std::make_unique<GradientBoostingModel>(
                fit_gradient_boosting(spec, features, target));
        case EnsembleKind::adaboost_default:
            return fit_adaboost_trees(spec, features, target);
    }
    throw std::logic_error("fit_tree_ensemble: unknown kind");
}

Vector ensemble_importances(const TreeEnsembleSpec& spec, const Matrix& features,
                            const Vector& target) {
    return fit_forest(spec, features, target).importances;
}

}  // namespace ensbench::tree
