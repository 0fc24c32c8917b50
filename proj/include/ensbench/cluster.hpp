#pragma once

#include <string>

#include "ensbench/core.hpp"

namespace ensbench::cluster {

enum class Linkage { average, complete, single };

struct Merge {
    int cluster_a = 0;
    int cluster_b = 0;
    double height = 0.0;
    int new_size = 0;
};

/// Agglomeration record: leaves are clusters 0..n-1, merge t creates cluster
/// n + t. Exactly n_leaves - 1 merges.
struct Dendrogram {
    std::vector<Merge> merges;
    std::vector<std::string> leaf_labels;
};

/// Euclidean agglomerative clustering with Lance-Williams updates. Rows with
/// non-finite entries are excluded (with a warning on stderr). Ties break on
/// the smallest (cluster_a, cluster_b) pair.
Dendrogram hierarchical_cluster(const Matrix& points, const std::vector<std::string>& labels,
                                Linkage linkage, bool standardize);

std::string to_dot(const Dendrogram& d);
std::string to_json(const Dendrogram& d);
Dendrogram from_json(const std::string& text);

}  // namespace ensbench::cluster
