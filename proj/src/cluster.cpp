#include "ensbench/cluster.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace ensbench::cluster {

Dendrogram hierarchical_cluster(const Matrix& points, const std::vector<std::string>& labels,
                                Linkage linkage, bool standardize) {
    if (points.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("hierarchical_cluster: label count mismatch");

    std::vector<int> valid;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        if (points.row(i).allFinite()) {
            valid.push_back(static_cast<int>(i));
        } else {
            std::cerr << "warning: excluding row \"" << labels[i]
                      << "\" with non-finite entries from clustering\n";
        }
    }
    const int n = static_cast<int>(valid.size());
    if (n < 2) throw std::invalid_argument("hierarchical_cluster: fewer than 2 valid rows");

    Matrix x(n, points.cols());
    Dendrogram d;
    for (int i = 0; i < n; ++i) {
        x.row(i) = points.row(valid[i]);
        d.leaf_labels.push_back(labels[valid[i]]);
    }
    if (standardize) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double mean = x.col(j).mean();
            x.col(j).array() -= mean;
            const double sd = std::sqrt(x.col(j).squaredNorm() / n);
            if (sd > 0.0) x.col(j) /= sd;
        }
    }

    // pairwise Euclidean distances, then Lance-Williams agglomeration
    Matrix dist(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist(i, j) = (x.row(i) - x.row(j)).norm();

    std::vector<int> cluster_id(n);
    std::vector<int> cluster_size(n, 1);
    std::vector<bool> alive(n, true);
    for (int i = 0; i < n; ++i) cluster_id[i] = i;

    for (int step = 0; step < n - 1; ++step) {
        int best_i = -1, best_j = -1;
        double best = std::numeric_limits<double>::infinity();
        long long best_key_a = 0, best_key_b = 0;
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                const long long ka = std::min(cluster_id[i], cluster_id[j]);
                const long long kb = std::max(cluster_id[i], cluster_id[j]);
                if (dist(i, j) < best ||
                    (dist(i, j) == best && (ka < best_key_a ||
                                            (ka == best_key_a && kb < best_key_b)))) {
                    best = dist(i, j);
                    best_i = i;
                    best_j = j;
                    best_key_a = ka;
                    best_key_b = kb;
                }
            }
        }
        const int a = best_i;
        const int b = best_j;
        d.merges.push_back({std::min(cluster_id[a], cluster_id[b]),
                            std::max(cluster_id[a], cluster_id[b]), best,
                            cluster_size[a] + cluster_size[b]});
        // merged cluster lives in slot a
        const double na = cluster_size[a];
        const double nb = cluster_size[b];
        for (int t = 0; t < n; ++t) {
            if (!alive[t] || t == a || t == b) continue;
            double updated = 0.0;
            switch (linkage) {
                case Linkage::average:
                    updated = (na * dist(t, a) + nb * dist(t, b)) / (na + nb);
                    break;
                case Linkage::complete: updated = std::max(dist(t, a), dist(t, b)); break;
                case Linkage::single: updated = std::min(dist(t, a), dist(t, b)); break;
            }
            dist(t, a) = dist(a, t) = updated;
        }
        alive[b] = false;
        cluster_size[a] += cluster_size[b];
        cluster_id[a] = n + step;
    }
    return d;
}

namespace {

std::string format_height(double h) {
    std::ostringstream ss;
    ss.precision(17);
    ss << h;
    return ss.str();
}

}  // namespace

std::string to_dot(const Dendrogram& d) {
    const int n = static_cast<int>(d.leaf_labels.size());
    std::ostringstream out;
    out << "digraph dendrogram {\n";
    out << "  rankdir=BT;\n";
    for (int i = 0; i < n; ++i) {
        out << "  n" << i << " [shape=box, label=\"" << d.leaf_labels[i] << "\"];\n";
    }
    for (std::size_t t = 0; t < d.merges.size(); ++t) {
        const int id = n + static_cast<int>(t);
        out << "  n" << id << " [shape=ellipse, label=\"h=" << format_height(d.merges[t].height)
            << "\"];\n";
        out << "  n" << d.merges[t].cluster_a << " -> n" << id << ";\n";
        out << "  n" << d.merges[t].cluster_b << " -> n" << id << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_json(const Dendrogram& d) {
    nlohmann::ordered_json j;
    j["leaf_labels"] = d.leaf_labels;
    auto& merges = j["merges"] = nlohmann::ordered_json::array();
    for (const Merge& m : d.merges)
        merges.push_back({m.cluster_a, m.cluster_b, m.height, m.new_size});
    return j.dump(2) + "\n";
}

Dendrogram from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Dendrogram d;
    d.leaf_labels = j.at("leaf_labels").get<std::vector<std::string>>();
    for (const auto& m : j.at("merges")) {
        d.merges.push_back({m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<double>(),
                            m.at(3).get<int>()});
    }
    return d;
}

}  // namespace ensbench::cluster
