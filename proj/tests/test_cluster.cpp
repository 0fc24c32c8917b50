#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ensbench/cluster.hpp"

using namespace ensbench;

namespace {

// leaf-label partition induced by each merge; order-free dendrogram signature
std::set<std::multiset<std::string>> merge_partitions(const cluster::Dendrogram& d) {
    const int n = static_cast<int>(d.leaf_labels.size());
    std::vector<std::multiset<std::string>> groups(n + d.merges.size());
    for (int i = 0; i < n; ++i) groups[i] = {d.leaf_labels[i]};
    std::set<std::multiset<std::string>> out;
    for (std::size_t t = 0; t < d.merges.size(); ++t) {
        auto merged = groups[d.merges[t].cluster_a];
        for (const auto& s : groups[d.merges[t].cluster_b]) merged.insert(s);
        groups[n + t] = merged;
        out.insert(merged);
    }
    return out;
}

}  // namespace

TEST_CASE("identical rows merge first at height zero") {
    Matrix points(3, 2);
    points << 1.0, 2.0, 5.0, -1.0, 1.0, 2.0;
    cluster::Dendrogram d = cluster::hierarchical_cluster(points, {"a", "b", "c"},
                                                          cluster::Linkage::average, false);
    REQUIRE(d.merges.size() == 2);
    CHECK(d.merges[0].height == 0.0);
    CHECK(d.merges[0].cluster_a == 0);
    CHECK(d.merges[0].cluster_b == 2);
}

TEST_CASE("1-D points (0, 1, 10) merge at heights 1 and 9.5 under average linkage") {
    Matrix points(3, 1);
    points << 0.0, 1.0, 10.0;
    cluster::Dendrogram d = cluster::hierarchical_cluster(points, {"a", "b", "c"},
                                                          cluster::Linkage::average, false);
    REQUIRE(d.merges.size() == 2);
    CHECK(d.merges[0].height == 1.0);
    CHECK(d.merges[0].cluster_a == 0);
    CHECK(d.merges[0].cluster_b == 1);
    CHECK(d.merges[1].height == 9.5);  // mean of |10-0| and |10-1|
    CHECK(d.merges[1].new_size == 3);
}

TEST_CASE("complete and single linkage give the extreme heights on 3 points") {
    Matrix points(3, 1);
    points << 0.0, 1.0, 10.0;
    cluster::Dendrogram complete = cluster::hierarchical_cluster(
        points, {"a", "b", "c"}, cluster::Linkage::complete, false);
    CHECK(complete.merges[1].height == 10.0);
    cluster::Dendrogram single = cluster::hierarchical_cluster(
        points, {"a", "b", "c"}, cluster::Linkage::single, false);
    CHECK(single.merges[1].height == 9.0);
}

TEST_CASE("a single pair merges at its Euclidean distance") {
    Matrix points(2, 2);
    points << 0.0, 0.0, 3.0, 4.0;
    cluster::Dendrogram d =
        cluster::hierarchical_cluster(points, {"p", "q"}, cluster::Linkage::average, false);
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].height == 5.0);
}

TEST_CASE("3-item merge sequences match exhaustive evaluation for every linkage") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix points(3, 2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j) points(i, j) = uni(rng);
        double d01 = (points.row(0) - points.row(1)).norm();
        double d02 = (points.row(0) - points.row(2)).norm();
        double d12 = (points.row(1) - points.row(2)).norm();
        for (cluster::Linkage linkage :
             {cluster::Linkage::average, cluster::Linkage::complete, cluster::Linkage::single}) {
            cluster::Dendrogram d = cluster::hierarchical_cluster(
                points, {"a", "b", "c"}, linkage, false);
            // oracle: the closest pair merges first, then the only possible merge
            double first = std::min({d01, d02, d12});
            CHECK(d.merges[0].height == first);
            double ra, rb;
            if (first == d01) { ra = d02; rb = d12; }
            else if (first == d02) { ra = d01; rb = d12; }
            else { ra = d01; rb = d02; }
            double second = linkage == cluster::Linkage::average ? (ra + rb) / 2.0
                            : linkage == cluster::Linkage::complete ? std::max(ra, rb)
                                                                    : std::min(ra, rb);
            CHECK(d.merges[1].height == doctest::Approx(second).epsilon(1e-12));
        }
    }
}

TEST_CASE("average-linkage heights are nondecreasing") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix points(8, 3);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 3; ++j) points(i, j) = uni(rng);
        std::vector<std::string> labels;
        for (int i = 0; i < 8; ++i) labels.push_back("p" + std::to_string(i));
        cluster::Dendrogram d =
            cluster::hierarchical_cluster(points, labels, cluster::Linkage::average, false);
        for (std::size_t t = 1; t < d.merges.size(); ++t)
            CHECK(d.merges[t].height >= d.merges[t - 1].height - 1e-12);
    }
}

TEST_CASE("permuting rows yields an isomorphic dendrogram") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix points(6, 2);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 2; ++j) points(i, j) = uni(rng);
        std::vector<std::string> labels{"a", "b", "c", "d", "e", "f"};
        cluster::Dendrogram base =
            cluster::hierarchical_cluster(points, labels, cluster::Linkage::average, false);

        std::vector<int> perm{0, 1, 2, 3, 4, 5};
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix shuffled(6, 2);
        std::vector<std::string> shuffled_labels(6);
        for (int i = 0; i < 6; ++i) {
            shuffled.row(i) = points.row(perm[i]);
            shuffled_labels[i] = labels[perm[i]];
        }
        cluster::Dendrogram permuted = cluster::hierarchical_cluster(
            shuffled, shuffled_labels, cluster::Linkage::average, false);

        std::vector<double> h1, h2;
        for (const auto& m : base.merges) h1.push_back(m.height);
        for (const auto& m : permuted.merges) h2.push_back(m.height);
        std::sort(h1.begin(), h1.end());
        std::sort(h2.begin(), h2.end());
        REQUIRE(h1.size() == h2.size());
        for (std::size_t t = 0; t < h1.size(); ++t)
            CHECK(h1[t] == doctest::Approx(h2[t]).epsilon(1e-9));
        CHECK(merge_partitions(base) == merge_partitions(permuted));
    }
}

TEST_CASE("standardization equalizes column scales before distances") {
    Matrix points(3, 2);
    points << 0.0, 0.0, 1.0, 0.0, 0.0, 1000.0;
    // raw: {0,1} merge first; standardized: both columns count equally
    cluster::Dendrogram raw = cluster::hierarchical_cluster(points, {"a", "b", "c"},
                                                            cluster::Linkage::average, false);
    CHECK(raw.merges[0].cluster_a == 0);
    CHECK(raw.merges[0].cluster_b == 1);
    cluster::Dendrogram scaled = cluster::hierarchical_cluster(points, {"a", "b", "c"},
                                                               cluster::Linkage::average, true);
    CHECK(scaled.merges[0].height > 0.0);
}

TEST_CASE("rows with non-finite entries are excluded") {
    Matrix points(4, 2);
    points << 0.0, 0.0, 1.0, 1.0, std::numeric_limits<double>::infinity(), 0.0, 5.0, 5.0;
    cluster::Dendrogram d = cluster::hierarchical_cluster(
        points, {"a", "b", "sentinel", "c"}, cluster::Linkage::average, false);
    CHECK(d.leaf_labels == std::vector<std::string>{"a", "b", "c"});
    CHECK(d.merges.size() == 2);

    Matrix two_bad(2, 1);
    two_bad << 1.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(cluster::hierarchical_cluster(two_bad, {"x", "y"},
                                                  cluster::Linkage::average, false),
                    std::invalid_argument);
}

TEST_CASE("a 2-leaf dendrogram renders as 3 DOT nodes and 2 edges") {
    Matrix points(2, 1);
    points << 0.0, 2.0;
    cluster::Dendrogram d =
        cluster::hierarchical_cluster(points, {"left", "right"}, cluster::Linkage::average, false);
    const std::string dot = cluster::to_dot(d);
    std::size_t nodes = 0, edges = 0, pos = 0;
    while ((pos = dot.find("label=", pos)) != std::string::npos) { ++nodes; pos += 6; }
    pos = 0;
    while ((pos = dot.find("->", pos)) != std::string::npos) { ++edges; pos += 2; }
    CHECK(nodes == 3);
    CHECK(edges == 2);
}

TEST_CASE("the 3-point example renders heights 1 and 9.5 in node labels") {
    Matrix points(3, 1);
    points << 0.0, 1.0, 10.0;
    cluster::Dendrogram d = cluster::hierarchical_cluster(points, {"a", "b", "c"},
                                                          cluster::Linkage::average, false);
    const std::string dot = cluster::to_dot(d);
    CHECK(dot.find("h=1\"") != std::string::npos);
    CHECK(dot.find("h=9.5\"") != std::string::npos);
}

TEST_CASE("JSON round-trips to an equal dendrogram") {
    Matrix points(4, 2);
    points << 0, 0, 1, 0, 0, 3, 7, 7;
    cluster::Dendrogram d = cluster::hierarchical_cluster(points, {"a", "b", "c", "d"},
                                                          cluster::Linkage::average, false);
    cluster::Dendrogram back = cluster::from_json(cluster::to_json(d));
    CHECK(back.leaf_labels == d.leaf_labels);
    REQUIRE(back.merges.size() == d.merges.size());
    for (std::size_t t = 0; t < d.merges.size(); ++t) {
        CHECK(back.merges[t].cluster_a == d.merges[t].cluster_a);
        CHECK(back.merges[t].cluster_b == d.merges[t].cluster_b);
        CHECK(back.merges[t].height == d.merges[t].height);
        CHECK(back.merges[t].new_size == d.merges[t].new_size);
    }
    // byte-stable emission for a fixed dendrogram
    CHECK(cluster::to_json(d) == cluster::to_json(back));
    CHECK(cluster::to_dot(d) == cluster::to_dot(back));
}
