#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "ensbench/bench.hpp"

using namespace ensbench;

namespace {

data::Dataset tiny_dataset(const std::string& name, int n, int d, std::uint64_t seed) {
    return data::make_synthetic(name, n, d, seed);
}

bench::GridConfig small_grid(std::uint64_t seed) {
    bench::GridConfig config = bench::GridConfig::benchmark_defaults();
    config.bases.clear();
    config.bases.push_back({registry::BaseAlgorithm::ridge});
    config.bases.push_back({registry::BaseAlgorithm::decision_tree});
    config.repeats = 2;
    config.master_seed = seed;
    return config;
}

}  // namespace

TEST_CASE("rmse matches hand arithmetic") {
    Vector a(2), b(2);
    a << 1, 2;
    b << 0, 0;
    CHECK(std::abs(bench::rmse(a, b) - std::sqrt(2.5)) <= 1e-12);

    Vector same(4);
    same << 1, 2, 3, 4;
    CHECK(bench::rmse(same, same) == 0.0);

    Vector p1(1), a1(1);
    p1 << 5;
    a1 << 2;
    CHECK(bench::rmse(p1, a1) == 3.0);

    Vector len3(3);
    CHECK_THROWS_AS(bench::rmse(a, len3), std::invalid_argument);
    Vector empty(0);
    CHECK_THROWS_AS(bench::rmse(empty, empty), std::invalid_argument);
}

TEST_CASE("shuffle_split sizes follow the ceiling rule") {
    data::Dataset even = tiny_dataset("even", 10, 3, 1);
    auto [train10, test10] = bench::shuffle_split(even, 0.5, 42);
    CHECK(train10.n_samples() == 5);
    CHECK(test10.n_samples() == 5);

    data::Dataset odd = tiny_dataset("alkaloid_53", 53, 4, 2);
    auto [train53, test53] = bench::shuffle_split(odd, 0.5, 42);
    CHECK(train53.n_samples() == 27);
    CHECK(test53.n_samples() == 26);
}

TEST_CASE("shuffle_split parts are disjoint and cover the original rows") {
    data::Dataset ds = tiny_dataset("cover", 20, 2, 3);
    auto [train, test] = bench::shuffle_split(ds, 0.5, 7);
    std::multiset<double> original, parts;
    for (int i = 0; i < 20; ++i) original.insert(ds.target[i]);
    for (int i = 0; i < train.n_samples(); ++i) parts.insert(train.target[i]);
    for (int i = 0; i < test.n_samples(); ++i) parts.insert(test.target[i]);
    CHECK(original == parts);
}

TEST_CASE("shuffle_split is deterministic and seed-sensitive") {
    data::Dataset ds = tiny_dataset("det", 16, 2, 4);
    auto [a_train, a_test] = bench::shuffle_split(ds, 0.5, 11);
    auto [b_train, b_test] = bench::shuffle_split(ds, 0.5, 11);
    CHECK(a_train.features == b_train.features);
    CHECK(a_test.target == b_test.target);
    auto [c_train, c_test] = bench::shuffle_split(ds, 0.5, 12);
    CHECK(a_train.features != c_train.features);
    CHECK_THROWS_AS(bench::shuffle_split(ds, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(bench::shuffle_split(ds, 1.0, 1), std::invalid_argument);
}

TEST_CASE("row labels carry the mode prefix") {
    ensemble::EnsembleMode single, bg, ar;
    single.kind = ensemble::ModeKind::single;
    bg.kind = ensemble::ModeKind::bagging;
    ar.kind = ensemble::ModeKind::additive_regression;
    registry::RegressorSpec lasso{registry::BaseAlgorithm::lasso};
    CHECK(bench::row_label(single, lasso) == "Lasso Regression");
    CHECK(bench::row_label(bg, lasso) == "BG-Lasso Regression");
    CHECK(bench::row_label(ar, lasso) == "AR-Lasso Regression");
}

TEST_CASE("a 2-base 3-mode grid yields 6 rows") {
    bench::GridConfig config = small_grid(5);
    std::vector<data::Dataset> datasets{tiny_dataset("d1", 24, 5, 6),
                                        tiny_dataset("d2", 30, 4, 7)};
    bench::RmseTable table = bench::run_grid(config, datasets);
    CHECK(table.row_labels.size() == 6);
    CHECK(table.col_labels == std::vector<std::string>{"d1", "d2"});
    CHECK(table.cells.rows() == 6);
    CHECK(table.cells.cols() == 2);
    CHECK(table.sentinel_cells.empty());
    // each cell is the mean of its retained repeat values
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 2; ++c) {
            double acc = 0.0;
            for (double v : table.repeat_values[r][c]) acc += v;
            CHECK(table.cells(r, c) ==
                  doctest::Approx(acc / config.repeats).epsilon(1e-12));
        }
    }
}

TEST_CASE("run_grid is reproducible and scheduling-independent") {
    bench::GridConfig config = small_grid(8);
    std::vector<data::Dataset> datasets{tiny_dataset("d1", 26, 4, 9)};
    bench::RmseTable serial = bench::run_grid(config, datasets);
    bench::RmseTable again = bench::run_grid(config, datasets);
    CHECK(serial.cells == again.cells);
    config.n_threads = 4;
    bench::RmseTable threaded = bench::run_grid(config, datasets);
    CHECK(serial.cells == threaded.cells);
    CHECK(serial.cell_seeds == threaded.cell_seeds);
}

TEST_CASE("a failing base records a sentinel instead of aborting") {
    bench::GridConfig config = small_grid(10);
    registry::RegressorSpec broken;
    broken.force_fail = true;
    config.bases.push_back(broken);
    std::vector<data::Dataset> datasets{tiny_dataset("d1", 20, 3, 11)};
    bench::RmseTable table = bench::run_grid(config, datasets);
    REQUIRE(table.row_labels.size() == 9);
    CHECK(table.sentinel_cells.size() == 3);  // one per mode of the broken base
    for (const auto& [row, col] : table.sentinel_cells) {
        CHECK(std::isinf(table.cells(row, col)));
        CHECK(col == 0);
    }
}

TEST_CASE("rank columns sort ascending by rmse") {
    bench::RmseTable table;
    table.row_labels = {"a", "b", "c"};
    table.col_labels = {"ds"};
    table.cells.resize(3, 1);
    table.cells << 0.3, 0.1, 0.2;
    bench::RankTable ranks = bench::rank_table(table);
    CHECK(ranks.ranks(0, 0) == 2);
    CHECK(ranks.ranks(1, 0) == 0);
    CHECK(ranks.ranks(2, 0) == 1);
}

TEST_CASE("the row mean of ranks (18, 6, 18, 43) is 21.25") {
    bench::RmseTable table;
    table.row_labels.resize(44);
    for (int r = 0; r < 44; ++r) table.row_labels[r] = "row" + std::to_string(r);
    table.col_labels = {"d1", "d2", "d3", "d4"};
    table.cells.resize(44, 4);
    // build columns whose sort order places row 0 at ranks 18, 6, 18, 43
    const int targets[4] = {18, 6, 18, 43};
    for (int c = 0; c < 4; ++c) {
        for (int r = 1; r < 44; ++r) table.cells(r, c) = r;  // distinct fillers
        table.cells(0, c) = targets[c] + 0.5;  // lands at the desired position
    }
    bench::RankTable ranks = bench::rank_table(table);
    for (int c = 0; c < 4; ++c) CHECK(ranks.ranks(0, c) == targets[c]);
    CHECK(ranks.row_mean[0] == doctest::Approx(21.25).epsilon(1e-12));
}

TEST_CASE("ties and sentinels rank by grid row order") {
    bench::RmseTable table;
    table.row_labels = {"a", "b", "c", "d"};
    table.col_labels = {"ds"};
    table.cells.resize(4, 1);
    const double inf = std::numeric_limits<double>::infinity();
    table.cells << 1.0, inf, 1.0, inf;
    bench::RankTable ranks = bench::rank_table(table);
    CHECK(ranks.ranks(0, 0) == 0);
    CHECK(ranks.ranks(2, 0) == 1);
    CHECK(ranks.ranks(1, 0) == 2);  // first sentinel by row order
    CHECK(ranks.ranks(3, 0) == 3);

    bench::RmseTable equal;
    equal.row_labels = {"a", "b", "c"};
    equal.col_labels = {"ds"};
    equal.cells = Matrix::Constant(3, 1, 2.0);
    bench::RankTable eq = bench::rank_table(equal);
    for (int r = 0; r < 3; ++r) CHECK(eq.ranks(r, 0) == r);
}

TEST_CASE("rank columns are permutations on random tables") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uni(0.0, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = 2 + static_cast<int>(rng() % 20);
        const int cols = 1 + static_cast<int>(rng() % 4);
        bench::RmseTable table;
        for (int r = 0; r < rows; ++r) table.row_labels.push_back("r" + std::to_string(r));
        for (int c = 0; c < cols; ++c) table.col_labels.push_back("c" + std::to_string(c));
        table.cells.resize(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) table.cells(r, c) = uni(rng);
        bench::RankTable ranks = bench::rank_table(table);
        for (int c = 0; c < cols; ++c) {
            std::vector<int> seen(rows, 0);
            for (int r = 0; r < rows; ++r) ++seen[ranks.ranks(r, c)];
            CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
        }
    }
}

TEST_CASE("ranking is invariant under monotone column transforms") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(0.1, 5.0);
    bench::RmseTable table;
    for (int r = 0; r < 12; ++r) table.row_labels.push_back("r" + std::to_string(r));
    table.col_labels = {"c0", "c1"};
    table.cells.resize(12, 2);
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 2; ++c) table.cells(r, c) = uni(rng);
    bench::RankTable base = bench::rank_table(table);
    bench::RmseTable transformed = table;
    transformed.cells.col(0) = table.cells.col(0).array().exp();
    transformed.cells.col(1) = table.cells.col(1).array() * 7.0 + 1.0;
    bench::RankTable after = bench::rank_table(transformed);
    CHECK(base.ranks == after.ranks);
}

TEST_CASE("summary row (21.25, 26.5, 24) averages to 23.92 at display rounding") {
    // one base, three modes, ranks arranged to hit the target row means
    bench::RankTable ranks;
    ranks.row_labels = {"Lasso Regression", "BG-Lasso Regression", "AR-Lasso Regression"};
    ranks.col_labels = {"d1", "d2", "d3", "d4"};
    ranks.ranks.resize(3, 4);
    ranks.ranks.row(0) << 24, 24, 24, 24;        // single: mean 24
    ranks.ranks.row(1) << 18, 6, 18, 43;         // BG: mean 21.25
    ranks.ranks.row(2) << 26, 27, 26, 27;        // AR: mean 26.5
    std::vector<registry::RegressorSpec> bases{{registry::BaseAlgorithm::lasso}};
    ensemble::EnsembleMode single, bg, ar;
    single.kind = ensemble::ModeKind::single;
    bg.kind = ensemble::ModeKind::bagging;
    ar.kind = ensemble::ModeKind::additive_regression;
    std::vector<ensemble::EnsembleMode> modes{single, bg, ar};
    bench::SummaryTable summary = bench::summarize(ranks, bases, modes);
    REQUIRE(summary.base_labels.size() == 1);
    CHECK(summary.cells(0, 0) == doctest::Approx(21.25).epsilon(1e-12));  // BG
    CHECK(summary.cells(0, 1) == doctest::Approx(26.5).epsilon(1e-12));   // AR
    CHECK(summary.cells(0, 2) == doctest::Approx(24.0).epsilon(1e-12));   // Single
    char rounded[16];
    std::snprintf(rounded, sizeof(rounded), "%.2f", summary.row_avg[0]);
    CHECK(std::string(rounded) == "23.92");
}

TEST_CASE("the summary Avg row equals hand-computed column means") {
    bench::RankTable ranks;
    ranks.col_labels = {"d1"};
    ranks.ranks.resize(6, 1);
    ranks.ranks << 0, 1, 2, 3, 4, 5;
    ranks.row_labels.resize(6);
    std::vector<registry::RegressorSpec> bases{{registry::BaseAlgorithm::ridge},
                                               {registry::BaseAlgorithm::knn}};
    ensemble::EnsembleMode single, bg, ar;
    single.kind = ensemble::ModeKind::single;
    bg.kind = ensemble::ModeKind::bagging;
    ar.kind = ensemble::ModeKind::additive_regression;
    std::vector<ensemble::EnsembleMode> modes{single, bg, ar};
    // rows are base-major: ridge/(single,bg,ar) = 0,1,2; knn = 3,4,5
    bench::SummaryTable summary = bench::summarize(ranks, bases, modes);
    CHECK(summary.cells(0, 0) == 1.0);  // ridge BG
    CHECK(summary.cells(0, 1) == 2.0);  // ridge AR
    CHECK(summary.cells(0, 2) == 0.0);  // ridge single
    CHECK(summary.col_avg[0] == doctest::Approx((1.0 + 4.0) / 2).epsilon(1e-12));
    CHECK(summary.col_avg[1] == doctest::Approx((2.0 + 5.0) / 2).epsilon(1e-12));
    CHECK(summary.col_avg[2] == doctest::Approx((0.0 + 3.0) / 2).epsilon(1e-12));
    CHECK(summary.grand_avg == doctest::Approx(2.5).epsilon(1e-12));
    for (int b = 0; b < 2; ++b)
        CHECK(summary.row_avg[b] ==
              doctest::Approx(summary.cells.row(b).mean()).epsilon(1e-9));
}

TEST_CASE("summarize rejects a table that does not cover the grid") {
    bench::RankTable ranks;
    ranks.row_labels = {"only one"};
    ranks.col_labels = {"d"};
    ranks.ranks.resize(1, 1);
    ranks.ranks << 0;
    std::vector<registry::RegressorSpec> bases{{registry::BaseAlgorithm::ridge}};
    ensemble::EnsembleMode single;
    std::vector<ensemble::EnsembleMode> modes{single};
    CHECK_THROWS_AS(bench::summarize(ranks, bases, modes), std::invalid_argument);
}

TEST_CASE("best_per_dataset picks the minimal row with earlier-row ties") {
    bench::RmseTable table;
    table.row_labels = {"a", "b", "c"};
    table.col_labels = {"d1", "d2"};
    table.cells.resize(3, 2);
    table.cells << 0.5, 0.2, 0.2, 0.2, 0.9, 0.9;
    std::vector<bench::BestEntry> best = bench::best_per_dataset(table);
    REQUIRE(best.size() == 2);
    CHECK(best[0].dataset == "d1");
    CHECK(best[0].algorithm == "b");
    CHECK(best[0].rmse == 0.2);
    CHECK(best[1].algorithm == "a");  // tie with row 1 resolved to the earlier row
}

TEST_CASE("rank row std is the population standard deviation") {
    bench::RmseTable table;
    table.row_labels = {"a", "b"};
    table.col_labels = {"d1", "d2"};
    table.cells.resize(2, 2);
    table.cells << 1.0, 2.0, 2.0, 1.0;  // row a ranks (0, 1), row b ranks (1, 0)
    bench::RankTable ranks = bench::rank_table(table);
    CHECK(ranks.row_mean[0] == 0.5);
    CHECK(ranks.row_std[0] == doctest::Approx(0.5).epsilon(1e-12));
}
