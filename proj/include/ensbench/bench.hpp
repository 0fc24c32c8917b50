#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ensbench/data.hpp"
#include "ensbench/ensemble.hpp"
#include "ensbench/registry.hpp"

namespace ensbench::bench {

struct GridConfig {
    std::vector<registry::RegressorSpec> bases;     // canonical row order
    std::vector<ensemble::EnsembleMode> modes;      // [single, bagging, additive]
    int repeats = 5;
    double test_fraction = 0.5;
    std::uint64_t master_seed = 0;
    std::optional<data::FeatureSelection> feature_selection;
    int n_threads = 1;

    static GridConfig benchmark_defaults();
};

struct RmseTable {
    std::vector<std::string> row_labels;  // "BG-Lasso Regression", ...
    std::vector<std::string> col_labels;  // dataset names
    Matrix cells;                         // mean test RMSE; +inf sentinel on fit failure
    // repeat_values[row][col] holds the per-repeat RMSEs behind each cell.
    std::vector<std::vector<std::vector<double>>> repeat_values;
    // (row, col) pairs whose fit failed.
    std::vector<std::pair<int, int>> sentinel_cells;
    std::vector<std::uint64_t> cell_seeds;  // flattened (row-major over row, col, repeat)
};

struct RankTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Eigen::MatrixXi ranks;  // 0 (best) .. K-1 per column
    Vector row_mean;
    Vector row_std;
};

struct SummaryTable {
    std::vector<std::string> base_labels;
    // columns: BG, AR, Single, Avg; plus a final Avg row in `avg_row`
    Matrix cells;   // n_bases x 3 (BG, AR, Single)
    Vector row_avg;
    Vector col_avg;  // BG, AR, Single
    double grand_avg = 0.0;
};

struct BestEntry {
    std::string dataset;
    std::string algorithm;
    double rmse = 0.0;
};

double rmse(const Vector& predicted, const Vector& actual);

std::pair<data::Dataset, data::Dataset> shuffle_split(const data::Dataset& dataset,
                                                      double test_fraction, std::uint64_t seed);

RmseTable run_grid(const GridConfig& config, const std::vector<data::Dataset>& datasets);

RankTable rank_table(const RmseTable& rmse_table);

SummaryTable summarize(const RankTable& ranks, const std::vector<registry::RegressorSpec>& bases,
                       const std::vector<ensemble::EnsembleMode>& modes);

std::vector<BestEntry> best_per_dataset(const RmseTable& rmse_table);

std::string mode_prefix(const ensemble::EnsembleMode& mode);  // "", "BG-", "AR-"
std::string row_label(const ensemble::EnsembleMode& mode, const registry::RegressorSpec& base);

}  // namespace ensbench::bench
