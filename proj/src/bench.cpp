#include "ensbench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace ensbench::bench {

GridConfig GridConfig::benchmark_defaults() {
    GridConfig config;
    for (registry::BaseAlgorithm algo : registry::all_base_algorithms())
        config.bases.push_back({algo});
    ensemble::EnsembleMode single;
    single.kind = ensemble::ModeKind::single;
    ensemble::EnsembleMode bagging;
    bagging.kind = ensemble::ModeKind::bagging;
    bagging.n_members = 10;
    ensemble::EnsembleMode additive;
    additive.kind = ensemble::ModeKind::additive_regression;
    additive.n_rounds = 10;
    config.modes = {single, bagging, additive};
    config.repeats = 5;
    config.test_fraction = 0.5;
    return config;
}

double rmse(const Vector& predicted, const Vector& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("rmse: length mismatch");
    if (predicted.size() == 0) throw std::invalid_argument("rmse: empty vectors");
    return std::sqrt((predicted - actual).squaredNorm() / predicted.size());
}

std::pair<data::Dataset, data::Dataset> shuffle_split(const data::Dataset& dataset,
                                                      double test_fraction,
                                                      std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("shuffle_split: test_fraction must be in (0,1)");
    const int n = static_cast<int>(dataset.n_samples());
    const int n_train = static_cast<int>(std::ceil(n * (1.0 - test_fraction)));
    if (n_train < 1 || n_train >= n)
        throw std::invalid_argument("shuffle_split: split leaves an empty part");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto take = [&](int begin, int count, const std::string& suffix) {
        data::Dataset part;
        part.name = dataset.name + suffix;
        part.provenance = dataset.provenance;
        part.feature_names = dataset.feature_names;
        part.features.resize(count, dataset.n_features());
        part.target.resize(count);
        for (int i = 0; i < count; ++i) {
            part.features.row(i) = dataset.features.row(order[begin + i]);
            part.target[i] = dataset.target[order[begin + i]];
        }
        return part;
    };
    return {take(0, n_train, "_train"), take(n_train, n - n_train, "_test")};
}

std::string mode_prefix(const ensemble::EnsembleMode& mode) {
    switch (mode.kind) {
        case ensemble::ModeKind::single: return "";
        case ensemble::ModeKind::bagging: return "BG-";
        case ensemble::ModeKind::additive_regression: return "AR-";
    }
    throw std::logic_error("mode_prefix: unknown kind");
}

std::string row_label(const ensemble::EnsembleMode& mode, const registry::RegressorSpec& base) {
    return mode_prefix(mode) + registry::display_name(base.algo);
}

RmseTable run_grid(const GridConfig& config, const std::vector<data::Dataset>& datasets) {
    if (datasets.empty()) throw std::invalid_argument("run_grid: no datasets");
    if (config.bases.empty() || config.modes.empty())
        throw std::invalid_argument("run_grid: empty grid");
    if (config.repeats < 1) throw std::invalid_argument("run_grid: repeats must be >= 1");

    std::vector<data::Dataset> active;
    for (const data::Dataset& ds : datasets) {
        ds.validate();
        active.push_back(config.feature_selection
                             ? data::select_features(ds, *config.feature_selection)
                             : ds);
    }

    const int n_bases = static_cast<int>(config.bases.size());
    const int n_modes = static_cast<int>(config.modes.size());
    const int n_rows = n_bases * n_modes;
    const int n_cols = static_cast<int>(active.size());

    RmseTable table;
    for (int b = 0; b < n_bases; ++b)
        for (int m = 0; m < n_modes; ++m)
            table.row_labels.push_back(row_label(config.modes[m], config.bases[b]));
    for (const data::Dataset& ds : active) table.col_labels.push_back(ds.name);
    table.cells.resize(n_rows, n_cols);
    table.repeat_values.assign(n_rows, std::vector<std::vector<double>>(
                                           n_cols, std::vector<double>(config.repeats, 0.0)));
    table.cell_seeds.assign(static_cast<std::size_t>(n_rows) * n_cols * config.repeats, 0);

    // grid cells are independent; per-cell derived seeds keep the result
    // identical for any scheduling
    struct Cell {
        int b, m, col;
    };
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(n_rows) * n_cols);
    for (int b = 0; b < n_bases; ++b)
        for (int m = 0; m < n_modes; ++m)
            for (int col = 0; col < n_cols; ++col) cells.push_back({b, m, col});

    const auto run_cell = [&](const Cell& cell) {
        const int row = cell.b * n_modes + cell.m;
        const data::Dataset& ds = active[cell.col];
        double sum = 0.0;
        bool failed = false;
        for (int rep = 0; rep < config.repeats; ++rep) {
            const std::uint64_t cell_seed =
                derive_seed(config.master_seed, static_cast<std::uint64_t>(cell.col),
                            static_cast<std::uint64_t>(cell.m),
                            static_cast<std::uint64_t>(cell.b),
                            static_cast<std::uint64_t>(rep));
            const std::size_t seed_index =
                (static_cast<std::size_t>(row) * n_cols + cell.col) * config.repeats + rep;
            table.cell_seeds[seed_index] = cell_seed;
            double value = std::numeric_limits<double>::infinity();
            try {
                auto [train, test] =
                    shuffle_split(ds, config.test_fraction, derive_seed(cell_seed, 0x5b17));
                ensemble::EnsembleMode mode = config.modes[cell.m];
                mode.seed = derive_seed(cell_seed, 0xf17);
                auto model =
                    ensemble::fit_mode(config.bases[cell.b], mode, train.features, train.target);
                Vector pred = model->predict(test.features);
                if (pred.allFinite()) {
                    value = rmse(pred, test.target);
                } else {
                    failed = true;
                }
            } catch (const std::exception&) {
                failed = true;
            }
            table.repeat_values[row][cell.col][rep] = value;
            sum += value;
        }
        table.cells(row, cell.col) =
            failed ? std::numeric_limits<double>::infinity() : sum / config.repeats;
    };

    const int n_threads = std::max(1, config.n_threads);
    if (n_threads == 1) {
        for (const Cell& cell : cells) run_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (int t = 0; t < n_threads; ++t) {
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t idx = next.fetch_add(1);
                    if (idx >= cells.size()) break;
                    run_cell(cells[idx]);
                }
            });
        }
        for (std::thread& w : workers) w.join();
    }

    for (int row = 0; row < n_rows; ++row)
        for (int col = 0; col < n_cols; ++col)
            if (std::isinf(table.cells(row, col))) table.sentinel_cells.emplace_back(row, col);
    return table;
}

RankTable rank_table(const RmseTable& rmse_table) {
    const int n_rows = static_cast<int>(rmse_table.row_labels.size());
    const int n_cols = static_cast<int>(rmse_table.col_labels.size());
    if (n_rows < 1 || n_cols < 1) throw std::invalid_argument("rank_table: empty table");

    RankTable out;
    out.row_labels = rmse_table.row_labels;
    out.col_labels = rmse_table.col_labels;
    out.ranks.resize(n_rows, n_cols);
    for (int col = 0; col < n_cols; ++col) {
        std::vector<int> order(n_rows);
        std::iota(order.begin(), order.end(), 0);
        // ties (including +inf sentinels) break by grid row order
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return rmse_table.cells(a, col) < rmse_table.cells(b, col);
        });
        for (int pos = 0; pos < n_rows; ++pos) out.ranks(order[pos], col) = pos;
    }
    out.row_mean.resize(n_rows);
    out.row_std.resize(n_rows);
    for (int row = 0; row < n_rows; ++row) {
        const Eigen::ArrayXd vals = out.ranks.row(row).cast<double>().array();
        const double mean = vals.mean();
        out.row_mean[row] = mean;
        out.row_std[row] = std::sqrt((vals - mean).square().mean());
    }
    return out;
}

SummaryTable summarize(const RankTable& ranks, const std::vector<registry::RegressorSpec>& bases,
                       const std::vector<ensemble::EnsembleMode>& modes) {
    const int n_bases = static_cast<int>(bases.size());
    const int n_modes = static_cast<int>(modes.size());
    if (static_cast<int>(ranks.row_labels.size()) != n_bases * n_modes)
        throw std::invalid_argument("summarize: rank table does not cover the full grid");

    int idx_bg = -1, idx_ar = -1, idx_single = -1;
    for (int m = 0; m < n_modes; ++m) {
        switch (modes[m].kind) {
            case ensemble::ModeKind::bagging: idx_bg = m; break;
            case ensemble::ModeKind::additive_regression: idx_ar = m; break;
            case ensemble::ModeKind::single: idx_single = m; break;
        }
    }
    if (idx_bg < 0 || idx_ar < 0 || idx_single < 0)
        throw std::invalid_argument("summarize: missing grid cell (need single, BG and AR modes)");

    SummaryTable out;
    out.cells.resize(n_bases, 3);
    out.row_avg.resize(n_bases);
    const int mode_order[3] = {idx_bg, idx_ar, idx_single};
    for (int b = 0; b < n_bases; ++b) {
        out.base_labels.push_back(registry::display_name(bases[b].algo));
        for (int c = 0; c < 3; ++c) {
            const int row = b * n_modes + mode_order[c];
            out.cells(b, c) = ranks.ranks.row(row).cast<double>().mean();
        }
        out.row_avg[b] = out.cells.row(b).mean();
    }
    out.col_avg = out.cells.colwise().mean();
    out.grand_avg = out.row_avg.mean();
    return out;
}

std::vector<BestEntry> best_per_dataset(const RmseTable& rmse_table) {
    std::vector<BestEntry> out;
    const int n_rows = static_cast<int>(rmse_table.row_labels.size());
    for (std::size_t col = 0; col < rmse_table.col_labels.size(); ++col) {
        int best = 0;
        for (int row = 1; row < n_rows; ++row) {
            if (rmse_table.cells(row, static_cast<int>(col)) <
                rmse_table.cells(best, static_cast<int>(col)))
                best = row;
        }
        out.push_back({rmse_table.col_labels[col], rmse_table.row_labels[best],
                       rmse_table.cells(best, static_cast<int>(col))});
    }
    return out;
}

}  // namespace ensbench::bench
