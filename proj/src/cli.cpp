#include "ensbench/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ensbench/bench.hpp"
#include "ensbench/cluster.hpp"
#include "ensbench/data.hpp"

namespace ensbench::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string rmse_csv(const bench::RmseTable& table) {
    std::ostringstream out;
    out << "algorithm";
    for (const auto& c : table.col_labels) out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out << table.row_labels[r];
        for (std::size_t c = 0; c < table.col_labels.size(); ++c)
            out << ',' << fmt(table.cells(static_cast<int>(r), static_cast<int>(c)));
        out << '\n';
    }
    return out.str();
}

std::string ranks_csv(const bench::RankTable& table) {
    std::ostringstream out;
    out << "algorithm";
    for (const auto& c : table.col_labels) out << ',' << c;
    out << ",mean,std\n";
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out << table.row_labels[r];
        for (std::size_t c = 0; c < table.col_labels.size(); ++c)
            out << ',' << table.ranks(static_cast<int>(r), static_cast<int>(c));
        out << ',' << fmt(table.row_mean[static_cast<int>(r)]) << ','
            << fmt(table.row_std[static_cast<int>(r)]) << '\n';
    }
    return out.str();
}

std::string summary_md(const bench::SummaryTable& table) {
    std::ostringstream out;
    out << "| Base algorithm | BG | AR | Single | Avg |\n";
    out << "|---|---|---|---|---|\n";
    for (std::size_t r = 0; r < table.base_labels.size(); ++r) {
        out << "| " << table.base_labels[r];
        for (int c = 0; c < 3; ++c) out << " | " << fmt2(table.cells(static_cast<int>(r), c));
        out << " | " << fmt2(table.row_avg[static_cast<int>(r)]) << " |\n";
    }
    out << "| Avg";
    for (int c = 0; c < 3; ++c) out << " | " << fmt2(table.col_avg[c]);
    out << " | " << fmt2(table.grand_avg) << " |\n";
    return out.str();
}

std::string best_csv(const std::vector<bench::BestEntry>& entries) {
    std::ostringstream out;
    out << "dataset,algorithm,rmse\n";
    for (const auto& e : entries) out << e.dataset << ',' << e.algorithm << ',' << fmt(e.rmse) << '\n';
    return out.str();
}

struct ParsedConfig {
    std::vector<data::Dataset> datasets;
    bench::GridConfig grid;
    ensemble::ArCombination ar_combination = ensemble::ArCombination::mean;
    cluster::Linkage linkage = cluster::Linkage::average;
    bool cluster_standardize = false;
    ordered_json snapshot;  // the effective config, written to the manifest
};

cluster::Linkage linkage_from_name(const std::string& name) {
    if (name == "average") return cluster::Linkage::average;
    if (name == "complete") return cluster::Linkage::complete;
    if (name == "single") return cluster::Linkage::single;
    throw std::invalid_argument("unknown linkage: " + name);
}

ensemble::EnsembleMode mode_from_name(const std::string& name) {
    ensemble::EnsembleMode mode;
    if (name == "single") {
        mode.kind = ensemble::ModeKind::single;
    } else if (name == "bg" || name == "bagging") {
        mode.kind = ensemble::ModeKind::bagging;
        mode.n_members = 10;
    } else if (name == "ar" || name == "additive_regression") {
        mode.kind = ensemble::ModeKind::additive_regression;
        mode.n_rounds = 10;
    } else {
        throw std::invalid_argument("unknown mode: " + name);
    }
    return mode;
}

std::string mode_to_name(const ensemble::EnsembleMode& mode) {
    switch (mode.kind) {
        case ensemble::ModeKind::single: return "single";
        case ensemble::ModeKind::bagging: return "bg";
        case ensemble::ModeKind::additive_regression: return "ar";
    }
    return "?";
}

ParsedConfig parse_config(const std::string& config_path,
                          const std::vector<std::string>& mode_filter) {
    json root = json::parse(read_file(config_path));
    if (root.contains("tool_version") && root.contains("config")) {
        root = root["config"];  // replaying a run manifest
    }

    ParsedConfig parsed;
    parsed.grid = bench::GridConfig::benchmark_defaults();

    if (!root.contains("datasets") || !root["datasets"].is_array() ||
        root["datasets"].empty()) {
        throw std::invalid_argument("no datasets configured");
    }
    for (const auto& entry : root["datasets"]) {
        parsed.datasets.push_back(data::load_dataset(entry.at("path").get<std::string>(),
                                               entry.value("target", std::string("target")),
                                               entry.at("name").get<std::string>()));
    }

    if (root.contains("bases")) {
        parsed.grid.bases.clear();
        for (const auto& name : root["bases"]) {
            registry::RegressorSpec spec;
            const std::string n = name.get<std::string>();
            if (n == "fail_hook") {
                spec.force_fail = true;
            } else {
                spec.algo = registry::algorithm_from_config_name(n);
            }
            parsed.grid.bases.push_back(spec);
        }
    }
    if (root.contains("modes")) {
        parsed.grid.modes.clear();
        for (const auto& name : root["modes"])
            parsed.grid.modes.push_back(mode_from_name(name.get<std::string>()));
    }
    if (!mode_filter.empty()) {
        parsed.grid.modes.clear();
        for (const auto& name : mode_filter) parsed.grid.modes.push_back(mode_from_name(name));
    }
    parsed.grid.repeats = root.value("repeats", 5);
    parsed.grid.test_fraction = root.value("test_fraction", 0.5);
    parsed.grid.master_seed = root.value("master_seed", std::uint64_t{0});
    if (const char* env = std::getenv("ENSBENCH_SEED")) {
        parsed.grid.master_seed = std::strtoull(env, nullptr, 10);
    }
    if (root.contains("feature_selection") && !root["feature_selection"].is_null()) {
        data::FeatureSelection sel;
        sel.k = root["feature_selection"].value("k", 10);
        sel.seed = root["feature_selection"].value("seed", std::uint64_t{0});
        parsed.grid.feature_selection = sel;
    }
    const std::string comb = root.value("ar_combination", std::string("mean"));
    parsed.ar_combination =
        comb == "median" ? ensemble::ArCombination::median : ensemble::ArCombination::mean;
    for (auto& mode : parsed.grid.modes) mode.combination = parsed.ar_combination;
    if (root.contains("cluster")) {
        parsed.linkage =
            linkage_from_name(root["cluster"].value("linkage", std::string("average")));
        parsed.cluster_standardize = root["cluster"].value("standardize", false);
    }

    // effective-config snapshot for the manifest
    ordered_json snap;
    snap["datasets"] = root["datasets"];
    snap["bases"] = ordered_json::array();
    for (const auto& b : parsed.grid.bases)
        snap["bases"].push_back(b.force_fail ? "fail_hook" : registry::config_name(b.algo));
    snap["modes"] = ordered_json::array();
    for (const auto& m : parsed.grid.modes) snap["modes"].push_back(mode_to_name(m));
    snap["repeats"] = parsed.grid.repeats;
    snap["test_fraction"] = parsed.grid.test_fraction;
    snap["master_seed"] = parsed.grid.master_seed;
    if (parsed.grid.feature_selection) {
        snap["feature_selection"] = {{"k", parsed.grid.feature_selection->k},
                                     {"seed", parsed.grid.feature_selection->seed}};
    }
    snap["ar_combination"] = comb;
    snap["cluster"] = {{"linkage", root.contains("cluster")
                                       ? root["cluster"].value("linkage", std::string("average"))
                                       : "average"},
                       {"standardize", parsed.cluster_standardize}};
    parsed.snapshot = std::move(snap);
    return parsed;
}

struct FamilyOutputs {
    std::vector<std::string> files;
    std::vector<std::pair<int, int>> sentinels;
    std::vector<std::uint64_t> cell_seeds;
};

FamilyOutputs run_family(const ParsedConfig& parsed, const bench::GridConfig& grid,
                         const fs::path& out_dir, const std::string& suffix) {
    bench::RmseTable rmse = bench::run_grid(grid, parsed.datasets);
    bench::RankTable ranks = bench::rank_table(rmse);

    FamilyOutputs outputs;
    const auto emit = [&](const std::string& stem, const std::string& ext,
                          const std::string& content) {
        const std::string fname = stem + suffix + ext;
        write_file(out_dir / fname, content);
        outputs.files.push_back(fname);
    };
    emit("rmse", ".csv", rmse_csv(rmse));
    emit("ranks", ".csv", ranks_csv(ranks));
    emit("best", ".csv", best_csv(bench::best_per_dataset(rmse)));
    bool full_grid = true;
    try {
        emit("summary", ".md", summary_md(bench::summarize(ranks, grid.bases, grid.modes)));
    } catch (const std::invalid_argument&) {
        full_grid = false;  // e.g. --modes single: no summary pivot
    }
    (void)full_grid;

    if (rmse.row_labels.size() >= 2 && rmse.col_labels.size() >= 1) {
        cluster::Dendrogram algs =
            cluster::hierarchical_cluster(rmse.cells, rmse.row_labels, parsed.linkage,
                                          parsed.cluster_standardize);
        emit("dendrogram_algorithms", ".dot", cluster::to_dot(algs));
        emit("dendrogram_algorithms", ".json", cluster::to_json(algs));
    }
    if (rmse.col_labels.size() >= 2) {
        cluster::Dendrogram dsets =
            cluster::hierarchical_cluster(rmse.cells.transpose(), rmse.col_labels,
                                          parsed.linkage, parsed.cluster_standardize);
        emit("dendrogram_datasets", ".dot", cluster::to_dot(dsets));
        emit("dendrogram_datasets", ".json", cluster::to_json(dsets));
    }
    outputs.sentinels = rmse.sentinel_cells;
    outputs.cell_seeds = rmse.cell_seeds;
    return outputs;
}

std::pair<std::vector<std::string>, std::vector<double>> read_table_csv(const fs::path& path,
                                                                        std::vector<std::string>& cols,
                                                                        int& n_rows) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) header.push_back(field);
    }
    cols.assign(header.begin() + 1, header.end());
    std::vector<std::string> rows;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        rows.push_back(field);
        while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
    }
    n_rows = static_cast<int>(rows.size());
    return {rows, values};
}

}  // namespace

int cmd_run(const RunOptions& options) {
    try {
        ParsedConfig parsed = parse_config(options.config_path, options.modes);
        fs::create_directories(options.out_dir);
        const fs::path out_dir(options.out_dir);

        bench::GridConfig original = parsed.grid;
        original.feature_selection.reset();
        original.n_threads = options.threads;

        FamilyOutputs outputs = run_family(parsed, original, out_dir, "");
        FamilyOutputs reduced_outputs;
        if (parsed.grid.feature_selection) {
            bench::GridConfig reduced = parsed.grid;
            reduced.n_threads = options.threads;
            reduced_outputs = run_family(parsed, reduced, out_dir, "_reduced");
        }

        ordered_json manifest;
        manifest["tool_version"] = kToolVersion;
        manifest["master_seed"] = parsed.grid.master_seed;
        manifest["config"] = parsed.snapshot;
        manifest["datasets"] = ordered_json::array();
        for (const auto& ds : parsed.datasets) {
            manifest["datasets"].push_back({{"name", ds.name},
                                            {"n_samples", ds.n_samples()},
                                            {"n_features", ds.n_features()},
                                            {"provenance", ds.provenance}});
        }
        manifest["cell_seeds"] = {{"original", outputs.cell_seeds}};
        if (parsed.grid.feature_selection)
            manifest["cell_seeds"]["reduced"] = reduced_outputs.cell_seeds;
        auto sentinel_list = ordered_json::array();
        for (const auto& [r, c] : outputs.sentinels)
            sentinel_list.push_back({{"family", "original"}, {"row", r}, {"col", c}});
        for (const auto& [r, c] : reduced_outputs.sentinels)
            sentinel_list.push_back({{"family", "reduced"}, {"row", r}, {"col", c}});
        manifest["sentinel_cells"] = sentinel_list;
        ordered_json digests;
        std::vector<std::string> all_files = outputs.files;
        all_files.insert(all_files.end(), reduced_outputs.files.begin(),
                         reduced_outputs.files.end());
        for (const auto& f : all_files) digests[f] = fnv1a_digest(read_file(out_dir / f));
        manifest["output_digests"] = digests;
        write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

        const bool has_sentinels =
            !outputs.sentinels.empty() || !reduced_outputs.sentinels.empty();
        return has_sentinels ? 2 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_rank(const std::string& rmse_path, const std::string& out_dir) {
    try {
        bench::RmseTable table;
        int n_rows = 0;
        auto [rows, values] = read_table_csv(rmse_path, table.col_labels, n_rows);
        table.row_labels = rows;
        const int n_cols = static_cast<int>(table.col_labels.size());
        table.cells.resize(n_rows, n_cols);
        for (int r = 0; r < n_rows; ++r)
            for (int c = 0; c < n_cols; ++c)
                table.cells(r, c) = values[static_cast<std::size_t>(r) * n_cols + c];
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "ranks.csv", ranks_csv(bench::rank_table(table)));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_cluster(const std::string& table_csv, const std::string& axis, const std::string& out_dir,
                const std::string& linkage, bool standardize) {
    try {
        std::vector<std::string> cols;
        int n_rows = 0;
        auto [rows, values] = read_table_csv(table_csv, cols, n_rows);
        const int n_cols = static_cast<int>(cols.size());
        Matrix cells(n_rows, n_cols);
        for (int r = 0; r < n_rows; ++r)
            for (int c = 0; c < n_cols; ++c)
                cells(r, c) = values[static_cast<std::size_t>(r) * n_cols + c];

        Matrix points;
        std::vector<std::string> labels;
        std::string stem;
        if (axis == "algorithms") {
            points = cells;
            labels = rows;
            stem = "dendrogram_algorithms";
        } else if (axis == "datasets") {
            points = cells.transpose();
            labels = cols;
            stem = "dendrogram_datasets";
        } else {
            throw std::invalid_argument("axis must be algorithms or datasets");
        }
        cluster::Dendrogram d = cluster::hierarchical_cluster(
            points, labels, linkage_from_name(linkage), standardize);
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / (stem + ".dot"), cluster::to_dot(d));
        write_file(fs::path(out_dir) / (stem + ".json"), cluster::to_json(d));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_selftest() {
    int failures = 0;
    const auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };
    try {
        check("seed derivation is deterministic",
              derive_seed(42, 1, 2, 3) == derive_seed(42, 1, 2, 3) &&
                  derive_seed(42, 1, 2, 3) != derive_seed(42, 1, 2, 4));

        Vector p(3), a(3);
        p << 1, 2, 3;
        a << 1, 2, 5;
        check("rmse of (0,0,2) residuals", std::abs(bench::rmse(p, a) - 2.0 / std::sqrt(3.0)) <
                                               1e-15);

        data::Dataset ds = data::make_synthetic("selftest", 80, 12, 7);
        registry::RegressorSpec base;
        base.algo = registry::BaseAlgorithm::decision_tree;
        ensemble::EnsembleMode bg = mode_from_name("bg");
        bg.seed = 11;
        auto m1 = ensemble::fit_mode(base, bg, ds.features, ds.target);
        auto m2 = ensemble::fit_mode(base, bg, ds.features, ds.target);
        check("bagging refit reproduces predictions",
              m1->predict(ds.features) == m2->predict(ds.features));

        Matrix pts(3, 1);
        pts << 0.0, 1.0, 10.0;
        cluster::Dendrogram dend =
            cluster::hierarchical_cluster(pts, {"a", "b", "c"}, cluster::Linkage::average, false);
        check("3-point average-linkage heights",
              dend.merges.size() == 2 && dend.merges[0].height == 1.0 &&
                  dend.merges[1].height == 9.5);
        check("dendrogram json round trip",
              cluster::to_json(cluster::from_json(cluster::to_json(dend))) ==
                  cluster::to_json(dend));
    } catch (const std::exception& e) {
        std::cout << "FAIL selftest aborted: " << e.what() << '\n';
        ++failures;
    }
    return failures == 0 ? 0 : 1;
}

int cmd_synth(const std::string& out_dir, std::uint64_t seed) {
    try {
        fs::create_directories(out_dir);
        // shapes mirror the benchmark's four descriptor matrices
        const struct {
            const char* name;
            int n;
            int d;
        } shapes[] = {
            {"polymer_133", 133, 836},
            {"alkaloid_53", 53, 2221},
            {"alkaloid_103", 103, 355},
            {"polymer_150", 150, 474},
        };
        ordered_json config;
        config["datasets"] = ordered_json::array();
        int idx = 0;
        for (const auto& s : shapes) {
            data::Dataset ds =
                data::make_synthetic(s.name, s.n, s.d, derive_seed(seed, idx++));
            const fs::path path = fs::path(out_dir) / (std::string(s.name) + ".csv");
            data::save_dataset(ds, path.string());
            config["datasets"].push_back(
                {{"path", path.string()}, {"target", "target"}, {"name", s.name}});
        }
        config["repeats"] = 5;
        config["test_fraction"] = 0.5;
        config["master_seed"] = seed;
        config["feature_selection"] = {{"k", 10}, {"seed", seed}};
        write_file(fs::path(out_dir) / "config.json", config.dump(2) + "\n");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace ensbench::cli
