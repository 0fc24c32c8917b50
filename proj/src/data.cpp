#include "ensbench/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace ensbench::data {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, int file_line, const std::string& column) {
    const std::string cell = trim(raw);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != cell.size() || cell.empty()) {
        throw std::invalid_argument("non-numeric cell \"" + cell + "\" at row " +
                                    std::to_string(file_line) + ", column \"" + column + "\"");
    }
    return value;
}

}  // namespace

void Dataset::validate() const {
    if (n_samples() < 2) throw std::invalid_argument(name + ": fewer than 2 samples");
    if (n_features() < 1) throw std::invalid_argument(name + ": no features");
    if (target.size() != n_samples())
        throw std::invalid_argument(name + ": target length does not match sample count");
    if (static_cast<Eigen::Index>(feature_names.size()) != n_features())
        throw std::invalid_argument(name + ": feature name count mismatch");
    if (!features.allFinite() || !target.allFinite())
        throw std::invalid_argument(name + ": non-finite entries");
    std::unordered_set<std::string> seen;
    for (const auto& fname : feature_names) {
        if (!seen.insert(fname).second)
            throw std::invalid_argument(name + ": duplicate feature name \"" + fname + "\"");
    }
}

Dataset load_dataset(const std::string& path, const std::string& target_column,
                     const std::string& name) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open dataset file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);

    int target_idx = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == target_column) {
            if (target_idx >= 0)
                throw std::invalid_argument(path + ": duplicate target column \"" +
                                            target_column + "\"");
            target_idx = static_cast<int>(j);
        }
    }
    if (target_idx < 0)
        throw std::invalid_argument(path + ": target column not found: \"" + target_column +
                                    "\"");

    std::vector<std::vector<double>> rows;
    int file_line = 1;
    while (std::getline(in, line)) {
        ++file_line;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::invalid_argument(path + ": row " + std::to_string(file_line) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(header.size()));
        std::vector<double> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j)
            row[j] = parse_cell(fields[j], file_line, header[j]);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2)
        throw std::invalid_argument(path + ": fewer than 2 data rows");

    Dataset ds;
    ds.name = name;
    ds.provenance = path;
    const int n = static_cast<int>(rows.size());
    const int d = static_cast<int>(header.size()) - 1;
    ds.features.resize(n, d);
    ds.target.resize(n);
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (static_cast<int>(j) != target_idx) ds.feature_names.push_back(header[j]);
    }
    for (int i = 0; i < n; ++i) {
        int col = 0;
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (static_cast<int>(j) == target_idx) {
                ds.target[i] = rows[i][j];
            } else {
                ds.features(i, col++) = rows[i][j];
            }
        }
    }
    ds.validate();
    return ds;
}

void save_dataset(const Dataset& dataset, const std::string& path,
                  const std::string& target_column) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    char buf[64];
    for (std::size_t j = 0; j < dataset.feature_names.size(); ++j) {
        out << dataset.feature_names[j] << ',';
    }
    out << target_column << '\n';
    for (Eigen::Index i = 0; i < dataset.n_samples(); ++i) {
        for (Eigen::Index j = 0; j < dataset.n_features(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", dataset.features(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", dataset.target[i]);
        out << buf << '\n';
    }
}

Vector rf_importances(const Dataset& dataset, const FeatureSelection& selection) {
    tree::TreeEnsembleSpec forest = selection.forest_params;
    forest.seed = selection.seed;
    return tree::ensemble_importances(forest, dataset.features, dataset.target);
}

Dataset select_features(const Dataset& dataset, const FeatureSelection& selection) {
    if (selection.k < 1) throw std::invalid_argument("select_features: k must be >= 1");
    if (selection.k > dataset.n_features())
        throw std::invalid_argument("select_features: k exceeds feature count");

    std::vector<int> kept;
    const double target_variance =
        (dataset.target.array() - dataset.target.mean()).square().sum();
    if (target_variance <= 0.0) {
        std::cerr << "warning: " << dataset.name
                  << ": constant target, importances undefined; keeping the first "
                  << selection.k << " columns\n";
        kept.resize(selection.k);
        std::iota(kept.begin(), kept.end(), 0);
    } else {
        Vector importances = rf_importances(dataset, selection);
        std::vector<int> order(dataset.n_features());
        std::iota(order.begin(), order.end(), 0);
        // ties keep the lower original column index
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return importances[a] > importances[b]; });
        kept.assign(order.begin(), order.begin() + selection.k);
        std::sort(kept.begin(), kept.end());  // preserve original column order
    }

    Dataset out;
    out.name = dataset.name + "_reduced";
    out.provenance = dataset.provenance;
    out.target = dataset.target;
    out.features.resize(dataset.n_samples(), selection.k);
    for (std::size_t j = 0; j < kept.size(); ++j) {
        out.features.col(static_cast<Eigen::Index>(j)) = dataset.features.col(kept[j]);
        out.feature_names.push_back(dataset.feature_names[kept[j]]);
    }
    out.validate();
    return out;
}

Dataset make_synthetic(const std::string& name, int n_samples, int n_features,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Dataset ds;
    ds.name = name;
    ds.provenance = "synthetic";
    ds.features.resize(n_samples, n_features);
    ds.target.resize(n_samples);
    for (int i = 0; i < n_samples; ++i)
        for (int j = 0; j < n_features; ++j) ds.features(i, j) = normal(rng);
    // smooth low-dimensional signal plus noise; enough structure for trees
    // and linear models alike, enough noise that averaging helps
    for (int i = 0; i < n_samples; ++i) {
        const auto& x = ds.features;
        double y = 3.0 * std::sin(x(i, 0)) + 2.0 * x(i, 1 % n_features) -
                   1.5 * x(i, 2 % n_features) * x(i, 3 % n_features) +
                   0.8 * std::abs(x(i, 4 % n_features));
        ds.target[i] = y + 0.5 * normal(rng);
    }
    for (int j = 0; j < n_features; ++j) ds.feature_names.push_back("d" + std::to_string(j));
    ds.validate();
    return ds;
}

}  // namespace ensbench::data
