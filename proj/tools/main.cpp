#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ensbench/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ensbench: regression ensemble benchmarking toolkit"};
    app.require_subcommand(1);

    ensbench::cli::RunOptions run_options;
    std::string modes_arg;
    auto* run = app.add_subcommand("run", "Run the benchmark grid from a config or manifest");
    run->add_option("--config", run_options.config_path, "Config JSON (or a previous manifest.json)")
        ->required();
    run->add_option("--out", run_options.out_dir, "Output directory")->required();
    run->add_option("--threads", run_options.threads, "Worker thread count");
    run->add_option("--modes", modes_arg, "Comma-separated mode filter: single,bg,ar");

    std::string rank_rmse, rank_out;
    auto* rank = app.add_subcommand("rank", "Recompute rank table from an rmse.csv");
    rank->add_option("--rmse", rank_rmse, "Input rmse.csv")->required();
    rank->add_option("--out", rank_out, "Output directory")->required();

    std::string cl_table, cl_axis = "algorithms", cl_out, cl_linkage = "average";
    bool cl_standardize = false;
    auto* clus = app.add_subcommand("cluster", "Cluster the rows or columns of a table");
    clus->add_option("--table", cl_table, "Input table CSV")->required();
    clus->add_option("--axis", cl_axis, "algorithms (rows) or datasets (columns)");
    clus->add_option("--out", cl_out, "Output directory")->required();
    clus->add_option("--linkage", cl_linkage, "average, complete or single");
    clus->add_flag("--standardize", cl_standardize, "Standardize columns before clustering");

    auto* selftest = app.add_subcommand("selftest", "Run built-in sanity checks");

    std::string synth_out;
    std::uint64_t synth_seed = 0;
    auto* synth = app.add_subcommand("synth", "Generate synthetic datasets plus a config");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--seed", synth_seed, "Generator seed");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (!modes_arg.empty()) {
            std::size_t start = 0;
            while (start <= modes_arg.size()) {
                const std::size_t comma = modes_arg.find(',', start);
                const std::size_t end = comma == std::string::npos ? modes_arg.size() : comma;
                if (end > start) run_options.modes.push_back(modes_arg.substr(start, end - start));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
        return ensbench::cli::cmd_run(run_options);
    }
    if (rank->parsed()) return ensbench::cli::cmd_rank(rank_rmse, rank_out);
    if (clus->parsed())
        return ensbench::cli::cmd_cluster(cl_table, cl_axis, cl_out, cl_linkage, cl_standardize);
    if (selftest->parsed()) return ensbench::cli::cmd_selftest();
    if (synth->parsed()) return ensbench::cli::cmd_synth(synth_out, synth_seed);
    return 1;
}
