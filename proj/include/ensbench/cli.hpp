#pragma once

#include <string>
#include <vector>

namespace ensbench::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunOptions {
    std::string config_path;
    std::string out_dir;
    int threads = 1;
    std::vector<std::string> modes;  // empty = config / defaults; "single","bg","ar"
};

// Exit codes: 0 success, 1 fatal error, 2 success with sentinel cells.
int cmd_run(const RunOptions& options);
int cmd_rank(const std::string& rmse_csv, const std::string& out_dir);
int cmd_cluster(const std::string& table_csv, const std::string& axis, const std::string& out_dir,
                const std::string& linkage, bool standardize);
int cmd_selftest();
int cmd_synth(const std::string& out_dir, std::uint64_t seed);

}  // namespace ensbench::cli
