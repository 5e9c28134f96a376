#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nsp {

/// One inequality verdict. Hard verdicts gate the `verify` exit code; soft
/// ones are informational (unspecified constants, scale-dependent gaps).
struct Verdict {
    std::string name;
    bool applicable = true;
    bool hard = true;
    bool pass = true;
    double value = 0.0;
    std::string detail;
};

/// Runs the full inequality suite over a `simulate` output directory
/// (timeseries.csv, snapshots/, config.txt).
std::vector<Verdict> verify_run_dir(const std::filesystem::path& run_dir);

bool all_hard_pass(const std::vector<Verdict>& verdicts);

} // namespace nsp
