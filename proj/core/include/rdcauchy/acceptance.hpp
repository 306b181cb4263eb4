#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdcauchy/config.hpp"

namespace rdcauchy {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;  // 0: no runtime bound
};

struct AcceptanceOptions {
    ExperimentConfig config;  // grid, iteration policy, bumps, threads
    std::vector<int> only;    // empty: all criteria 1..8
    std::optional<std::filesystem::path> out_dir;  // CSVs of the sweeps, when set
    std::ostream* progress = nullptr;
};

// Each criterion prints nothing; results come back in id order. Criterion 8
// inspects the cells run by criteria 5-7 and fails when none were run.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

std::string format_result(const CriterionResult& r);

}  // namespace rdcauchy
