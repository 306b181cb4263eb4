#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rdcauchy/geometry.hpp"
#include "rdcauchy/iterate.hpp"
#include "rdcauchy/params.hpp"
#include "rdcauchy/synthesis.hpp"

namespace rdcauchy {

struct ExperimentConfig {
    DomainSpec domain;
    int nx = 801;
    ProblemParams params{5.0, 2.0, 2.0};
    int n_iter = 500;
    int extension_factor = 4;
    int max_extensions = 2;

    // Table sweeps.
    std::vector<double> table1_mu{2, 4, 6, 8, 10, 12, 14};
    double table1_L = 0.4;
    std::vector<double> table2_A{2, 4, 6, 8};
    double table2_mu = 2.0;
    double k2_lo = 5.0;
    double k2_hi = 20.0;
    double k2_resolution = 0.1;
    std::vector<double> table3_L{0.2, 0.4, 0.6};
    std::vector<double> table3_k2{5, 10, 15, 20, 25, 30, 35, 40, 50};
    double mu_max = 64.0;
    double mu_resolution = 0.1;
    double localization_tol = 0.1;

    BumpSpec bump_bottom{0.0, 1.0, 1.0};
    BumpSpec bump_top{0.0, 1.0, 0.5};

    std::filesystem::path out = "results";
    std::uint64_t seed = 20240501;
    int threads = 0;  // 0: hardware concurrency
    bool render_svg = false;
    // Fine resolution: nx = 1601 at A = 4, same h at other A.
    bool paper_scale = false;

    void validate() const;
    // nx for a run on half-width A at the configured mesh width: nx itself when
    // A is the configured half-width, scaled with A otherwise.
    int nx_for(double A) const;
    SweepSetup sweep_setup(const DomainSpec& domain) const;
};

// key = value lines; '#' starts a comment; lists are comma separated.
// Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

// Assigns one key; used by the parser and by command-line overrides.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::vector<std::string> config_keys();
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace rdcauchy
