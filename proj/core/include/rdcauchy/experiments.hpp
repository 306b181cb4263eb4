#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rdcauchy/config.hpp"
#include "rdcauchy/iterate.hpp"
#include "rdcauchy/spectral.hpp"

namespace rdcauchy {

// Published values of the three tables, keyed by the swept parameter.
std::optional<double> published_table1(double mu);
std::optional<double> published_table2(double A);
// "-" (no mu needed), "*" (not localized), or a number; empty when not tabulated.
std::string published_table3(double L, double k2);

struct Table1Row {
    double mu = 0.0;
    double L = 0.0;
    SpectralResult root;
    SpectralResult oracle;
    std::optional<double> published;
    bool scored = true;  // mu = 2 is reported but not scored
};

// One classified run plus the discrete coercivity indicator for its cell.
struct EvaluationRecord {
    DomainSpec domain;
    int nx = 0;
    CellEvaluation cell;
    double min_form = 0.0;
};

struct Table2Row {
    double A = 0.0;
    int nx = 0;
    int my = 0;
    double h = 0.0;
    double mu = 0.0;
    std::optional<ThresholdResult> result;
    std::string status = "ok";
    std::optional<double> published;
    double lambda_robin = 0.0;  // continuum k^2 limit for this mu
    double form_limit = 0.0;    // k^2 where the discrete form stops being coercive
    std::vector<EvaluationRecord> evaluations;
    double seconds = 0.0;
};

struct Table3Row {
    double L = 0.0;
    double k2 = 0.0;
    std::optional<MinMuResult> result;
    std::string status = "ok";
    std::string published;
    double predicted_mu = 0.0;  // robin_mu_threshold(k2, L)
    std::vector<EvaluationRecord> evaluations;
    double seconds = 0.0;
};

struct Table3Cell {
    double L;
    double k2;
};

std::vector<Table1Row> compute_table1(const std::vector<double>& mus, double L);
std::vector<Table2Row> compute_table2(const ExperimentConfig& cfg, const std::vector<double>& As);
std::vector<Table3Row> compute_table3(const ExperimentConfig& cfg, const std::vector<Table3Cell>& cells);

// Forward run for a single cell and its report; used by the `solve` command and figures.
struct SolveOutcome {
    SynthesizedData data;
    IterationReport report;
    double min_form = 0.0;
    double lambda_robin = 0.0;
};
SolveOutcome run_single(const ExperimentConfig& cfg, bool extend);

void write_table1(const std::filesystem::path& path, const std::vector<Table1Row>& rows);
void write_table2(const std::filesystem::path& dir, const std::vector<Table2Row>& rows);
void write_table3(const std::filesystem::path& dir, const std::vector<Table3Row>& rows);

// Each writes its CSV files (and a timing sidecar) under cfg.out.
std::vector<Table1Row> run_table1(const ExperimentConfig& cfg);
std::vector<Table2Row> run_table2(const ExperimentConfig& cfg);
std::vector<Table3Row> run_table3(const ExperimentConfig& cfg);
// Plot data (and SVG when cfg.render_svg) under cfg.out / "figures".
void run_figures(const ExperimentConfig& cfg);

// "%.10g"
std::string format_number(double v);

}  // namespace rdcauchy
