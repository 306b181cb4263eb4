#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdcauchy/bvp.hpp"
#include "rdcauchy/synthesis.hpp"

namespace rdcauchy {

enum class Classification : unsigned char { Convergent, Divergent, Ambiguous, NotLocalized };

const char* to_string(Classification c) noexcept;

struct ConvergenceFit {
    Classification classification = Classification::Ambiguous;
    double rate = 1.0;  // exp of the least-squares slope of log e_k
};

// Needs at least 100 errors; shorter histories come back Ambiguous with the
// rate fitted over whatever is there.
ConvergenceFit classify_convergence(std::span<const double> errors);

struct IterationReport {
    DomainSpec domain;
    int nx = 0;
    ProblemParams params;
    int steps = 0;               // double steps taken
    std::vector<double> errors;  // e_k for k = 0 .. steps-1, when a reference is set
    double rate = 1.0;
    Classification classification = Classification::Ambiguous;
    int blowup_index = -1;  // first k with a non-finite or runaway iterate
    int extensions = 0;
    // Still ambiguous after the last extension; decided by e_final < e_initial.
    bool resolved_by_endpoint = false;
    BoundaryFunction phi;  // trace on Gamma1 of the last even iterate
    std::vector<std::pair<int, BoundaryFunction>> snapshots;

    int iterations() const noexcept { return steps; }
    double initial_error() const { return errors.empty() ? 0.0 : errors.front(); }
    double final_error() const { return errors.empty() ? 0.0 : errors.back(); }
};

// The Robin-Dirichlet alternating procedure with both factorizations held for
// the lifetime of the object, so a run can be continued.
//
//   u_2k     solves A:  u = f0 on Gamma0,   d_nu u + mu1 u = eta_k on Gamma1
//   u_2k+1   solves B:  d_nu u + mu0 u = g0 + mu0 f0 on Gamma0,  u = u_2k on Gamma1
//   eta_k+1  = d_nu u_2k+1 + mu1 u_2k+1 on Gamma1
class AlternatingIteration {
public:
    AlternatingIteration(const BoundaryIndexMap& map, const ProblemParams& params,
                         const CauchyData& data, std::optional<BoundaryFunction> eta0 = {},
                         const FactorOptions& factor = {});

    void set_reference(const GridFunction& u_ref);
    void set_checkpoints(std::vector<int> checkpoints);

    // Runs n more double steps; stops early on blow-up.
    void run(int n);

    const IterationReport& report() const noexcept { return report_; }
    IterationReport& report() noexcept { return report_; }
    const GridFunction& last_even() const noexcept { return u_even_; }
    const GridFunction& last_odd() const noexcept { return u_odd_; }
    bool blown_up() const noexcept { return report_.blowup_index >= 0; }

private:
    const BoundaryIndexMap* map_;
    ProblemParams params_;
    MixedProblemA prob_a_;
    MixedProblemB prob_b_;
    BoundaryFunction f0_;
    BoundaryFunction g_;  // g0 + mu0 f0
    BoundaryFunction eta_;
    std::optional<BoundaryFunction> ref_top_;
    std::vector<int> checkpoints_;
    GridFunction u_even_;
    GridFunction u_odd_;
    int step_ = 0;
    IterationReport report_;
};

struct IterationOptions {
    int n_iter = 500;
    std::vector<int> checkpoints;
    FactorOptions factor;
};

// Exactly n_iter double steps (fewer only on blow-up); the report is classified
// when at least 100 errors were recorded.
IterationReport alternate(const CauchyData& data, std::optional<BoundaryFunction> eta0,
                          const BoundaryIndexMap& map, const ProblemParams& params,
                          const IterationOptions& options = {},
                          const GridFunction* u_ref = nullptr);

struct ExtensionPolicy {
    int n_iter = 500;
    int factor = 4;
    int max_extensions = 2;
    // Resolve a run that is still Ambiguous after the last extension by
    // comparing the final and initial errors.
    bool resolve_by_endpoint = true;
};

// Runs, classifies and keeps extending while the classification is Ambiguous.
void run_classified(AlternatingIteration& it, const ExtensionPolicy& policy);

struct Localization {
    bool localized = true;
    double fraction = 0.0;  // L2 mass outside the band over total mass
};

Localization localization_check(const GridFunction& u, const Grid& grid, double band_left = -1.0,
                                double band_right = 1.0, double tol = 0.1);

// Everything needed to turn a parameter cell into a classified run.
struct SweepSetup {
    DomainSpec domain;
    int nx = 801;
    BumpSpec bottom{0.0, 1.0, 1.0};
    BumpSpec top{0.0, 1.0, 0.5};
    ExtensionPolicy policy;
    FactorOptions factor;
};

struct CellEvaluation {
    ProblemParams params;
    Classification classification = Classification::Ambiguous;
    double rate = 1.0;
    int iterations = 0;
    double initial_error = 0.0;
    double final_error = 0.0;
    bool resolved_by_endpoint = false;
    int blowup_index = -1;
    std::string error;  // solver failure message; such cells count as Divergent
};

// One classified run: forward solve for the reference, then the iteration.
CellEvaluation evaluate_cell(const SweepSetup& setup, const ProblemParams& params);

struct ThresholdResult {
    double value = 0.0;
    double lo = 0.0;  // last convergent k^2
    double hi = 0.0;  // first divergent k^2
    std::vector<CellEvaluation> evaluations;
};

// Bisection on k^2 with mu0 = mu1 = mu. The lower end must converge and the
// upper end must not; returns the midpoint of the final bracket.
ThresholdResult threshold_k2(const SweepSetup& setup, double mu, double k2_lo, double k2_hi,
                             double resolution = 0.1);

enum class MinMuKind : unsigned char { Value, NoneNeeded, NotLocalized };

struct MinMuResult {
    MinMuKind kind = MinMuKind::Value;
    double value = 0.0;
    double lo = 0.0;  // last non-convergent mu
    double hi = 0.0;  // first convergent mu
    Localization localization;
    std::vector<CellEvaluation> evaluations;
};

const char* to_string(MinMuKind kind) noexcept;

// Order: the forward solution's localization, then mu = 0, then doubling from
// mu = 1 until a convergent mu is found (at most mu_max), then bisection.
MinMuResult min_mu(const SweepSetup& setup, double k2, double mu_max = 64.0,
                   double resolution = 0.1, double localization_tol = 0.1);

}  // namespace rdcauchy
