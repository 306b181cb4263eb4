#pragma once

#include <span>

#include "rdcauchy/fd_core.hpp"
#include "rdcauchy/linsolve.hpp"

namespace rdcauchy {

// Cauchy data on Gamma0: trace f0 and outward normal derivative g0.
struct CauchyData {
    BoundaryFunction f0;
    BoundaryFunction g0;
};

struct BvpOptions {
    FactorOptions factor;
    // Mixed problems refuse a non-coercive operator unless this is set.
    bool allow_indefinite = false;
    // NearResonance when min |pivot| < resonance_ratio * max |pivot|.
    double resonance_ratio = 1e-12;
};

// u = f on Gamma0, d_nu u + mu1 u = eta on Gamma1, (Delta + k^2) u = 0 inside.
class MixedProblemA {
public:
    MixedProblemA(const BoundaryIndexMap& map, const ProblemParams& params,
                  const BvpOptions& options = {});

    // `source` and `end_values` exist for manufactured-solution checks.
    GridFunction solve(const BoundaryFunction& f, const BoundaryFunction& eta,
                       const GridFunction* source = nullptr,
                       const GridFunction* end_values = nullptr) const;

    bool coercive() const noexcept { return fact_.coercive(); }
    const Factorization& factorization() const noexcept { return fact_; }
    const OperatorMatrix& matrix() const noexcept { return fact_.matrix(); }

private:
    const BoundaryIndexMap* map_;
    Factorization fact_;
};

// d_nu u + mu0 u = g on Gamma0, u = phi on Gamma1. Gamma0's end nodes x = a, b
// keep the Robin closure.
class MixedProblemB {
public:
    MixedProblemB(const BoundaryIndexMap& map, const ProblemParams& params,
                  const BvpOptions& options = {});

    GridFunction solve(const BoundaryFunction& g, const BoundaryFunction& phi,
                       const GridFunction* source = nullptr,
                       const GridFunction* end_values = nullptr) const;

    bool coercive() const noexcept { return fact_.coercive(); }
    const Factorization& factorization() const noexcept { return fact_; }
    const OperatorMatrix& matrix() const noexcept { return fact_.matrix(); }

private:
    const BoundaryIndexMap* map_;
    Factorization fact_;
};

// All-Dirichlet forward problem used to manufacture Cauchy data.
class DirichletProblem {
public:
    DirichletProblem(const BoundaryIndexMap& map, double k2, const BvpOptions& options = {});

    // Full bottom and top rows (nx + 1 values each); the x = +-A columns,
    // corners included, are held at zero.
    GridFunction solve(std::span<const double> bottom, std::span<const double> top) const;

    // Boundary values read from every boundary node of `boundary_values`.
    GridFunction solve_field(const GridFunction& boundary_values,
                             const GridFunction* source = nullptr) const;

    const Factorization& factorization() const noexcept { return fact_; }

private:
    const BoundaryIndexMap* map_;
    Factorization fact_;
};

// One-shot conveniences; each call assembles and factorises afresh.
GridFunction solve_problem_a(const BoundaryFunction& f, const BoundaryFunction& eta,
                             const BoundaryIndexMap& map, const ProblemParams& params,
                             const BvpOptions& options = {});
GridFunction solve_problem_b(const BoundaryFunction& g, const BoundaryFunction& phi,
                             const BoundaryIndexMap& map, const ProblemParams& params,
                             const BvpOptions& options = {});
GridFunction solve_dirichlet(std::span<const double> bottom, std::span<const double> top,
                             const BoundaryIndexMap& map, double k2,
                             const BvpOptions& options = {});

}  // namespace rdcauchy
