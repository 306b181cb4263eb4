#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rdcauchy/error.hpp"
#include "rdcauchy/iterate.hpp"

using namespace rdcauchy;

namespace {

std::vector<double> geometric(double q, int n, double e0 = 1.0) {
    std::vector<double> e(n);
    for (int k = 0; k < n; ++k) e[k] = e0 * std::pow(q, k);
    return e;
}

struct Strip {
    DomainSpec domain{4.0, 0.4, -1.0, 1.0};
    Grid grid;
    BoundaryIndexMap map;
    explicit Strip(int nx, double L = 0.4)
        : domain{4.0, L, -1.0, 1.0}, grid(build_grid(domain, nx)), map(classify_boundary(grid, domain)) {}
};

}  // namespace

TEST(Classify, SyntheticHistories) {
    const ConvergenceFit c = classify_convergence(geometric(0.9, 200));
    EXPECT_EQ(c.classification, Classification::Convergent);
    EXPECT_NEAR(c.rate, 0.9, 1e-12);

    const ConvergenceFit d = classify_convergence(geometric(1.01, 200));
    EXPECT_EQ(d.classification, Classification::Divergent);
    EXPECT_NEAR(d.rate, 1.01, 1e-12);

    const ConvergenceFit flat = classify_convergence(std::vector<double>(200, 0.3));
    EXPECT_EQ(flat.classification, Classification::Ambiguous);
    EXPECT_NEAR(flat.rate, 1.0, 1e-12);

    EXPECT_EQ(classify_convergence(geometric(0.5, 99)).classification, Classification::Ambiguous);
}

TEST(Classify, DeadBandAndEndpoints) {
    // Inside the dead band on either side.
    EXPECT_EQ(classify_convergence(geometric(0.9997, 500)).classification, Classification::Ambiguous);
    EXPECT_EQ(classify_convergence(geometric(1.0003, 500)).classification, Classification::Ambiguous);
    EXPECT_EQ(classify_convergence(geometric(0.999, 500)).classification, Classification::Convergent);

    // Falling tail but overall growth: not convergent.
    std::vector<double> e = geometric(1.05, 200);
    for (int k = 100; k < 200; ++k) e[k] = e[99] * std::pow(0.99, k - 99);
    EXPECT_NE(classify_convergence(e).classification, Classification::Convergent);

    // Flat tail far above the start: runaway.
    std::vector<double> r(200, 50.0);
    r[0] = 1.0;
    EXPECT_EQ(classify_convergence(r).classification, Classification::Divergent);
}

TEST(Alternating, ExactStartIsAFixedPoint) {
    Strip s(201);
    const ProblemParams p{5.0, 2.0, 2.0};
    const SynthesizedData data = synthesize_cauchy(s.map, p.k2, BumpSpec{0, 1, 1}, BumpSpec{0, 1, 0.5});
    BoundaryFunction eta = flux_normal_derivative(data.u_ref, s.map, Boundary::Gamma1, p.k2);
    for (std::size_t k = 0; k < eta.size(); ++k) eta.values[k] += p.mu1 * data.u_ref[eta.nodes[k]];

    IterationOptions opts;
    opts.n_iter = 30;
    const IterationReport r = alternate(data.cauchy, eta, s.map, p, opts, &data.u_ref);
    ASSERT_EQ(r.errors.size(), 30u);
    for (double e : r.errors) EXPECT_LT(e, 1e-10);
}

TEST(Alternating, ZeroDataStaysZero) {
    Strip s(201);
    CauchyData zero{BoundaryFunction(s.map, Boundary::Gamma0), BoundaryFunction(s.map, Boundary::Gamma0)};
    AlternatingIteration it(s.map, ProblemParams{5.0, 2.0, 2.0}, zero);
    it.run(10);
    EXPECT_EQ(it.last_even().max_abs(), 0.0);
    EXPECT_EQ(it.last_odd().max_abs(), 0.0);
    EXPECT_EQ(it.report().steps, 10);
}

TEST(Alternating, ContinuedRunMatchesSingleRun) {
    Strip s(201);
    const ProblemParams p{5.0, 2.0, 2.0};
    const SynthesizedData data = synthesize_cauchy(s.map, p.k2, BumpSpec{0, 1, 1}, BumpSpec{0, 1, 0.5});
    AlternatingIteration a(s.map, p, data.cauchy);
    a.set_reference(data.u_ref);
    a.run(40);
    AlternatingIteration b(s.map, p, data.cauchy);
    b.set_reference(data.u_ref);
    b.run(15);
    b.run(25);
    EXPECT_EQ(a.report().errors, b.report().errors);
}

TEST(Alternating, ErrorDecreasesAtSmallWavenumber) {
    Strip s(201);
    const ProblemParams p{2.0, 2.0, 2.0};
    const SynthesizedData data = synthesize_cauchy(s.map, p.k2, BumpSpec{0, 1, 1}, BumpSpec{0, 1, 0.5});
    IterationOptions opts;
    opts.n_iter = 300;
    const IterationReport r = alternate(data.cauchy, std::nullopt, s.map, p, opts, &data.u_ref);
    EXPECT_LT(r.final_error(), r.initial_error());
    EXPECT_LT(r.rate, 1.0);
}

TEST(Alternating, RejectsMisplacedData) {
    Strip s(201);
    CauchyData bad{BoundaryFunction(s.map, Boundary::Top), BoundaryFunction(s.map, Boundary::Gamma0)};
    EXPECT_THROW(AlternatingIteration(s.map, ProblemParams{}, bad), InvalidArgument);
}

TEST(Alternating, BlowUpIsDivergent) {
    Strip s(201);
    SweepSetup setup;
    setup.domain = s.domain;
    setup.nx = 201;
    const CellEvaluation ev = evaluate_cell(setup, ProblemParams{40.0, 0.5, 0.5});
    EXPECT_EQ(ev.classification, Classification::Divergent);
}

TEST(Policy, Validation) {
    Strip s(201);
    CauchyData zero{BoundaryFunction(s.map, Boundary::Gamma0), BoundaryFunction(s.map, Boundary::Gamma0)};
    AlternatingIteration it(s.map, ProblemParams{5.0, 2.0, 2.0}, zero);
    EXPECT_THROW(run_classified(it, ExtensionPolicy{0, 4, 2, true}), InvalidArgument);
    EXPECT_THROW(run_classified(it, ExtensionPolicy{500, 1, 2, true}), InvalidArgument);
    IterationOptions opts;
    opts.n_iter = 0;
    EXPECT_THROW(alternate(zero, std::nullopt, s.map, ProblemParams{}, opts), InvalidArgument);
}

TEST(Localization, ConstantAndBumpFields) {
    Strip s(800);
    const GridFunction one(s.grid, 1.0);
    const Localization c = localization_check(one, s.grid);
    // 201 inside columns out of 800 trapezoid-weighted columns.
    EXPECT_NEAR(c.fraction, 599.0 / 800.0, 1e-12);
    EXPECT_FALSE(c.localized);

    GridFunction bump(s.grid);
    const BumpSpec b{0.0, 1.0, 1.0};
    for (int j = 0; j <= s.grid.my(); ++j)
        for (int i = 0; i <= s.grid.nx(); ++i) bump(i, j) = b(s.grid.x(i));
    const Localization l = localization_check(bump, s.grid);
    EXPECT_EQ(l.fraction, 0.0);
    EXPECT_TRUE(l.localized);

    EXPECT_EQ(localization_check(GridFunction(s.grid), s.grid).fraction, 0.0);
}

TEST(Sweeps, NoTransitionWhenLowerEndDiverges) {
    SweepSetup setup;
    setup.nx = 201;
    EXPECT_THROW(threshold_k2(setup, 2.0, 30.0, 40.0, 1.0), NoTransitionInRange);
    EXPECT_THROW(threshold_k2(setup, 2.0, 40.0, 30.0, 1.0), InvalidArgument);
}

TEST(Sweeps, MinMuReportsNonLocalizedReference) {
    SweepSetup setup;
    setup.domain.height = 0.6;
    setup.nx = 401;
    const MinMuResult r = min_mu(setup, 35.0);
    EXPECT_EQ(r.kind, MinMuKind::NotLocalized);
    EXPECT_GT(r.localization.fraction, 0.1);
    EXPECT_TRUE(r.evaluations.empty());
    EXPECT_THROW(min_mu(setup, 35.0, 0.5), InvalidArgument);
}
