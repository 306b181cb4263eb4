#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rdcauchy/error.hpp"
#include "rdcauchy/fd_core.hpp"
#include "rdcauchy/linsolve.hpp"

using namespace rdcauchy;

namespace {

struct Mesh {
    DomainSpec domain;
    Grid grid;
    BoundaryIndexMap map;
    explicit Mesh(DomainSpec d, int nx)
        : domain(d), grid(build_grid(d, nx)), map(classify_boundary(grid, d)) {}
};

GridFunction random_field(const Grid& g, std::uint64_t seed, bool zero_ends) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction u(g);
    for (int j = 0; j <= g.my(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) {
            const bool end = i == 0 || i == g.nx();
            u(i, j) = zero_ends && end ? 0.0 : dist(rng);
        }
    }
    return u;
}

}  // namespace

TEST(Assemble, SymmetricForEveryClosure) {
    Mesh s(DomainSpec{1.0, 0.6, -0.4, 0.4}, 20);
    const ProblemParams p{3.0, 1.5, 2.5};
    for (BcSpec bc : {BcSpec::all_dirichlet(), BcSpec::problem_a(), BcSpec::problem_b(),
                      BcSpec::all_robin()}) {
        const OperatorMatrix K = assemble(s.grid, s.map, p, bc);
        const auto rp = K.row_ptr();
        const auto cols = K.cols();
        const auto vals = K.vals();
        for (std::size_t r = 0; r < K.size(); ++r) {
            for (std::size_t e = rp[r]; e < rp[r + 1]; ++e) {
                EXPECT_DOUBLE_EQ(vals[e], K.entry(cols[e], r)) << "row " << r << " col " << cols[e];
            }
        }
        EXPECT_LE(K.bandwidth(), static_cast<std::size_t>(s.grid.my() + 1));
    }
}

TEST(Assemble, UnknownCounts) {
    Mesh s(DomainSpec{1.0, 1.0, -0.5, 0.5}, 10);
    const ProblemParams p{1.0, 1.0, 1.0};
    const std::size_t interior = 9 * 4;
    EXPECT_EQ(assemble(s.grid, s.map, p, BcSpec::all_dirichlet()).size(), interior);
    EXPECT_EQ(assemble(s.grid, s.map, p, BcSpec::all_robin()).size(), interior + 18);
    EXPECT_EQ(assemble(s.grid, s.map, p, BcSpec::problem_a()).size(),
              interior + s.map.count(Segment::Gamma1Bottom) + s.map.count(Segment::Gamma1Top));
    EXPECT_EQ(assemble(s.grid, s.map, p, BcSpec::problem_b()).size(),
              interior + s.map.count(Segment::Gamma0));
}

TEST(Assemble, SingleInteriorNode) {
    const DomainSpec d{1.0, 2.0, -0.5, 0.5};
    const Grid g(d, 2, 2);  // h = 1
    const BoundaryIndexMap m = classify_boundary(g, d);
    const OperatorMatrix K = assemble(g, m, ProblemParams{0.7, 1, 1}, BcSpec::all_dirichlet());
    ASSERT_EQ(K.size(), 1u);
    EXPECT_DOUBLE_EQ(K.entry(0, 0), -4.0 + 0.7);
}

TEST(Assemble, RobinRowMatchesClosedForm) {
    Mesh s(DomainSpec{1.0, 1.0, -0.5, 0.5}, 10);
    const ProblemParams p{2.0, 3.0, 1.0};
    const OperatorMatrix K = assemble(s.grid, s.map, p, BcSpec::all_robin());
    const double h = s.grid.h();
    const std::size_t node = s.grid.index(5, 0);  // Gamma0
    const long r = K.unknown_of(node);
    ASSERT_GE(r, 0);
    EXPECT_DOUBLE_EQ(K.row_scale(r), 0.5);
    EXPECT_NEAR(K.entry(r, r), -(2.0 + h * 3.0) / (h * h) + 0.5 * 2.0, 1e-12);
    EXPECT_NEAR(K.entry(r, K.unknown_of(s.grid.index(5, 1))), 1.0 / (h * h), 1e-12);
    EXPECT_NEAR(K.entry(r, K.unknown_of(s.grid.index(4, 0))), 0.5 / (h * h), 1e-12);
}

TEST(QuadraticForm, EqualsScaledMatrixForm) {
    Mesh s(DomainSpec{1.0, 0.5, -0.3, 0.3}, 24);
    const ProblemParams p{4.0, 0.7, 1.9};
    const OperatorMatrix K = assemble(s.grid, s.map, p, BcSpec::all_robin());
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const GridFunction u = random_field(s.grid, seed, true);
        const std::vector<double> x = K.restrict_to_unknowns(u);
        std::vector<double> y(x.size());
        K.multiply(x, y);
        double xKx = 0.0;
        for (std::size_t r = 0; r < x.size(); ++r) xKx += x[r] * y[r];
        const double h = s.grid.h();
        const double q = quadratic_form(u, s.map, p);
        EXPECT_NEAR(q, -h * h * xKx, 1e-10 * std::abs(q));
    }
}

TEST(QuadraticForm, ConstantFieldPicksUpMassAndBoundary) {
    Mesh s(DomainSpec{1.0, 1.0, -0.5, 0.5}, 10);
    GridFunction u(s.grid, 1.0);
    // No gradient, so q = mu0 h #Gamma0 - k^2 (trapezoid area).
    EXPECT_NEAR(quadratic_form(u, s.map, ProblemParams{0.0, 2.0, 0.0}), 2.0 * 0.2 * 5, 1e-12);
    EXPECT_NEAR(quadratic_form(u, s.map, ProblemParams{1.0, 0.0, 0.0}), -2.0, 1e-12);
}

TEST(BoundaryFunctions, NormsUseArcLength) {
    Mesh s(DomainSpec{4.0, 0.4, -1.0, 1.0}, 800);
    BoundaryFunction one(s.map, Boundary::Gamma0, 1.0);
    EXPECT_NEAR(l2_norm(one, s.map), std::sqrt(2.0), 1e-12);
    BoundaryFunction two(s.map, Boundary::Gamma0, 3.0);
    EXPECT_NEAR(l2_distance(one, two, s.map), 2.0 * std::sqrt(2.0), 1e-12);
    BoundaryFunction top(s.map, Boundary::Top, 1.0);
    EXPECT_THROW(l2_distance(one, top, s.map), InvalidArgument);
}

TEST(BoundaryFunctions, TraceAndScatterRoundTrip) {
    Mesh s(DomainSpec{1.0, 0.6, -0.4, 0.4}, 20);
    const GridFunction u = random_field(s.grid, 7, false);
    for (Boundary b : {Boundary::Gamma0, Boundary::Gamma1, Boundary::Bottom, Boundary::Top}) {
        const BoundaryFunction t = trace(u, s.map, b);
        ASSERT_EQ(t.size(), s.map.nodes(b).size());
        GridFunction v(s.grid);
        scatter(t, v);
        for (std::size_t k = 0; k < t.size(); ++k) {
            EXPECT_EQ(v[t.nodes[k]], u[t.nodes[k]]);
        }
    }
}

TEST(NormalDerivative, ExactOnQuadratics) {
    Mesh s(DomainSpec{1.0, 0.5, -0.5, 0.5}, 20);
    GridFunction u(s.grid);
    for (int j = 0; j <= s.grid.my(); ++j) {
        for (int i = 0; i <= s.grid.nx(); ++i) {
            const double x = s.grid.x(i);
            const double y = s.grid.y(j);
            u(i, j) = y * y + 3.0 * y + x;
        }
    }
    const double L = s.grid.mesh_height();
    const BoundaryFunction db = normal_derivative(u, s.map, Boundary::Bottom);
    for (double v : db.values) EXPECT_NEAR(v, -3.0, 1e-11);
    const BoundaryFunction dt = normal_derivative(u, s.map, Boundary::Top);
    for (double v : dt.values) EXPECT_NEAR(v, 2.0 * L + 3.0, 1e-11);
}

TEST(NormalDerivative, FluxVersionConvergesToOutwardDerivative) {
    // Harmonic u = exp(x) sin(y) + y; outward derivative on the bottom is -(e^x + 1).
    for (int nx : {40, 80}) {
        Mesh s(DomainSpec{1.0, 1.0, -0.5, 0.5}, nx);
        GridFunction u(s.grid);
        for (int j = 0; j <= s.grid.my(); ++j) {
            for (int i = 0; i <= s.grid.nx(); ++i) {
                u(i, j) = std::exp(s.grid.x(i)) * std::sin(s.grid.y(j)) + s.grid.y(j);
            }
        }
        const BoundaryFunction d = flux_normal_derivative(u, s.map, Boundary::Bottom, 0.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            const double x = s.grid.x(s.grid.column_of(d.nodes[k]));
            worst = std::max(worst, std::abs(d.values[k] + std::exp(x) + 1.0));
        }
        EXPECT_LT(worst, 2.0 * s.grid.h() * s.grid.h());
    }
}

TEST(NormalDerivative, FluxDataReproducesFieldThroughRobinSolve) {
    Mesh s(DomainSpec{1.0, 0.6, -0.4, 0.4}, 30);
    const ProblemParams p{2.0, 1.0, 2.5};
    const GridFunction u = random_field(s.grid, 11, false);
    const OperatorMatrix K = assemble(s.grid, s.map, p, BcSpec::all_robin());

    // Source that makes every interior row exact for u.
    GridFunction src(s.grid);
    const double h = s.grid.h();
    for (int j = 1; j < s.grid.my(); ++j) {
        for (int i = 1; i < s.grid.nx(); ++i) {
            src(i, j) = (u(i - 1, j) + u(i + 1, j) + u(i, j - 1) + u(i, j + 1) - 4 * u(i, j)) / (h * h) +
                        p.k2 * u(i, j);
        }
    }
    GridFunction data = u;
    for (Boundary b : {Boundary::Gamma0, Boundary::Gamma1}) {
        const double mu = b == Boundary::Gamma0 ? p.mu0 : p.mu1;
        BoundaryFunction eta = flux_normal_derivative(u, s.map, b, p.k2, &src);
        for (std::size_t k = 0; k < eta.size(); ++k) eta.values[k] += mu * u[eta.nodes[k]];
        scatter(eta, data);
    }
    const Factorization f = factorize(K);
    const GridFunction v = K.expand(f.solve(K.rhs(data, &src)), data);
    for (std::size_t n = 0; n < v.size(); ++n) EXPECT_NEAR(v[n], u[n], 1e-9);
}

TEST(Params, Validation) {
    EXPECT_THROW((ProblemParams{1.0, -1.0, 1.0}.validate()), InvalidArgument);
    EXPECT_THROW((ProblemParams{NAN, 1.0, 1.0}.validate()), InvalidArgument);
    EXPECT_THROW((ProblemParams{1.0, 0.0, 0.0}.validate(true)), InvalidArgument);
    EXPECT_NO_THROW((ProblemParams{-3.0, 0.0, 0.0}.validate()));
}

TEST(Assemble, RejectsMismatchedMap) {
    Mesh a(DomainSpec{1.0, 1.0, -0.5, 0.5}, 10);
    Mesh b(DomainSpec{1.0, 1.0, -0.5, 0.5}, 20);
    EXPECT_THROW(assemble(a.grid, b.map, ProblemParams{}, BcSpec::all_robin()), InvalidArgument);
}
