#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rdcauchy/bvp.hpp"
#include "rdcauchy/error.hpp"

using namespace rdcauchy;

namespace {

struct Case {
    DomainSpec domain;
    Grid grid;
    BoundaryIndexMap map;
    Case(DomainSpec d, int nx) : domain(d), grid(build_grid(d, nx)), map(classify_boundary(grid, d)) {}
};

double exact(double x, double y) { return std::cos(x) * std::cosh(y); }

// Outward normal derivative of cos x cosh y on the bottom (y = 0) or top.
double exact_dn(double x, double y, bool top) {
    const double uy = std::cos(x) * std::sinh(y);
    return top ? uy : -uy;
}

GridFunction sample(const Grid& g, double (*f)(double, double)) {
    GridFunction u(g);
    for (int j = 0; j <= g.my(); ++j)
        for (int i = 0; i <= g.nx(); ++i) u(i, j) = f(g.x(i), g.y(j));
    return u;
}

double max_error(const GridFunction& u, const GridFunction& v) {
    double e = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) e = std::max(e, std::abs(u[n] - v[n]));
    return e;
}

BoundaryFunction robin_data(const Case& c, Boundary b, double mu) {
    BoundaryFunction eta(c.map, b);
    for (std::size_t k = 0; k < eta.size(); ++k) {
        const std::size_t n = eta.nodes[k];
        const double x = c.grid.x(c.grid.column_of(n));
        const double y = c.grid.y(c.grid.row_of(n));
        eta.values[k] = exact_dn(x, y, c.grid.row_of(n) == c.grid.my()) + mu * exact(x, y);
    }
    return eta;
}

BvpOptions indefinite() {
    BvpOptions o;
    o.allow_indefinite = true;
    return o;
}

}  // namespace

TEST(MixedProblems, ZeroDataGivesZeroField) {
    Case c(DomainSpec{4.0, 0.4, -1.0, 1.0}, 201);
    const ProblemParams p{5.0, 2.0, 2.0};
    const MixedProblemA a(c.map, p, indefinite());
    const MixedProblemB b(c.map, p, indefinite());
    EXPECT_EQ(a.solve(BoundaryFunction(c.map, Boundary::Gamma0),
                      BoundaryFunction(c.map, Boundary::Gamma1)).max_abs(), 0.0);
    EXPECT_EQ(b.solve(BoundaryFunction(c.map, Boundary::Gamma0),
                      BoundaryFunction(c.map, Boundary::Gamma1)).max_abs(), 0.0);
}

// cos x cosh y is harmonic, so (Delta + k^2) u = k^2 u serves as source.
TEST(MixedProblems, ManufacturedSolutionSecondOrder) {
    const ProblemParams p{1.0, 1.0, 1.0};
    std::vector<double> err_a, err_b;
    for (int nx : {20, 40, 80}) {
        Case c(DomainSpec{1.0, 1.0, -0.5, 0.5}, nx);
        const GridFunction u = sample(c.grid, exact);
        GridFunction src = u;
        for (std::size_t n = 0; n < src.size(); ++n) src[n] *= p.k2;

        const MixedProblemA a(c.map, p);
        EXPECT_TRUE(a.coercive());
        err_a.push_back(max_error(
            a.solve(trace(u, c.map, Boundary::Gamma0), robin_data(c, Boundary::Gamma1, p.mu1), &src, &u),
            u));

        const MixedProblemB b(c.map, p);
        err_b.push_back(max_error(
            b.solve(robin_data(c, Boundary::Gamma0, p.mu0), trace(u, c.map, Boundary::Gamma1), &src, &u),
            u));
    }
    for (std::size_t k = 1; k < err_a.size(); ++k) {
        EXPECT_NEAR(std::log2(err_a[k - 1] / err_a[k]), 2.0, 0.2);
        EXPECT_NEAR(std::log2(err_b[k - 1] / err_b[k]), 2.0, 0.2);
    }
    EXPECT_LT(err_a.back(), 1e-4);
}

TEST(MixedProblems, Linearity) {
    Case c(DomainSpec{2.0, 0.4, -1.0, 1.0}, 200);
    const MixedProblemA a(c.map, ProblemParams{12.0, 2.0, 2.0}, indefinite());
    BoundaryFunction f1(c.map, Boundary::Gamma0), f2(c.map, Boundary::Gamma0);
    BoundaryFunction e1(c.map, Boundary::Gamma1), e2(c.map, Boundary::Gamma1);
    for (std::size_t k = 0; k < f1.size(); ++k) {
        f1.values[k] = std::sin(0.3 * k);
        f2.values[k] = 1.0;
    }
    for (std::size_t k = 0; k < e1.size(); ++k) {
        e1.values[k] = std::cos(0.1 * k);
        e2.values[k] = k % 3 == 0 ? 1.0 : -0.5;
    }
    BoundaryFunction f = f1, e = e1;
    for (std::size_t k = 0; k < f.size(); ++k) f.values[k] += 2.0 * f2.values[k];
    for (std::size_t k = 0; k < e.size(); ++k) e.values[k] += 2.0 * e2.values[k];
    const GridFunction u1 = a.solve(f1, e1);
    const GridFunction u2 = a.solve(f2, e2);
    const GridFunction u = a.solve(f, e);
    double worst = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) worst = std::max(worst, std::abs(u[n] - u1[n] - 2.0 * u2[n]));
    EXPECT_LT(worst, 1e-10 * std::max(1.0, u.max_abs()));
}

TEST(MixedProblems, ProblemBReproducesProblemAFromItsOwnTraces) {
    Case c(DomainSpec{4.0, 0.4, -1.0, 1.0}, 401);
    const ProblemParams p{5.0, 2.0, 3.0};
    const MixedProblemA a(c.map, p, indefinite());
    const MixedProblemB b(c.map, p, indefinite());
    BoundaryFunction f(c.map, Boundary::Gamma0), eta(c.map, Boundary::Gamma1);
    for (std::size_t k = 0; k < f.size(); ++k) f.values[k] = 1.0 + 0.01 * k;
    for (std::size_t k = 0; k < eta.size(); ++k) eta.values[k] = std::sin(0.02 * k);
    const GridFunction u = a.solve(f, eta);

    BoundaryFunction g = flux_normal_derivative(u, c.map, Boundary::Gamma0, p.k2);
    for (std::size_t k = 0; k < g.size(); ++k) g.values[k] += p.mu0 * u[g.nodes[k]];
    const GridFunction v = b.solve(g, trace(u, c.map, Boundary::Gamma1));
    EXPECT_LT(max_error(u, v), 1e-10 * u.max_abs());
}

TEST(MixedProblems, RejectsDataOnWrongBoundary) {
    Case c(DomainSpec{1.0, 1.0, -0.5, 0.5}, 20);
    const MixedProblemA a(c.map, ProblemParams{1.0, 1.0, 1.0});
    EXPECT_THROW(a.solve(BoundaryFunction(c.map, Boundary::Gamma1), BoundaryFunction(c.map, Boundary::Gamma1)),
                 InvalidArgument);
    EXPECT_THROW(a.solve(BoundaryFunction(c.map, Boundary::Gamma0), BoundaryFunction(c.map, Boundary::Top)),
                 InvalidArgument);
}

TEST(MixedProblems, NotCoerciveUnlessOptedIn) {
    Case c(DomainSpec{4.0, 0.4, -1.0, 1.0}, 201);
    const ProblemParams p{30.0, 2.0, 2.0};
    EXPECT_THROW(MixedProblemA(c.map, p), NotCoercive);
    EXPECT_THROW(MixedProblemB(c.map, p), NotCoercive);
    EXPECT_NO_THROW(MixedProblemA(c.map, p, indefinite()));
    EXPECT_NO_THROW(MixedProblemA(c.map, ProblemParams{2.0, 2.0, 2.0}));
}

// Discrete separable solution sin(p pi i / nx) Y_j with the exact three-term
// recurrence in y.
TEST(DirichletProblem, SeparableDiscreteSolution) {
    Case c(DomainSpec{1.0, 0.5, -0.5, 0.5}, 40);
    const int nx = c.grid.nx();
    const int my = c.grid.my();
    const double h = c.grid.h();
    const double k2 = 3.0;
    const int mode = 2;
    const double sigma = 4.0 / (h * h) * std::pow(std::sin(mode * M_PI / (2.0 * nx)), 2);
    ASSERT_GT(sigma, k2);
    const double theta = std::acosh(1.0 + 0.5 * h * h * (sigma - k2));

    std::vector<double> bottom(nx + 1, 0.0), top(nx + 1, 0.0);
    for (int i = 0; i <= nx; ++i) top[i] = std::sin(mode * M_PI * i / nx);
    const GridFunction u = solve_dirichlet(bottom, top, c.map, k2);
    double worst = 0.0;
    for (int j = 0; j <= my; ++j) {
        for (int i = 1; i < nx; ++i) {
            const double ref = top[i] * std::sinh(theta * j) / std::sinh(theta * my);
            worst = std::max(worst, std::abs(u(i, j) - ref));
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(DirichletProblem, ResonanceIsReported) {
    const DomainSpec d{1.0, 1.0, -0.5, 0.5};
    const Grid g = build_grid(d, 10);
    const BoundaryIndexMap m = classify_boundary(g, d);
    const double h = g.h();
    const double k2 = 4.0 / (h * h) *
                      (std::pow(std::sin(M_PI * h / 4.0), 2) + std::pow(std::sin(M_PI * h / 2.0), 2));
    bool flagged = false;
    try {
        DirichletProblem p(m, k2);
    } catch (const NearResonance& e) {
        flagged = true;
        EXPECT_LT(e.min_pivot(), 1e-12 * e.max_pivot());
    } catch (const SingularOperator&) {
        flagged = true;
    }
    EXPECT_TRUE(flagged);
    EXPECT_NO_THROW(DirichletProblem(m, k2 + 0.5));
}

TEST(DirichletProblem, RowLengthChecked) {
    Case c(DomainSpec{1.0, 1.0, -0.5, 0.5}, 20);
    const DirichletProblem p(c.map, 1.0);
    std::vector<double> short_row(5, 0.0), row(21, 0.0);
    EXPECT_THROW(p.solve(short_row, row), InvalidArgument);
    EXPECT_NO_THROW(p.solve(row, row));
}

TEST(DirichletProblem, FieldSolveMatchesRowSolve) {
    Case c(DomainSpec{4.0, 0.4, -1.0, 1.0}, 201);
    const DirichletProblem p(c.map, 5.0);
    std::vector<double> bottom(202), top(202);
    for (int i = 0; i <= 201; ++i) {
        bottom[i] = std::exp(-c.grid.x(i) * c.grid.x(i));
        top[i] = 0.5 * bottom[i];
    }
    bottom.front() = bottom.back() = top.front() = top.back() = 0.0;
    GridFunction bv(c.grid);
    for (int i = 0; i <= 201; ++i) {
        bv(i, 0) = bottom[i];
        bv(i, c.grid.my()) = top[i];
    }
    EXPECT_EQ(max_error(p.solve(bottom, top), p.solve_field(bv)), 0.0);
}

// Localized boundary data: widening the strip barely changes the field near
// the accessible part.
TEST(DirichletProblem, TruncationInsensitiveForLocalizedData) {
    auto centre_value = [](double A) {
        const DomainSpec d{A, 0.4, -1.0, 1.0};
        const int nx = static_cast<int>(std::lround(A * 100));
        const Grid g = build_grid(d, nx);
        const BoundaryIndexMap m = classify_boundary(g, d);
        std::vector<double> bottom(nx + 1, 0.0), top(nx + 1, 0.0);
        for (int i = 0; i <= nx; ++i) {
            const double x = g.x(i);
            if (std::abs(x) < 1.0) bottom[i] = std::pow(std::cos(0.5 * M_PI * x), 2);
        }
        const GridFunction u = solve_dirichlet(bottom, top, m, 5.0);
        return u(nx / 2, g.my() / 2);
    };
    const double u2 = centre_value(2.0);
    const double u4 = centre_value(4.0);
    EXPECT_GT(std::abs(u2), 0.1);
    EXPECT_LT(std::abs(u2 - u4), 1e-6);
}
