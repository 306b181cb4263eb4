#include "rdcauchy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rdcauchy/error.hpp"
#include "rdcauchy/fd_core.hpp"
#include "rdcauchy/linsolve.hpp"

namespace rdcauchy {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

// Tridiagonal generalized problem A v = lambda W v for the ghost-point scheme
// on n cells; the end rows are halved so that A is symmetric and W = diag(1/2, 1, .., 1, 1/2).
struct Tridiag {
    std::vector<double> diag, off, mass;
};

Tridiag robin_tridiag(double mu0, double mu1, double L, int n) {
    const double h = L / n;
    const double ih2 = 1.0 / (h * h);
    const auto N = static_cast<std::size_t>(n + 1);
    Tridiag t{std::vector<double>(N, 2.0 * ih2), std::vector<double>(N - 1, -ih2),
              std::vector<double>(N, 1.0)};
    t.diag[0] = (1.0 + h * mu0) * ih2;
    t.diag[N - 1] = (1.0 + h * mu1) * ih2;
    t.mass[0] = t.mass[N - 1] = 0.5;
    return t;
}

// Solves (A - sigma W) x = b in place; A - sigma W must be definite.
void tridiag_solve(const Tridiag& t, double sigma, std::vector<double>& b) {
    const std::size_t N = t.diag.size();
    std::vector<double> c(N);
    double d = t.diag[0] - sigma * t.mass[0];
    b[0] /= d;
    for (std::size_t i = 1; i < N; ++i) {
        c[i - 1] = t.off[i - 1] / d;
        d = t.diag[i] - sigma * t.mass[i] - t.off[i - 1] * c[i - 1];
        b[i] = (b[i] - t.off[i - 1] * b[i - 1]) / d;
    }
    for (std::size_t i = N - 1; i-- > 0;) b[i] -= c[i] * b[i + 1];
}

double smallest_tridiag_eigenvalue(const Tridiag& t) {
    const std::size_t N = t.diag.size();
    std::vector<double> v(N), av(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i));
    auto rayleigh = [&](const std::vector<double>& x) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double ax = t.diag[i] * x[i];
            if (i > 0) ax += t.off[i - 1] * x[i - 1];
            if (i + 1 < N) ax += t.off[i] * x[i + 1];
            num += x[i] * ax;
            den += t.mass[i] * x[i] * x[i];
        }
        return num / den;
    };
    // A is positive semidefinite, so sigma = -1 keeps A - sigma W definite.
    const double sigma = -1.0;
    double lambda = rayleigh(v);
    for (int it = 0; it < 2000; ++it) {
        for (std::size_t i = 0; i < N; ++i) av[i] = t.mass[i] * v[i];
        tridiag_solve(t, sigma, av);
        double nrm = 0.0;
        for (double x : av) nrm = std::max(nrm, std::abs(x));
        for (std::size_t i = 0; i < N; ++i) v[i] = av[i] / nrm;
        const double next = rayleigh(v);
        if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next)) && it > 2) return next;
        lambda = next;
    }
    throw IterationStalled("robin oracle: inverse iteration did not settle", lambda);
}

}  // namespace

const char* to_string(SpectralMethod m) noexcept {
    switch (m) {
        case SpectralMethod::RootFinder: return "RootFinder";
        case SpectralMethod::FdOracle: return "FdOracle";
        case SpectralMethod::Asymptotic: return "Asymptotic";
        case SpectralMethod::ClosedForm: return "ClosedForm";
    }
    return "?";
}

double dirichlet_lambda0(double L) {
    require_positive(L, "L");
    return kPi * kPi / (L * L);
}

SpectralResult robin_lambda(double mu, double L) {
    require_positive(L, "L");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be >= 0");
    SpectralResult r;
    r.method = SpectralMethod::RootFinder;
    if (mu == 0.0) {
        r.degenerate = true;
        return r;
    }
    // g = 2 L beta mu cos(beta) - (beta^2 - mu^2 L^2) sin(beta) is cot-form times
    // 2 L beta mu sin(beta): positive near 0, equal to -2 pi L mu at pi.
    const double ml = mu * L;
    auto g = [&](double b) { return 2.0 * L * b * mu * std::cos(b) - (b * b - ml * ml) * std::sin(b); };

    const double eps = 1e-9;
    const int scan = 256;
    double lo = eps, glo = g(lo);
    double hi = kPi - eps;
    for (int s = 1; s <= scan; ++s) {
        const double b = eps + (kPi - 2.0 * eps) * s / scan;
        const double gb = g(b);
        if ((glo > 0.0) != (gb > 0.0) || gb == 0.0) {
            hi = b;
            break;
        }
        lo = b;
        glo = gb;
    }
    if ((g(lo) > 0.0) == (g(hi) > 0.0) && g(hi) != 0.0) {
        throw IterationStalled("robin_lambda: no sign change in (0, pi)", std::abs(g(hi)));
    }
    // Bisect down to adjacent doubles.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((g(mid) > 0.0) == (glo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double beta = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
    r.beta = beta;
    r.lambda = beta * beta / (L * L);
    r.residual = std::abs(g(beta)) / (2.0 * L * beta * mu);
    return r;
}

SpectralResult robin_lambda_oracle_fd(double mu0, double mu1, double L, int n) {
    require_positive(L, "L");
    if (!(mu0 >= 0.0) || !(mu1 >= 0.0)) throw InvalidArgument("mu0, mu1 must be >= 0");
    if (n < 64) throw InvalidArgument("robin oracle: n must be at least 64");
    const double coarse = smallest_tridiag_eigenvalue(robin_tridiag(mu0, mu1, L, n));
    const double fine = smallest_tridiag_eigenvalue(robin_tridiag(mu0, mu1, L, 2 * n));
    SpectralResult r;
    r.method = SpectralMethod::FdOracle;
    r.lambda = std::max(0.0, (4.0 * fine - coarse) / 3.0);
    r.beta = std::sqrt(r.lambda) * L;
    r.residual = std::abs(fine - coarse) / 3.0;  // size of the extrapolation step
    return r;
}

double lambda1_interval(double L) {
    require_positive(L, "L");
    return 4.0 * kPi * kPi / (L * L * L);
}

double asymptotic_lambda(double mu, double L) {
    require_positive(mu, "mu");
    return dirichlet_lambda0(L) - lambda1_interval(L) / mu;
}

double coercivity_margin(double k2, double mu, double L) {
    return robin_lambda(mu, L).lambda - k2;
}

double robin_mu_threshold(double k2, double L) {
    const double lambda0 = dirichlet_lambda0(L);
    if (!(k2 > 0.0)) return 0.0;
    if (k2 >= lambda0) return std::numeric_limits<double>::infinity();
    // lambda(mu) increases from 0 to lambda0.
    double lo = 0.0, hi = 1.0;
    while (robin_lambda(hi, L).lambda < k2) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e15) return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (robin_lambda(mid, L).lambda < k2 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double min_form_eigenvalue(const BoundaryIndexMap& map, double k2, double mu0, double mu1) {
    const Grid& grid = map.grid();
    if (!(mu0 >= 0.0) || !(mu1 >= 0.0)) throw InvalidArgument("min_form_eigenvalue: mu must be >= 0");
    // K(sigma) = K0 + sigma W with W the row scales, so the pencil (-K0, W)
    // has the form's eigenvalues and -K(sigma) > 0 exactly when sigma is below all of them.
    auto factor_at = [&](double sigma) {
        return factorize(assemble(grid, map, ProblemParams{sigma, mu0, mu1}, BcSpec::all_robin()),
                         FactorOptions{SolveMethod::DirectBanded});
    };
    auto mass = [](const OperatorMatrix& m, const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t r = 0; r < x.size(); ++r) y[r] = m.row_scale(r) * x[r];
    };
    auto rayleigh = [&](const OperatorMatrix& m, const std::vector<double>& x, double sigma) {
        std::vector<double> kx(x.size()), wx(x.size());
        m.multiply(x, kx);
        mass(m, x, wx);
        double num = 0.0, den = 0.0;
        for (std::size_t r = 0; r < x.size(); ++r) {
            num -= x[r] * kx[r];
            den += x[r] * wx[r];
        }
        // x^T (-K(sigma)) x / x^T W x = lambda - sigma.
        return num / den + sigma;
    };
    auto inverse_iterate = [&](const Factorization& f, double sigma, std::vector<double>& v,
                               int max_it, double tol) {
        const OperatorMatrix& m = f.matrix();
        std::vector<double> w(v.size());
        double lambda = rayleigh(m, v, sigma);
        for (int it = 0; it < max_it; ++it) {
            mass(m, v, w);
            v = f.solve(w);
            double nrm = 0.0;
            for (double x : v) nrm = std::max(nrm, std::abs(x));
            for (double& x : v) x /= nrm;
            const double next = rayleigh(m, v, sigma);
            if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next)) && it > 2) return std::pair{next, true};
            lambda = next;
        }
        return std::pair{lambda, false};
    };

    double sigma = -1.0;
    Factorization f = factor_at(sigma);
    std::vector<double> v(f.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        const std::size_t node = f.matrix().node_of(r);
        const double x = grid.x(grid.column_of(node));
        const double A = grid.domain().half_width;
        v[r] = std::cos(0.5 * kPi * x / A) + 1e-3 * std::sin(static_cast<double>(r));
    }
    const double estimate = inverse_iterate(f, sigma, v, 20, 1e-13).first;

    // Move the shift just below the estimate, backing off until the inertia
    // confirms that no eigenvalue lies under it.
    double gap = 1e-3 * std::max(1.0, std::abs(estimate));
    for (int tries = 0; tries < 40; ++tries) {
        const double trial = estimate - gap;
        Factorization ft = factor_at(trial);
        if (ft.coercive()) {
            sigma = trial;
            f = std::move(ft);
            break;
        }
        gap *= 4.0;
    }
    auto [lambda, ok] = inverse_iterate(f, sigma, v, 1000, 1e-12);
    if (!ok) throw IterationStalled("min_form_eigenvalue: inverse iteration did not settle", lambda);
    return lambda - k2;
}

}  // namespace rdcauchy
