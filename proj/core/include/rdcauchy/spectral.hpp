#pragma once

#include "rdcauchy/geometry.hpp"

namespace rdcauchy {

enum class SpectralMethod : unsigned char { RootFinder, FdOracle, Asymptotic, ClosedForm };

const char* to_string(SpectralMethod m) noexcept;

struct SpectralResult {
    double lambda = 0.0;
    double beta = 0.0;  // beta = alpha L, where the eigenfunction is built from sin/cos(alpha y)
    SpectralMethod method = SpectralMethod::ClosedForm;
    double residual = 0.0;
    // mu = 0: the transcendental equation degenerates and lambda is the Neumann value 0.
    bool degenerate = false;
};

// pi^2 / L^2, the first Dirichlet eigenvalue of -d^2/dy^2 on [0, L].
double dirichlet_lambda0(double L);

// First eigenvalue of -Y'' = lambda Y, Y'(0) - mu Y(0) = Y'(L) + mu Y(L) = 0,
// from the smallest root beta in (0, pi) of
//   cot(beta) = (beta^2 - mu^2 L^2) / (2 L beta mu),   lambda = beta^2 / L^2.
// The residual is that of the equation multiplied through by sin(beta).
SpectralResult robin_lambda(double mu, double L);

// Independent check: ghost-point finite differences with n and 2n cells,
// inverse iteration to 1e-10, Richardson extrapolated. Allows mu0 != mu1.
SpectralResult robin_lambda_oracle_fd(double mu0, double mu1, double L, int n = 512);

// int over the two ends of |u0'|^2 divided by int_0^L u0^2, u0 = sin(pi y / L): 4 pi^2 / L^3.
double lambda1_interval(double L);

// lambda0 - lambda1 / mu.
double asymptotic_lambda(double mu, double L);

// robin_lambda(mu, L) - k2; positive predicts convergence and decay.
double coercivity_margin(double k2, double mu, double L);

// The mu at which robin_lambda(mu, L) = k2: 0 for k2 <= 0, +inf for k2 >= pi^2 / L^2.
double robin_mu_threshold(double k2, double L);

// Smallest eigenvalue of the discrete form
//   sum |grad u|^2 + mu0 sum_{Gamma0} u^2 + mu1 sum_{Gamma1} u^2
// relative to the trapezoid mass, minus k2, over fields vanishing on x = +-A.
// Positive means the discrete coercivity condition holds.
double min_form_eigenvalue(const BoundaryIndexMap& map, double k2, double mu0, double mu1);

}  // namespace rdcauchy
