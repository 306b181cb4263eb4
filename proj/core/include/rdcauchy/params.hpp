#pragma once

namespace rdcauchy {

// Wavenumber and Robin parameters of the Helmholtz problems.
struct ProblemParams {
    double k2 = 5.0;   // k^2
    double mu0 = 2.0;  // Robin parameter on Gamma0
    double mu1 = 2.0;  // Robin parameter on Gamma1

    // mu0, mu1 >= 0 and finite k2. require_robin adds mu0 + mu1 > 0.
    void validate(bool require_robin = false) const;
};

}  // namespace rdcauchy
