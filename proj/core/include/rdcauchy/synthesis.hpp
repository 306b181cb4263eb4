#pragma once

#include <vector>

#include "rdcauchy/bvp.hpp"

namespace rdcauchy {

// amplitude * cos^2(pi (x - center) / (2 half_width)) for |x - center| < half_width.
struct BumpSpec {
    double center = 0.0;
    double half_width = 1.0;
    double amplitude = 1.0;
    void validate() const;
    double operator()(double x) const noexcept;
};

// Samples over a whole bottom or top row (nx + 1 values); the end columns stay 0.
std::vector<double> bump_row(const BumpSpec& spec, const Grid& grid);
BoundaryFunction make_bump(const BumpSpec& spec, const BoundaryIndexMap& map, Boundary which);

struct SynthesizedData {
    CauchyData cauchy;       // g0 is the outward derivative consistent with the scheme
    GridFunction u_ref;      // forward Dirichlet solution
    BoundaryFunction g0_uy;  // u_y(x, 0) = -g0, the convention of the test problem
    BoundaryFunction g0_one_sided;
};

// Solves the Dirichlet problem with the two bumps as bottom/top data and reads
// Cauchy data off Gamma0. Throws NearResonance at a discrete Dirichlet eigenvalue.
SynthesizedData synthesize_cauchy(const BoundaryIndexMap& map, double k2, const BumpSpec& bottom,
                                  const BumpSpec& top, const BvpOptions& options = {});

}  // namespace rdcauchy
