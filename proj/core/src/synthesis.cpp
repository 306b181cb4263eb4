#include "rdcauchy/synthesis.hpp"

#include <cmath>
#include <numbers>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

void BumpSpec::validate() const {
    if (!std::isfinite(center) || !std::isfinite(amplitude)) {
        throw InvalidArgument("bump: center and amplitude must be finite");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw InvalidArgument("bump: half_width must be positive");
    }
}

double BumpSpec::operator()(double x) const noexcept {
    const double t = (x - center) / half_width;
    if (std::abs(t) >= 1.0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * t);
    return amplitude * c * c;
}

std::vector<double> bump_row(const BumpSpec& spec, const Grid& grid) {
    spec.validate();
    std::vector<double> row(static_cast<std::size_t>(grid.nx() + 1), 0.0);
    for (int i = 1; i < grid.nx(); ++i) row[static_cast<std::size_t>(i)] = spec(grid.x(i));
    return row;
}

BoundaryFunction make_bump(const BumpSpec& spec, const BoundaryIndexMap& map, Boundary which) {
    spec.validate();
    BoundaryFunction f(map, which);
    const Grid& g = map.grid();
    for (std::size_t n = 0; n < f.nodes.size(); ++n) f.values[n] = spec(g.x(g.column_of(f.nodes[n])));
    return f;
}

SynthesizedData synthesize_cauchy(const BoundaryIndexMap& map, double k2, const BumpSpec& bottom,
                                  const BumpSpec& top, const BvpOptions& options) {
    const Grid& g = map.grid();
    const DomainSpec& d = g.domain();
    if (bottom.center - bottom.half_width < d.access_left - 1e-12 ||
        bottom.center + bottom.half_width > d.access_right + 1e-12) {
        throw InvalidArgument("bump: bottom data must be supported in [a, b]");
    }
    const std::vector<double> b = bump_row(bottom, g);
    const std::vector<double> t = bump_row(top, g);
    SynthesizedData out;
    out.u_ref = solve_dirichlet(b, t, map, k2, options);
    out.cauchy.f0 = trace(out.u_ref, map, Boundary::Gamma0);
    out.cauchy.g0 = flux_normal_derivative(out.u_ref, map, Boundary::Gamma0, k2);
    out.g0_one_sided = normal_derivative(out.u_ref, map, Boundary::Gamma0);
    out.g0_uy = out.cauchy.g0;
    for (double& v : out.g0_uy.values) v = -v;
    return out;
}

}  // namespace rdcauchy
