#include "rdcauchy/fd_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

void ProblemParams::validate(bool require_robin) const {
    if (!std::isfinite(k2)) throw InvalidArgument("params: k2 must be finite");
    if (!(mu0 >= 0.0) || !std::isfinite(mu0)) throw InvalidArgument("params: mu0 must be >= 0");
    if (!(mu1 >= 0.0) || !std::isfinite(mu1)) throw InvalidArgument("params: mu1 must be >= 0");
    if (require_robin && !(mu0 + mu1 > 0.0)) {
        throw InvalidArgument("params: Robin closure needs mu0 + mu1 > 0");
    }
}

GridFunction::GridFunction(const Grid& grid, double fill)
    : nx_(grid.nx()), my_(grid.my()), values_(grid.node_count(), fill) {}

double GridFunction::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

BoundaryFunction::BoundaryFunction(const BoundaryIndexMap& map, Boundary which, double fill)
    : boundary(which), nodes(map.nodes(which)), values(nodes.size(), fill) {}

double l2_norm(const BoundaryFunction& f, const BoundaryIndexMap& map) {
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += map.weight(f.nodes[k]) * f.values[k] * f.values[k];
    return std::sqrt(s);
}

double l2_distance(const BoundaryFunction& f, const BoundaryFunction& g,
                   const BoundaryIndexMap& map) {
    if (f.nodes != g.nodes) throw InvalidArgument("l2_distance: boundary functions live on different nodes");
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double d = f.values[k] - g.values[k];
        s += map.weight(f.nodes[k]) * d * d;
    }
    return std::sqrt(s);
}

void scatter(const BoundaryFunction& f, GridFunction& dst) {
    for (std::size_t k = 0; k < f.size(); ++k) dst[f.nodes[k]] = f.values[k];
}

Closure BcSpec::closure(Segment segment) const {
    switch (segment) {
        case Segment::Gamma0: return gamma0;
        case Segment::Gamma1Bottom: return gamma1_bottom;
        case Segment::Gamma1Top: return gamma1_top;
        case Segment::End: return Closure::Dirichlet;
        case Segment::Interior: break;
    }
    throw InvalidArgument("bc: interior nodes carry no closure");
}

double OperatorMatrix::entry(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        if (cols_[k] == c) return vals_[k];
    }
    return 0.0;
}

double OperatorMatrix::inf_norm() const noexcept {
    double m = 0.0;
    for (std::size_t r = 0; r + 1 < row_ptr_.size(); ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(vals_[k]);
        m = std::max(m, s);
    }
    return m;
}

void OperatorMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += vals_[k] * x[cols_[k]];
        y[r] = s;
    }
}

std::vector<double> OperatorMatrix::rhs(const GridFunction& data, const GridFunction* source) const {
    if (!data.matches(grid_)) throw InvalidArgument("rhs: data field does not match the grid");
    if (source && !source->matches(grid_)) throw InvalidArgument("rhs: source does not match the grid");
    const double h = grid_.h();
    std::vector<double> b(size(), 0.0);
    for (std::size_t r = 0; r < size(); ++r) {
        const std::size_t node = unknown_nodes_[r];
        double v = 0.0;
        if (source) v += row_scale_[r] * (*source)[node];
        if (robin_mu_[node] >= 0.0) v -= data[node] / h;
        for (std::size_t k = dir_ptr_[r]; k < dir_ptr_[r + 1]; ++k) v -= dir_vals_[k] * data[dir_nodes_[k]];
        b[r] = v;
    }
    return b;
}

GridFunction OperatorMatrix::expand(std::span<const double> x, const GridFunction& data) const {
    if (x.size() != size()) throw InvalidArgument("expand: unknown vector has the wrong length");
    GridFunction u(grid_);
    for (std::size_t node = 0; node < u.size(); ++node) {
        const long r = unknown_of_[node];
        u[node] = r < 0 ? data[node] : x[static_cast<std::size_t>(r)];
    }
    return u;
}

std::vector<double> OperatorMatrix::restrict_to_unknowns(const GridFunction& u) const {
    std::vector<double> x(size());
    for (std::size_t r = 0; r < size(); ++r) x[r] = u[unknown_nodes_[r]];
    return x;
}

std::vector<double> OperatorMatrix::residual(const GridFunction& u, const GridFunction& data,
                                             const GridFunction* source) const {
    const std::vector<double> x = restrict_to_unknowns(u);
    // Dirichlet couplings are read from u itself; data only supplies eta.
    std::vector<double> res(size());
    multiply(x, res);
    const double h = grid_.h();
    for (std::size_t r = 0; r < size(); ++r) {
        const std::size_t node = unknown_nodes_[r];
        for (std::size_t k = dir_ptr_[r]; k < dir_ptr_[r + 1]; ++k) res[r] += dir_vals_[k] * u[dir_nodes_[k]];
        double b = 0.0;
        if (source) b += row_scale_[r] * (*source)[node];
        if (robin_mu_[node] >= 0.0) b -= data[node] / h;
        res[r] = (res[r] - b) / row_scale_[r];
    }
    return res;
}

OperatorMatrix assemble(const Grid& grid, const BoundaryIndexMap& map, const ProblemParams& params,
                        const BcSpec& bc) {
    params.validate();
    const int nx = grid.nx();
    const int my = grid.my();
    if (nx < 2 || my < 2) throw InvalidArgument("assemble: grid needs at least one interior node per direction");
    if (map.grid().nx() != nx || map.grid().my() != my) {
        throw InvalidArgument("assemble: boundary map was built for a different grid");
    }

    OperatorMatrix m(grid, params, bc);
    const std::size_t nodes = grid.node_count();
    m.unknown_of_.assign(nodes, -1);
    m.robin_mu_.assign(nodes, -1.0);

    auto mu_of = [&](Segment s) { return s == Segment::Gamma0 ? params.mu0 : params.mu1; };

    // x-major numbering keeps the bandwidth at about my + 1.
    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= my; ++j) {
            const std::size_t node = grid.index(i, j);
            const Segment s = map.segment(node);
            if (s == Segment::Interior) {
                m.unknown_of_[node] = static_cast<long>(m.unknown_nodes_.size());
                m.unknown_nodes_.push_back(node);
            } else if (bc.closure(s) == Closure::Robin) {
                m.robin_mu_[node] = mu_of(s);
                m.unknown_of_[node] = static_cast<long>(m.unknown_nodes_.size());
                m.unknown_nodes_.push_back(node);
            }
        }
    }

    const double h = grid.h();
    const double ih2 = 1.0 / (h * h);
    const double k2 = params.k2;
    const std::size_t n = m.unknown_nodes_.size();
    m.row_scale_.resize(n);
    m.row_ptr_.reserve(n + 1);
    m.dir_ptr_.reserve(n + 1);
    m.row_ptr_.push_back(0);
    m.dir_ptr_.push_back(0);

    struct Coupling {
        int i, j;
        double w;
    };
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t node = m.unknown_nodes_[r];
        const int i = grid.column_of(node);
        const int j = grid.row_of(node);
        const bool robin = m.robin_mu_[node] >= 0.0;

        double diag;
        Coupling nb[4];
        int count = 0;
        if (!robin) {
            diag = -4.0 * ih2 + k2;
            nb[count++] = {i - 1, j, ih2};
            nb[count++] = {i + 1, j, ih2};
            nb[count++] = {i, j - 1, ih2};
            nb[count++] = {i, j + 1, ih2};
            m.row_scale_[r] = 1.0;
        } else {
            const int jin = j == 0 ? 1 : my - 1;
            diag = -(2.0 + h * m.robin_mu_[node]) * ih2 + 0.5 * k2;
            nb[count++] = {i - 1, j, 0.5 * ih2};
            nb[count++] = {i + 1, j, 0.5 * ih2};
            nb[count++] = {i, jin, ih2};
            m.row_scale_[r] = 0.5;
        }

        row.clear();
        row.emplace_back(r, diag);
        for (int c = 0; c < count; ++c) {
            const std::size_t q = grid.index(nb[c].i, nb[c].j);
            const long rq = m.unknown_of_[q];
            if (rq < 0) {
                m.dir_nodes_.push_back(q);
                m.dir_vals_.push_back(nb[c].w);
            } else {
                row.emplace_back(static_cast<std::size_t>(rq), nb[c].w);
            }
        }
        std::sort(row.begin(), row.end());
        for (const auto& [c, v] : row) {
            m.cols_.push_back(c);
            m.vals_.push_back(v);
            const std::size_t d = c > r ? c - r : r - c;
            m.bandwidth_ = std::max(m.bandwidth_, d);
        }
        m.row_ptr_.push_back(m.cols_.size());
        m.dir_ptr_.push_back(m.dir_nodes_.size());
    }
    return m;
}

double quadratic_form(const GridFunction& u, const BoundaryIndexMap& map,
                      const ProblemParams& params) {
    const Grid& g = map.grid();
    if (!u.matches(g)) throw InvalidArgument("quadratic_form: field does not match the grid");
    const int nx = g.nx();
    const int my = g.my();
    const double h = g.h();

    double grad = 0.0;
    for (int j = 0; j <= my; ++j) {
        const double w = (j == 0 || j == my) ? 0.5 : 1.0;
        for (int i = 0; i < nx; ++i) {
            const double d = u(i + 1, j) - u(i, j);
            grad += w * d * d;
        }
    }
    for (int i = 0; i <= nx; ++i) {
        const double w = (i == 0 || i == nx) ? 0.5 : 1.0;
        for (int j = 0; j < my; ++j) {
            const double d = u(i, j + 1) - u(i, j);
            grad += w * d * d;
        }
    }

    double mass = 0.0;
    for (int j = 0; j <= my; ++j) {
        const double wy = (j == 0 || j == my) ? 0.5 : 1.0;
        for (int i = 0; i <= nx; ++i) {
            const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
            mass += wx * wy * u(i, j) * u(i, j);
        }
    }
    mass *= h * h;

    double b0 = 0.0;
    double b1 = 0.0;
    for (std::size_t node : map.nodes(Boundary::Gamma0)) b0 += h * u[node] * u[node];
    for (std::size_t node : map.nodes(Boundary::Gamma1)) b1 += h * u[node] * u[node];

    return grad - params.k2 * mass + params.mu0 * b0 + params.mu1 * b1;
}

BoundaryFunction trace(const GridFunction& u, const BoundaryIndexMap& map, Boundary which) {
    if (!u.matches(map.grid())) throw InvalidArgument("trace: field does not match the grid");
    BoundaryFunction f(map, which);
    for (std::size_t k = 0; k < f.size(); ++k) f.values[k] = u[f.nodes[k]];
    return f;
}

BoundaryFunction normal_derivative(const GridFunction& u, const BoundaryIndexMap& map,
                                   Boundary which) {
    const Grid& g = map.grid();
    if (!u.matches(g)) throw InvalidArgument("normal_derivative: field does not match the grid");
    if (g.my() < 2) throw InvalidArgument("normal_derivative: needs my >= 2");
    const double h = g.h();
    BoundaryFunction f(map, which);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const std::size_t node = f.nodes[k];
        const int i = g.column_of(node);
        if (g.row_of(node) == 0) {
            f.values[k] = -(-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) / (2.0 * h);
        } else {
            const int m = g.my();
            f.values[k] = (3.0 * u(i, m) - 4.0 * u(i, m - 1) + u(i, m - 2)) / (2.0 * h);
        }
    }
    return f;
}

BoundaryFunction flux_normal_derivative(const GridFunction& u, const BoundaryIndexMap& map,
                                        Boundary which, double k2, const GridFunction* source) {
    const Grid& g = map.grid();
    if (!u.matches(g)) throw InvalidArgument("flux_normal_derivative: field does not match the grid");
    const double h = g.h();
    BoundaryFunction f(map, which);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const std::size_t node = f.nodes[k];
        const int i = g.column_of(node);
        const int j = g.row_of(node);
        const int jin = j == 0 ? 1 : g.my() - 1;
        const double u0 = u(i, j);
        const double lap_x = (u(i - 1, j) - 2.0 * u0 + u(i + 1, j)) / (h * h);
        const double s = source ? (*source)[node] : 0.0;
        f.values[k] = (u0 - u(i, jin)) / h - 0.5 * h * (lap_x + k2 * u0 - s);
    }
    return f;
}

}  // namespace rdcauchy
