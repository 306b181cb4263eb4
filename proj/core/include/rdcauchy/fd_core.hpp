#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdcauchy/geometry.hpp"
#include "rdcauchy/params.hpp"

namespace rdcauchy {

// Discrete field over every grid node, row-major by y-level.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const Grid& grid, double fill = 0.0);

    int nx() const noexcept { return nx_; }
    int my() const noexcept { return my_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }
    double& operator[](std::size_t node) { return values_[node]; }
    double operator[](std::size_t node) const { return values_[node]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool matches(const Grid& grid) const noexcept {
        return nx_ == grid.nx() && my_ == grid.my();
    }

    double max_abs() const noexcept;

private:
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_ + 1) +
               static_cast<std::size_t>(i);
    }

    int nx_ = 0;
    int my_ = 0;
    std::vector<double> values_;
};

// Values on the nodes of one boundary union, in BoundaryIndexMap::nodes order.
struct BoundaryFunction {
    Boundary boundary = Boundary::Gamma0;
    std::vector<std::size_t> nodes;
    std::vector<double> values;

    BoundaryFunction() = default;
    BoundaryFunction(const BoundaryIndexMap& map, Boundary which, double fill = 0.0);

    std::size_t size() const noexcept { return values.size(); }
};

// Arc-length weighted discrete L2 norm.
double l2_norm(const BoundaryFunction& f, const BoundaryIndexMap& map);
double l2_distance(const BoundaryFunction& f, const BoundaryFunction& g,
                   const BoundaryIndexMap& map);

// Writes f's values into dst at f's nodes.
void scatter(const BoundaryFunction& f, GridFunction& dst);

enum class Closure : unsigned char { Dirichlet, Robin };

// One closure per boundary segment; End columns are always Dirichlet.
struct BcSpec {
    Closure gamma0 = Closure::Dirichlet;
    Closure gamma1_bottom = Closure::Dirichlet;
    Closure gamma1_top = Closure::Dirichlet;

    static BcSpec all_dirichlet() { return {}; }
    // u = f on Gamma0, Robin(mu1) on Gamma1.
    static BcSpec problem_a() { return {Closure::Dirichlet, Closure::Robin, Closure::Robin}; }
    // Robin(mu0) on Gamma0, u = phi on Gamma1.
    static BcSpec problem_b() { return {Closure::Robin, Closure::Dirichlet, Closure::Dirichlet}; }
    static BcSpec all_robin() { return {Closure::Robin, Closure::Robin, Closure::Robin}; }

    Closure closure(Segment segment) const;
};

// Five-point discretisation of (Delta + k^2) u = s restricted to the unknown
// (non-Dirichlet) nodes, numbered column by column (x-major).
//
// Interior rows:  (u_W + u_E + u_S + u_N - 4 u_C) / h^2 + k^2 u_C = s_C.
// Robin rows use a ghost node eliminated through the centred closure
// d_nu u + mu u = eta and are scaled by 1/2, which makes the matrix symmetric:
//   (u_W + u_E) / 2h^2 + u_in / h^2 - (2 + h mu) u_C / h^2 + k^2 u_C / 2
//       = s_C / 2 - eta / h.
class OperatorMatrix {
public:
    const Grid& grid() const noexcept { return grid_; }
    const ProblemParams& params() const noexcept { return params_; }
    const BcSpec& bc() const noexcept { return bc_; }

    std::size_t size() const noexcept { return unknown_nodes_.size(); }
    std::size_t nonzeros() const noexcept { return cols_.size(); }

    // Grid node of unknown r.
    std::size_t node_of(std::size_t r) const { return unknown_nodes_[r]; }
    // Unknown index of a node, -1 for Dirichlet nodes.
    long unknown_of(std::size_t node) const { return unknown_of_[node]; }
    bool is_robin(std::size_t node) const { return robin_mu_[node] >= 0.0; }
    double robin_mu(std::size_t node) const { return robin_mu_[node]; }

    // 1 for interior rows, 1/2 for Robin rows.
    double row_scale(std::size_t r) const { return row_scale_[r]; }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> cols() const noexcept { return cols_; }
    std::span<const double> vals() const noexcept { return vals_; }
    double entry(std::size_t r, std::size_t c) const;

    // max |r - c| over stored entries.
    std::size_t bandwidth() const noexcept { return bandwidth_; }
    // max_r sum_c |K_rc|.
    double inf_norm() const noexcept;

    void multiply(std::span<const double> x, std::span<double> y) const;

    // Right-hand side for boundary data carried on a full-grid field:
    // the prescribed value at Dirichlet nodes and eta at Robin nodes.
    // Other entries of `data` are ignored.
    std::vector<double> rhs(const GridFunction& data, const GridFunction* source = nullptr) const;

    // Embeds an unknown vector into a full field; Dirichlet nodes take `data`.
    GridFunction expand(std::span<const double> x, const GridFunction& data) const;
    std::vector<double> restrict_to_unknowns(const GridFunction& u) const;

    // Row residuals of a full field, divided by the row scale so that Robin
    // rows report the unscaled ghost-point equation.
    std::vector<double> residual(const GridFunction& u, const GridFunction& data,
                                 const GridFunction* source = nullptr) const;

private:
    friend OperatorMatrix assemble(const Grid&, const BoundaryIndexMap&, const ProblemParams&,
                                   const BcSpec&);
    OperatorMatrix(const Grid& grid, const ProblemParams& params, const BcSpec& bc)
        : grid_(grid), params_(params), bc_(bc) {}

    Grid grid_;
    ProblemParams params_;
    BcSpec bc_;
    std::vector<std::size_t> unknown_nodes_;
    std::vector<long> unknown_of_;
    std::vector<double> robin_mu_;  // -1 where not a Robin node
    std::vector<double> row_scale_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> vals_;
    // Couplings to Dirichlet nodes, folded into the right-hand side.
    std::vector<std::size_t> dir_ptr_;
    std::vector<std::size_t> dir_nodes_;
    std::vector<double> dir_vals_;
    std::size_t bandwidth_ = 0;
};

OperatorMatrix assemble(const Grid& grid, const BoundaryIndexMap& map, const ProblemParams& params,
                        const BcSpec& bc);

// Discrete a_mu(u, u): forward-difference gradients with trapezoid weights,
//   sum_edges w_e (du)^2 - k^2 sum_nodes w_n h^2 u^2
//     + mu0 sum_{Gamma0} h u^2 + mu1 sum_{Gamma1} h u^2.
// For fields vanishing on the End columns and all-Robin closures this equals
// -h^2 u^T K u exactly.
double quadratic_form(const GridFunction& u, const BoundaryIndexMap& map,
                      const ProblemParams& params);

BoundaryFunction trace(const GridFunction& u, const BoundaryIndexMap& map, Boundary which);

// Second-order one-sided outward normal derivative (-3u_0 + 4u_1 - u_2) / 2h.
BoundaryFunction normal_derivative(const GridFunction& u, const BoundaryIndexMap& map,
                                   Boundary which);

// Outward normal derivative consistent with the ghost-point Robin closure:
//   d_nu u = (u_0 - u_in) / h - (h/2) [ (u_W - 2u_0 + u_E) / h^2 + k^2 u_0 - s_0 ].
// Feeding it back as Robin data reproduces u exactly through the assembled
// operator, which keeps discrete fixed points of the alternating procedure exact.
BoundaryFunction flux_normal_derivative(const GridFunction& u, const BoundaryIndexMap& map,
                                        Boundary which, double k2,
                                        const GridFunction* source = nullptr);

}  // namespace rdcauchy
