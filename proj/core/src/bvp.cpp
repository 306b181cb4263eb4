#include "rdcauchy/bvp.hpp"

#include <string>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

namespace {

Factorization checked_factorization(const BoundaryIndexMap& map, const ProblemParams& params,
                                    const BcSpec& bc, const BvpOptions& options,
                                    bool mixed, const char* label) {
    Factorization fact = factorize(assemble(map.grid(), map, params, bc), options.factor);
    if (fact.method() == SolveMethod::DirectBanded &&
        fact.min_abs_pivot() < options.resonance_ratio * fact.max_abs_pivot()) {
        throw NearResonance(std::string(label) + ": k^2 = " + std::to_string(params.k2) +
                                " is at a discrete resonance of the truncated domain",
                            fact.min_abs_pivot(), fact.max_abs_pivot());
    }
    if (mixed && !options.allow_indefinite && !fact.coercive()) {
        throw NotCoercive(std::string(label) + ": discrete form is not coercive for k^2 = " +
                          std::to_string(params.k2));
    }
    return fact;
}

void check_boundary(const BoundaryFunction& f, const BoundaryIndexMap& map, Boundary expected,
                    const char* what) {
    if (f.boundary != expected || f.nodes != map.nodes(expected)) {
        throw InvalidArgument(std::string(what) + " must live on " + to_string(expected));
    }
}

GridFunction solve_with(const Factorization& fact, const GridFunction& data,
                        const GridFunction* source) {
    const OperatorMatrix& m = fact.matrix();
    const std::vector<double> b = m.rhs(data, source);
    return m.expand(fact.solve(b), data);
}

void copy_end_values(const GridFunction* end_values, const BoundaryIndexMap& map,
                     GridFunction& data) {
    if (!end_values) return;
    const Grid& g = map.grid();
    if (!end_values->matches(g)) throw InvalidArgument("end values do not match the grid");
    for (int j = 0; j <= g.my(); ++j) {
        data(0, j) = (*end_values)(0, j);
        data(g.nx(), j) = (*end_values)(g.nx(), j);
    }
}

}  // namespace

MixedProblemA::MixedProblemA(const BoundaryIndexMap& map, const ProblemParams& params,
                             const BvpOptions& options)
    : map_(&map),
      fact_(checked_factorization(map, params, BcSpec::problem_a(), options, true, "problem A")) {}

GridFunction MixedProblemA::solve(const BoundaryFunction& f, const BoundaryFunction& eta,
                                  const GridFunction* source,
                                  const GridFunction* end_values) const {
    check_boundary(f, *map_, Boundary::Gamma0, "problem A: Dirichlet data f");
    check_boundary(eta, *map_, Boundary::Gamma1, "problem A: Robin data eta");
    GridFunction data(map_->grid());
    scatter(f, data);
    scatter(eta, data);
    copy_end_values(end_values, *map_, data);
    return solve_with(fact_, data, source);
}

MixedProblemB::MixedProblemB(const BoundaryIndexMap& map, const ProblemParams& params,
                             const BvpOptions& options)
    : map_(&map),
      fact_(checked_factorization(map, params, BcSpec::problem_b(), options, true, "problem B")) {}

GridFunction MixedProblemB::solve(const BoundaryFunction& g, const BoundaryFunction& phi,
                                  const GridFunction* source,
                                  const GridFunction* end_values) const {
    check_boundary(g, *map_, Boundary::Gamma0, "problem B: Robin data g");
    check_boundary(phi, *map_, Boundary::Gamma1, "problem B: Dirichlet data phi");
    GridFunction data(map_->grid());
    scatter(g, data);
    scatter(phi, data);
    copy_end_values(end_values, *map_, data);
    return solve_with(fact_, data, source);
}

DirichletProblem::DirichletProblem(const BoundaryIndexMap& map, double k2,
                                   const BvpOptions& options)
    : map_(&map),
      fact_(checked_factorization(map, ProblemParams{k2, 0.0, 0.0}, BcSpec::all_dirichlet(),
                                  options, false, "Dirichlet problem")) {}

GridFunction DirichletProblem::solve(std::span<const double> bottom,
                                     std::span<const double> top) const {
    const Grid& g = map_->grid();
    const auto row = static_cast<std::size_t>(g.nx() + 1);
    if (bottom.size() != row || top.size() != row) {
        throw InvalidArgument("Dirichlet problem: boundary rows need nx + 1 values");
    }
    GridFunction data(g);
    for (int i = 1; i < g.nx(); ++i) {
        data(i, 0) = bottom[static_cast<std::size_t>(i)];
        data(i, g.my()) = top[static_cast<std::size_t>(i)];
    }
    return solve_with(fact_, data, nullptr);
}

GridFunction DirichletProblem::solve_field(const GridFunction& boundary_values,
                                           const GridFunction* source) const {
    if (!boundary_values.matches(map_->grid())) {
        throw InvalidArgument("Dirichlet problem: boundary field does not match the grid");
    }
    return solve_with(fact_, boundary_values, source);
}

GridFunction solve_problem_a(const BoundaryFunction& f, const BoundaryFunction& eta,
                             const BoundaryIndexMap& map, const ProblemParams& params,
                             const BvpOptions& options) {
    return MixedProblemA(map, params, options).solve(f, eta);
}

GridFunction solve_problem_b(const BoundaryFunction& g, const BoundaryFunction& phi,
                             const BoundaryIndexMap& map, const ProblemParams& params,
                             const BvpOptions& options) {
    return MixedProblemB(map, params, options).solve(g, phi);
}

GridFunction solve_dirichlet(std::span<const double> bottom, std::span<const double> top,
                             const BoundaryIndexMap& map, double k2, const BvpOptions& options) {
    return DirichletProblem(map, k2, options).solve(bottom, top);
}

}  // namespace rdcauchy
