#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rdcauchy/fd_core.hpp"

namespace rdcauchy {

enum class SolveMethod : unsigned char {
    Auto,               // banded unless the band would exceed max_band_entries
    DirectBanded,       // symmetric banded LDL^T, no pivoting
    ConjugateGradient,  // Jacobi-preconditioned CG on -K; requires -K > 0
};

enum class Ordering : unsigned char {
    XMajor,  // assembly numbering, bandwidth ~ my + 1
    YMajor,  // row by row, bandwidth ~ nx + 1; used for cross-checks
};

struct FactorOptions {
    SolveMethod method = SolveMethod::Auto;
    Ordering ordering = Ordering::XMajor;
    double residual_tol = 1e-10;
    std::size_t max_band_entries = std::size_t{1} << 26;
    int max_refinements = 3;
    std::size_t max_cg_iterations = 0;  // 0 -> 10 * n
};

// Factor-once handle tied to one OperatorMatrix. Immutable; solve() uses
// private workspace so concurrent solves against one handle are safe.
class Factorization {
public:
    SolveMethod method() const noexcept { return method_; }
    Ordering ordering() const noexcept { return ordering_; }
    const OperatorMatrix& matrix() const noexcept { return *matrix_; }
    std::size_t size() const noexcept { return matrix_->size(); }

    std::size_t bandwidth() const noexcept { return bandwidth_; }
    std::size_t band_entries() const noexcept { return band_.size(); }

    // D of K = L D L^T in factorization order (direct method only).
    std::span<const double> pivots() const noexcept { return pivots_; }
    double min_abs_pivot() const noexcept { return min_abs_pivot_; }
    double max_abs_pivot() const noexcept { return max_abs_pivot_; }
    // Inertia: number of positive pivots of K (Sylvester).
    std::size_t positive_pivots() const noexcept { return positive_pivots_; }

    // True when -K is positive definite, i.e. the discrete form a_mu is
    // coercive on the unknown space. For CG this is only the diagonal test.
    bool coercive() const noexcept { return coercive_; }

    std::vector<double> solve(std::span<const double> rhs) const;

private:
    friend Factorization factorize(const OperatorMatrix&, const FactorOptions&);
    Factorization() = default;

    void solve_banded(std::span<double> x) const;
    std::vector<double> solve_cg(std::span<const double> rhs) const;

    std::shared_ptr<const OperatorMatrix> matrix_;
    FactorOptions options_;
    SolveMethod method_ = SolveMethod::DirectBanded;
    Ordering ordering_ = Ordering::XMajor;
    std::vector<std::size_t> position_;  // unknown -> factorization position
    std::size_t bandwidth_ = 0;
    std::vector<double> band_;  // row i holds L(i, i-w .. i-1)
    std::vector<double> pivots_;
    std::vector<double> inv_diag_;  // CG preconditioner
    double min_abs_pivot_ = 0.0;
    double max_abs_pivot_ = 0.0;
    std::size_t positive_pivots_ = 0;
    bool coercive_ = false;
    double matrix_norm_ = 0.0;
};

// Throws SingularOperator on an exactly vanishing pivot.
Factorization factorize(const OperatorMatrix& matrix, const FactorOptions& options = {});

// Residual ||b - K x||_inf <= tol (||K||_inf ||x||_inf + ||b||_inf) holds on
// every returned solution; otherwise IterationStalled carries the best residual.
inline std::vector<double> solve(const Factorization& fact, std::span<const double> rhs) {
    return fact.solve(rhs);
}

}  // namespace rdcauchy
