#include "rdcauchy/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<std::size_t> make_positions(const OperatorMatrix& m, Ordering ordering) {
    std::vector<std::size_t> position(m.size());
    std::iota(position.begin(), position.end(), std::size_t{0});
    if (ordering == Ordering::XMajor) return position;

    const Grid& g = m.grid();
    std::vector<std::size_t> order(m.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Node indices are already row-major, so sorting by node gives y-major.
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return m.node_of(a) < m.node_of(b); });
    (void)g;
    for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;
    return position;
}

}  // namespace

Factorization factorize(const OperatorMatrix& matrix, const FactorOptions& options) {
    Factorization f;
    f.matrix_ = std::make_shared<const OperatorMatrix>(matrix);
    f.options_ = options;
    f.ordering_ = options.ordering;
    f.matrix_norm_ = matrix.inf_norm();
    const std::size_t n = matrix.size();
    if (n == 0) throw InvalidArgument("factorize: operator has no unknowns");

    f.position_ = make_positions(matrix, options.ordering);
    const auto rp = matrix.row_ptr();
    const auto cols = matrix.cols();
    const auto vals = matrix.vals();

    std::size_t w = 0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
            const std::size_t a = f.position_[r];
            const std::size_t b = f.position_[cols[k]];
            w = std::max(w, a > b ? a - b : b - a);
        }
    }
    f.bandwidth_ = w;

    SolveMethod method = options.method;
    if (method == SolveMethod::Auto) {
        method = n * std::max<std::size_t>(w, 1) > options.max_band_entries
                     ? SolveMethod::ConjugateGradient
                     : SolveMethod::DirectBanded;
    }
    f.method_ = method;

    if (method == SolveMethod::ConjugateGradient) {
        f.inv_diag_.resize(n);
        bool negative = true;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = matrix.entry(r, r);
            if (d == 0.0) throw SingularOperator("factorize: zero diagonal entry");
            negative = negative && d < 0.0;
            f.inv_diag_[r] = 1.0 / d;
        }
        f.coercive_ = negative;
        return f;
    }

    // Lower band and diagonal in factorization order.
    std::vector<double> diag(n, 0.0);
    f.band_.assign(n * w, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t a = f.position_[r];
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
            const std::size_t b = f.position_[cols[k]];
            if (a == b) {
                diag[a] = vals[k];
            } else if (b < a) {
                f.band_[a * w + (b + w - a)] = vals[k];
            }
        }
    }

    f.pivots_.resize(n);
    std::vector<double> t(w);  // t_m = L(i, m) d_m over the current row
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > w ? i - w : 0;
        double* li = f.band_.data() + i * w;
        double di = diag[i];
        for (std::size_t k = lo; k < i; ++k) {
            const std::size_t klo = k > w ? k - w : 0;
            const std::size_t mlo = std::max(lo, klo);
            const double* lk = f.band_.data() + k * w;
            double s = li[k + w - i];
            for (std::size_t m = mlo; m < k; ++m) s -= t[m + w - i] * lk[m + w - k];
            t[k + w - i] = s;
            const double lik = s / f.pivots_[k];
            li[k + w - i] = lik;
            di -= s * lik;
        }
        if (di == 0.0 || !std::isfinite(di)) {
            throw SingularOperator("factorize: pivot " + std::to_string(i) + " vanished");
        }
        f.pivots_[i] = di;
    }

    f.min_abs_pivot_ = std::abs(f.pivots_[0]);
    f.max_abs_pivot_ = 0.0;
    f.positive_pivots_ = 0;
    for (double d : f.pivots_) {
        f.min_abs_pivot_ = std::min(f.min_abs_pivot_, std::abs(d));
        f.max_abs_pivot_ = std::max(f.max_abs_pivot_, std::abs(d));
        if (d > 0.0) ++f.positive_pivots_;
    }
    f.coercive_ = f.positive_pivots_ == 0;
    return f;
}

void Factorization::solve_banded(std::span<double> x) const {
    const std::size_t n = pivots_.size();
    const std::size_t w = bandwidth_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > w ? i - w : 0;
        const double* li = band_.data() + i * w;
        // Four partial sums break the add dependency chain.
        const double* lk = li + (lo + w - i);
        const double* xk = x.data() + lo;
        const std::size_t len = i - lo;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::size_t k = 0;
        for (; k + 4 <= len; k += 4) {
            s0 += lk[k] * xk[k];
            s1 += lk[k + 1] * xk[k + 1];
            s2 += lk[k + 2] * xk[k + 2];
            s3 += lk[k + 3] * xk[k + 3];
        }
        for (; k < len; ++k) s0 += lk[k] * xk[k];
        x[i] -= (s0 + s1) + (s2 + s3);
    }
    for (std::size_t i = 0; i < n; ++i) x[i] /= pivots_[i];
    for (std::size_t i = n; i-- > 0;) {
        const std::size_t lo = i > w ? i - w : 0;
        const double* li = band_.data() + i * w;
        const double xi = x[i];
        for (std::size_t k = lo; k < i; ++k) x[k] -= li[k + w - i] * xi;
    }
}

std::vector<double> Factorization::solve_cg(std::span<const double> rhs) const {
    // CG on the SPD matrix -K: solve (-K) x = -b.
    const OperatorMatrix& m = *matrix_;
    const std::size_t n = m.size();
    const std::size_t cap = options_.max_cg_iterations ? options_.max_cg_iterations : 10 * n;
    std::vector<double> x(n, 0.0), r(n), z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = -rhs[i];
    const double bnorm = inf_norm(rhs);
    if (bnorm == 0.0) return x;
    for (std::size_t i = 0; i < n; ++i) z[i] = -inv_diag_[i] * r[i];
    p = z;
    double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    double best = inf_norm(r);
    for (std::size_t it = 0; it < cap; ++it) {
        m.multiply(p, q);
        for (double& v : q) v = -v;
        const double pq = std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
        if (!(pq > 0.0)) throw SingularOperator("cg: operator is not definite");
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        const double rn = inf_norm(r);
        best = std::min(best, rn);
        if (rn <= options_.residual_tol * (matrix_norm_ * inf_norm(x) + bnorm)) return x;
        for (std::size_t i = 0; i < n; ++i) z[i] = -inv_diag_[i] * r[i];
        const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw IterationStalled("cg: iteration cap reached", best);
}

std::vector<double> Factorization::solve(std::span<const double> rhs) const {
    const OperatorMatrix& m = *matrix_;
    const std::size_t n = m.size();
    if (rhs.size() != n) throw InvalidArgument("solve: right-hand side has the wrong length");
    if (method_ == SolveMethod::ConjugateGradient) return solve_cg(rhs);

    std::vector<double> x(n, 0.0), work(n), res(n);
    const double bnorm = inf_norm(rhs);
    if (bnorm == 0.0) return x;

    auto banded_correction = [&](std::span<const double> b) {
        for (std::size_t r = 0; r < n; ++r) work[position_[r]] = b[r];
        solve_banded(work);
        for (std::size_t r = 0; r < n; ++r) x[r] += work[position_[r]];
    };

    banded_correction(rhs);
    double best = 0.0;
    for (int pass = 0;; ++pass) {
        m.multiply(x, res);
        for (std::size_t r = 0; r < n; ++r) res[r] = rhs[r] - res[r];
        const double rn = inf_norm(res);
        best = pass == 0 ? rn : std::min(best, rn);
        if (rn <= options_.residual_tol * (matrix_norm_ * inf_norm(x) + bnorm)) return x;
        if (pass >= options_.max_refinements || !std::isfinite(rn)) break;
        banded_correction(res);
    }
    throw IterationStalled("solve: residual bound not met after refinement", best);
}

}  // namespace rdcauchy
