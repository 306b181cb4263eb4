#include "rdcauchy/iterate.hpp"

#include <algorithm>
#include <cmath>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

namespace {

constexpr double kRunaway = 1e150;
constexpr std::size_t kMinHistory = 100;

bool in_boundary(const BoundaryFunction& f, const BoundaryIndexMap& map, Boundary b) {
    return f.boundary == b && f.nodes == map.nodes(b);
}

}  // namespace

const char* to_string(Classification c) noexcept {
    switch (c) {
        case Classification::Convergent: return "Convergent";
        case Classification::Divergent: return "Divergent";
        case Classification::Ambiguous: return "Ambiguous";
        case Classification::NotLocalized: return "NotLocalized";
    }
    return "?";
}

const char* to_string(MinMuKind kind) noexcept {
    switch (kind) {
        case MinMuKind::Value: return "Value";
        case MinMuKind::NoneNeeded: return "NoneNeeded";
        case MinMuKind::NotLocalized: return "NotLocalized";
    }
    return "?";
}

ConvergenceFit classify_convergence(std::span<const double> errors) {
    ConvergenceFit fit;
    const std::size_t n = errors.size();
    if (n < 2) return fit;
    const double e0 = errors.front();
    const double en = errors.back();
    if (!std::isfinite(en)) {
        fit.classification = Classification::Divergent;
        fit.rate = HUGE_VAL;
        return fit;
    }

    // Least squares for log e_k = c + k log(rho) over the second half.
    const std::size_t start = n / 2;
    const std::size_t m = n - start;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = start; k < n; ++k) {
        const double x = static_cast<double>(k - start);
        const double y = std::log(std::max(errors[k], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double md = static_cast<double>(m);
    const double den = md * sxx - sx * sx;
    const double slope = den > 0.0 ? (md * sxy - sx * sy) / den : 0.0;
    fit.rate = std::exp(slope);

    if (n < kMinHistory) return fit;
    if (fit.rate <= 0.9995 && en < e0) {
        fit.classification = Classification::Convergent;
    } else if (fit.rate >= 1.0005 || en > 10.0 * e0) {
        fit.classification = Classification::Divergent;
    }
    return fit;
}

AlternatingIteration::AlternatingIteration(const BoundaryIndexMap& map,
                                           const ProblemParams& params, const CauchyData& data,
                                           std::optional<BoundaryFunction> eta0,
                                           const FactorOptions& factor)
    : map_(&map),
      params_(params),
      prob_a_(map, params, BvpOptions{factor, true}),
      prob_b_(map, params, BvpOptions{factor, true}),
      f0_(data.f0),
      g_(data.g0) {
    if (!in_boundary(data.f0, map, Boundary::Gamma0) || !in_boundary(data.g0, map, Boundary::Gamma0)) {
        throw InvalidArgument("alternate: Cauchy data must live on Gamma0");
    }
    for (std::size_t n = 0; n < g_.values.size(); ++n) g_.values[n] += params.mu0 * f0_.values[n];
    if (eta0) {
        if (!in_boundary(*eta0, map, Boundary::Gamma1)) {
            throw InvalidArgument("alternate: eta0 must live on Gamma1");
        }
        eta_ = std::move(*eta0);
    } else {
        eta_ = BoundaryFunction(map, Boundary::Gamma1);
    }
    report_.domain = map.grid().domain();
    report_.nx = map.grid().nx();
    report_.params = params;
    report_.phi = BoundaryFunction(map, Boundary::Gamma1);
}

void AlternatingIteration::set_reference(const GridFunction& u_ref) {
    if (!u_ref.matches(map_->grid())) throw InvalidArgument("alternate: reference does not match the grid");
    ref_top_ = trace(u_ref, *map_, Boundary::Top);
}

void AlternatingIteration::set_checkpoints(std::vector<int> checkpoints) {
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints_ = std::move(checkpoints);
}

void AlternatingIteration::run(int n) {
    for (int s = 0; s < n && !blown_up(); ++s) {
        u_even_ = prob_a_.solve(f0_, eta_);
        BoundaryFunction phi = trace(u_even_, *map_, Boundary::Gamma1);

        bool runaway = false;
        if (ref_top_) {
            const double e = l2_distance(trace(u_even_, *map_, Boundary::Top), *ref_top_, *map_);
            report_.errors.push_back(e);
            runaway = !std::isfinite(e) || e > kRunaway;
        } else {
            const double m = u_even_.max_abs();
            runaway = !std::isfinite(m) || m > kRunaway;
        }
        if (std::binary_search(checkpoints_.begin(), checkpoints_.end(), step_)) {
            report_.snapshots.emplace_back(step_, phi);
        }
        report_.phi = phi;
        ++report_.steps;
        if (runaway) {
            report_.blowup_index = step_;
            report_.classification = Classification::Divergent;
            ++step_;
            return;
        }

        u_odd_ = prob_b_.solve(g_, phi);
        BoundaryFunction eta = flux_normal_derivative(u_odd_, *map_, Boundary::Gamma1, params_.k2);
        const BoundaryFunction t = trace(u_odd_, *map_, Boundary::Gamma1);
        for (std::size_t k = 0; k < eta.values.size(); ++k) eta.values[k] += params_.mu1 * t.values[k];
        eta_ = std::move(eta);
        ++step_;
    }
}

IterationReport alternate(const CauchyData& data, std::optional<BoundaryFunction> eta0,
                          const BoundaryIndexMap& map, const ProblemParams& params,
                          const IterationOptions& options, const GridFunction* u_ref) {
    if (options.n_iter < 1) throw InvalidArgument("alternate: n_iter must be positive");
    AlternatingIteration it(map, params, data, std::move(eta0), options.factor);
    if (u_ref) it.set_reference(*u_ref);
    it.set_checkpoints(options.checkpoints);
    it.run(options.n_iter);
    IterationReport report = std::move(it.report());
    if (report.blowup_index < 0) {
        const ConvergenceFit fit = classify_convergence(report.errors);
        report.rate = fit.rate;
        report.classification = fit.classification;
    }
    return report;
}

void run_classified(AlternatingIteration& it, const ExtensionPolicy& policy) {
    if (policy.n_iter < 1 || policy.factor < 2 || policy.max_extensions < 0) {
        throw InvalidArgument("extension policy: need n_iter >= 1, factor >= 2, max_extensions >= 0");
    }
    IterationReport& r = it.report();
    long target = policy.n_iter;
    it.run(static_cast<int>(std::max(0L, target - r.steps)));
    for (;;) {
        if (it.blown_up()) {
            r.classification = Classification::Divergent;
            r.rate = classify_convergence(r.errors).rate;
            return;
        }
        const ConvergenceFit fit = classify_convergence(r.errors);
        r.rate = fit.rate;
        r.classification = fit.classification;
        if (fit.classification != Classification::Ambiguous || r.extensions >= policy.max_extensions) {
            break;
        }
        target *= policy.factor;
        ++r.extensions;
        it.run(static_cast<int>(target - r.steps));
    }
    if (r.classification == Classification::Ambiguous && policy.resolve_by_endpoint &&
        !r.errors.empty()) {
        r.classification = r.final_error() < r.initial_error() ? Classification::Convergent
                                                               : Classification::Divergent;
        r.resolved_by_endpoint = true;
    }
}

Localization localization_check(const GridFunction& u, const Grid& grid, double band_left,
                                double band_right, double tol) {
    if (!u.matches(grid)) throw InvalidArgument("localization: field does not match the grid");
    double inside = 0.0, outside = 0.0;
    const double eps = 1e-9 * grid.h();
    for (int j = 0; j <= grid.my(); ++j) {
        const double wy = (j == 0 || j == grid.my()) ? 0.5 : 1.0;
        for (int i = 0; i <= grid.nx(); ++i) {
            const double wx = (i == 0 || i == grid.nx()) ? 0.5 : 1.0;
            const double v = u(i, j);
            const double w = wx * wy * v * v;
            const double x = grid.x(i);
            if (x < band_left - eps || x > band_right + eps) {
                outside += w;
            } else {
                inside += w;
            }
        }
    }
    Localization loc;
    const double total = inside + outside;
    if (total > 0.0) loc.fraction = outside / total;
    loc.localized = !(loc.fraction > tol);
    return loc;
}

CellEvaluation evaluate_cell(const SweepSetup& setup, const ProblemParams& params) {
    CellEvaluation ev;
    ev.params = params;
    try {
        const Grid grid = build_grid(setup.domain, setup.nx);
        const BoundaryIndexMap map = classify_boundary(grid, setup.domain);
        const SynthesizedData data =
            synthesize_cauchy(map, params.k2, setup.bottom, setup.top, BvpOptions{setup.factor});
        AlternatingIteration it(map, params, data.cauchy, std::nullopt, setup.factor);
        it.set_reference(data.u_ref);
        run_classified(it, setup.policy);
        const IterationReport& r = it.report();
        ev.classification = r.classification;
        ev.rate = r.rate;
        ev.iterations = r.iterations();
        ev.initial_error = r.initial_error();
        ev.final_error = r.final_error();
        ev.resolved_by_endpoint = r.resolved_by_endpoint;
        ev.blowup_index = r.blowup_index;
    } catch (const InvalidArgument&) {
        throw;
    } catch (const Error& e) {
        ev.classification = Classification::Divergent;
        ev.error = e.what();
    }
    return ev;
}

ThresholdResult threshold_k2(const SweepSetup& setup, double mu, double k2_lo, double k2_hi,
                             double resolution) {
    if (!(k2_lo < k2_hi) || !(resolution > 0.0)) {
        throw InvalidArgument("threshold_k2: need k2_lo < k2_hi and a positive resolution");
    }
    ThresholdResult out;
    auto converges = [&](double k2) {
        out.evaluations.push_back(evaluate_cell(setup, ProblemParams{k2, mu, mu}));
        return out.evaluations.back().classification == Classification::Convergent;
    };
    if (!converges(k2_lo)) {
        throw NoTransitionInRange("threshold_k2: iteration does not converge at the lower end k^2 = " +
                                  std::to_string(k2_lo));
    }
    if (converges(k2_hi)) {
        throw NoTransitionInRange("threshold_k2: iteration still converges at the upper end k^2 = " +
                                  std::to_string(k2_hi));
    }
    double lo = k2_lo, hi = k2_hi;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (converges(mid) ? lo : hi) = mid;
    }
    out.lo = lo;
    out.hi = hi;
    out.value = 0.5 * (lo + hi);
    return out;
}

MinMuResult min_mu(const SweepSetup& setup, double k2, double mu_max, double resolution,
                   double localization_tol) {
    if (!(mu_max >= 1.0) || !(resolution > 0.0)) {
        throw InvalidArgument("min_mu: need mu_max >= 1 and a positive resolution");
    }
    MinMuResult out;
    {
        const Grid grid = build_grid(setup.domain, setup.nx);
        const BoundaryIndexMap map = classify_boundary(grid, setup.domain);
        const SynthesizedData data =
            synthesize_cauchy(map, k2, setup.bottom, setup.top, BvpOptions{setup.factor});
        out.localization = localization_check(data.u_ref, grid, setup.domain.access_left,
                                              setup.domain.access_right, localization_tol);
    }
    if (!out.localization.localized) {
        out.kind = MinMuKind::NotLocalized;
        return out;
    }
    auto converges = [&](double mu) {
        out.evaluations.push_back(evaluate_cell(setup, ProblemParams{k2, mu, mu}));
        return out.evaluations.back().classification == Classification::Convergent;
    };
    if (converges(0.0)) {
        out.kind = MinMuKind::NoneNeeded;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    while (!converges(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > mu_max) {
            throw NoTransitionInRange("min_mu: no convergent mu up to " + std::to_string(mu_max) +
                                      " for k^2 = " + std::to_string(k2));
        }
    }
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (converges(mid) ? hi : lo) = mid;
    }
    out.kind = MinMuKind::Value;
    out.lo = lo;
    out.hi = hi;
    out.value = 0.5 * (lo + hi);
    return out;
}

}  // namespace rdcauchy
