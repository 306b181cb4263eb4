// rdcauchy: spectral checks, forward/inverse solves, table and figure runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rdcauchy/acceptance.hpp"
#include "rdcauchy/config.hpp"
#include "rdcauchy/error.hpp"
#include "rdcauchy/experiments.hpp"
#include "rdcauchy/plot.hpp"
#include "rdcauchy/spectral.hpp"

using namespace rdcauchy;

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;
constexpr int kAcceptanceFailure = 4;

struct Overrides {
    std::string config;
    std::string out;
    int nx = 0;
    double L = 0, A = 0, k2 = 0, mu0 = 0, mu1 = 0;
    int iters = 0;
    int threads = -1;
    bool paper_scale = false;
    bool render_svg = false;
    CLI::App* app = nullptr;

    bool given(const char* flag) const { return app->count(flag) > 0; }
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "key = value configuration file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--nx", o.nx, "intervals across the strip");
    sub->add_option("--L", o.L, "strip height");
    sub->add_option("--A", o.A, "half-width of the truncated strip");
    sub->add_option("--k2", o.k2, "wavenumber squared");
    sub->add_option("--mu0", o.mu0, "Robin parameter on Gamma0");
    sub->add_option("--mu1", o.mu1, "Robin parameter on Gamma1");
    sub->add_option("--iters", o.iters, "double steps before classification");
    sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
    sub->add_flag("--paper-scale", o.paper_scale, "nx = 1601 at A = 4, same mesh width elsewhere");
    sub->add_flag("--render-svg", o.render_svg, "also render SVG plots");
}

ExperimentConfig build_config(const Overrides& o) {
    ExperimentConfig cfg;
    if (!o.config.empty()) cfg = load_config(o.config);
    if (o.given("--out")) cfg.out = o.out;
    if (o.given("--nx")) cfg.nx = o.nx;
    if (o.given("--L")) cfg.domain.height = o.L;
    if (o.given("--A")) cfg.domain.half_width = o.A;
    if (o.given("--k2")) cfg.params.k2 = o.k2;
    if (o.given("--mu0")) cfg.params.mu0 = o.mu0;
    if (o.given("--mu1")) cfg.params.mu1 = o.mu1;
    if (o.given("--iters")) cfg.n_iter = o.iters;
    if (o.given("--threads")) cfg.threads = o.threads;
    if (o.paper_scale) cfg.paper_scale = true;
    if (o.render_svg) cfg.render_svg = true;
    cfg.validate();
    return cfg;
}

void print_header(const ExperimentConfig& cfg) {
    std::printf("A=%s L=%s [a,b]=[%s,%s] nx=%d k2=%s mu0=%s mu1=%s\n",
                format_number(cfg.domain.half_width).c_str(), format_number(cfg.domain.height).c_str(),
                format_number(cfg.domain.access_left).c_str(), format_number(cfg.domain.access_right).c_str(),
                cfg.nx_for(cfg.domain.half_width), format_number(cfg.params.k2).c_str(),
                format_number(cfg.params.mu0).c_str(), format_number(cfg.params.mu1).c_str());
}

int cmd_spectral(const ExperimentConfig& cfg) {
    const double L = cfg.domain.height;
    const double mu0 = cfg.params.mu0, mu1 = cfg.params.mu1;
    std::printf("lambda0 = pi^2/L^2          %.10g\n", dirichlet_lambda0(L));
    std::printf("lambda1 = 4 pi^2/L^3        %.10g\n", lambda1_interval(L));
    if (mu0 == mu1) {
        const SpectralResult r = robin_lambda(mu0, L);
        std::printf("lambda(mu) root finder      %.10g  beta=%.10g  residual=%.2e%s\n", r.lambda, r.beta,
                    r.residual, r.degenerate ? "  (mu = 0: Neumann limit)" : "");
        if (mu0 > 0) std::printf("lambda0 - lambda1/mu        %.10g\n", asymptotic_lambda(mu0, L));
        std::printf("coercivity margin (k2)      %.10g\n", coercivity_margin(cfg.params.k2, mu0, L));
    }
    const SpectralResult o = robin_lambda_oracle_fd(mu0, mu1, L);
    std::printf("lambda(mu0,mu1) FD oracle   %.10g\n", o.lambda);
    const int nx = cfg.nx_for(cfg.domain.half_width);
    const Grid g = build_grid(cfg.domain, nx);
    const BoundaryIndexMap map = classify_boundary(g, cfg.domain);
    std::printf("discrete form eigenvalue - k2 (nx=%d)  %.10g\n", nx,
                min_form_eigenvalue(map, cfg.params.k2, mu0, mu1));
    return 0;
}

int cmd_forward(const ExperimentConfig& cfg) {
    print_header(cfg);
    const Grid g = build_grid(cfg.domain, cfg.nx_for(cfg.domain.half_width));
    const BoundaryIndexMap map = classify_boundary(g, cfg.domain);
    const SynthesizedData d = synthesize_cauchy(map, cfg.params.k2, cfg.bump_bottom, cfg.bump_top);
    const Localization loc = localization_check(d.u_ref, g, cfg.domain.access_left, cfg.domain.access_right,
                                                cfg.localization_tol);
    std::printf("max |u| = %.6g, mass outside [a,b] = %.4g (%s)\n", d.u_ref.max_abs(), loc.fraction,
                loc.localized ? "localized" : "not localized");
    write_field(cfg.out / "forward_solution.dat", d.u_ref, g, -cfg.domain.half_width, cfg.domain.half_width);
    Series f0{"f0", {}, {}}, g0{"u_y(x,0)", {}, {}};
    for (std::size_t k = 0; k < d.cauchy.f0.nodes.size(); ++k) {
        const double x = g.x(g.column_of(d.cauchy.f0.nodes[k]));
        f0.x.push_back(x);
        f0.y.push_back(d.cauchy.f0.values[k]);
        g0.x.push_back(x);
        g0.y.push_back(d.g0_uy.values[k]);
    }
    write_series(cfg.out / "cauchy_f0.dat", f0);
    write_series(cfg.out / "cauchy_uy.dat", g0);
    if (cfg.render_svg) {
        render_field_svg(cfg.out / "forward_solution.svg", d.u_ref, g, -cfg.domain.half_width,
                         cfg.domain.half_width, "forward solution");
    }
    std::printf("wrote %s\n", cfg.out.string().c_str());
    return 0;
}

int cmd_solve(const ExperimentConfig& cfg) {
    print_header(cfg);
    const SolveOutcome o = run_single(cfg, true);
    const IterationReport& r = o.report;
    std::printf("%s after %d iterations (rate %.8f%s), error %.4g -> %.4g\n", to_string(r.classification),
                r.iterations(), r.rate, r.resolved_by_endpoint ? ", endpoint rule" : "", r.initial_error(),
                r.final_error());
    if (r.blowup_index >= 0) std::printf("blow-up at iteration %d\n", r.blowup_index);
    std::printf("discrete form eigenvalue - k2 = %.6g, lambda(mu) - k2 = %.6g\n", o.min_form,
                o.lambda_robin - cfg.params.k2);
    Series s{"error", {}, {}};
    for (std::size_t k = 0; k < r.errors.size(); ++k) {
        s.x.push_back(static_cast<double>(k));
        s.y.push_back(r.errors[k]);
    }
    write_series(cfg.out / "error_history.dat", s, {"classification = " + std::string(to_string(r.classification))});
    if (cfg.render_svg) render_svg(cfg.out / "error_history.svg", LinePlot{"error", "k", "error", true, {s}});
    std::printf("wrote %s\n", cfg.out.string().c_str());
    return 0;
}

int cmd_table1(const ExperimentConfig& cfg) {
    const auto rows = run_table1(cfg);
    std::printf("%6s %12s %12s %10s\n", "mu", "lambda", "oracle", "published");
    for (const auto& r : rows) {
        std::printf("%6g %12.6f %12.6f %10s%s\n", r.mu, r.root.lambda, r.oracle.lambda,
                    r.published ? format_number(*r.published).c_str() : "", r.scored ? "" : "  (not scored)");
    }
    return 0;
}

int cmd_table2(const ExperimentConfig& cfg) {
    const auto rows = run_table2(cfg);
    int failed = 0;
    for (const auto& r : rows) {
        if (r.result) {
            std::printf("A=%g nx=%d threshold k2=%.4g published=%s (%zu runs, %.1f s)\n", r.A, r.nx, r.result->value,
                        r.published ? format_number(*r.published).c_str() : "-", r.evaluations.size(), r.seconds);
        } else {
            ++failed;
            std::printf("A=%g %s\n", r.A, r.status.c_str());
        }
    }
    return failed ? kSolverFailure : 0;
}

int cmd_table3(const ExperimentConfig& cfg) {
    const auto rows = run_table3(cfg);
    int failed = 0;
    for (const auto& r : rows) {
        std::printf("L=%g k2=%g: ", r.L, r.k2);
        if (!r.result) {
            ++failed;
            std::printf("%s\n", r.status.c_str());
            continue;
        }
        if (r.result->kind == MinMuKind::Value) {
            std::printf("min mu=%.3g", r.result->value);
        } else {
            std::printf("%s", to_string(r.result->kind));
        }
        std::printf("  published=%s (%.1f s)\n", r.published.c_str(), r.seconds);
    }
    return failed ? kSolverFailure : 0;
}

int cmd_verify(const ExperimentConfig& cfg, const std::vector<int>& only) {
    AcceptanceOptions opt;
    opt.config = cfg;
    opt.only = only;
    opt.out_dir = cfg.out;
    opt.progress = &std::cerr;
    const auto results = run_acceptance(opt);
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%s\n", format_result(r).c_str());
        ok = ok && r.passed;
    }
    return ok ? 0 : kAcceptanceFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robin-Dirichlet alternating iteration for the Helmholtz Cauchy problem on a strip"};
    app.require_subcommand(1);
    Overrides o;
    std::vector<int> only;
    std::map<std::string, CLI::App*> subs;
    for (auto [name, help] : std::initializer_list<std::pair<const char*, const char*>>{
             {"spectral", "cross-section eigenvalues and coercivity indicators"},
             {"forward", "Dirichlet forward solve and Cauchy data"},
             {"solve", "run the alternating iteration for one parameter cell"},
             {"table1", "first Robin eigenvalue for the configured mu values"},
             {"table2", "convergence threshold in k2 for each truncation A"},
             {"table3", "minimum mu for convergence over (L, k2)"},
             {"figures", "plot data for the domain, data, error histories and solutions"},
             {"verify", "run the acceptance checks"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, o);
        subs[name] = sub;
    }
    subs["verify"]->add_option("--only", only, "criterion ids to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            o.app = sub;
            const ExperimentConfig cfg = build_config(o);
            if (name == "spectral") return cmd_spectral(cfg);
            if (name == "forward") return cmd_forward(cfg);
            if (name == "solve") return cmd_solve(cfg);
            if (name == "table1") return cmd_table1(cfg);
            if (name == "table2") return cmd_table2(cfg);
            if (name == "table3") return cmd_table3(cfg);
            if (name == "figures") {
                run_figures(cfg);
                std::printf("wrote %s\n", (cfg.out / "figures").string().c_str());
                return 0;
            }
            if (name == "verify") return cmd_verify(cfg, only);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "rdcauchy: %s\n", e.what());
        return kConfigError;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "rdcauchy: %s\n", e.what());
        return kConfigError;
    } catch (const Error& e) {
        std::fprintf(stderr, "rdcauchy: %s\n", e.what());
        return kSolverFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rdcauchy: %s\n", e.what());
        return kSolverFailure;
    }
    return 0;
}
