#include "rdcauchy/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>

#include "rdcauchy/error.hpp"
#include "rdcauchy/plot.hpp"
#include "rdcauchy/task_pool.hpp"

namespace rdcauchy {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

class Csv {
public:
    Csv(const fs::path& path, const std::vector<std::string>& header) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        out_.open(path);
        if (!out_) throw Error("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
        out_ << '\n';
    }

private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string o = "\"";
        for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
        return o + "\"";
    }
    std::ofstream out_;
};

std::string num(double v) { return format_number(v); }
std::string num(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<EvaluationRecord> annotate(const SweepSetup& setup,
                                       const std::vector<CellEvaluation>& cells) {
    const Grid grid = build_grid(setup.domain, setup.nx);
    const BoundaryIndexMap map = classify_boundary(grid, setup.domain);
    std::vector<EvaluationRecord> out;
    for (const auto& c : cells) {
        EvaluationRecord r{setup.domain, setup.nx, c, 0.0};
        r.min_form = min_form_eigenvalue(map, c.params.k2, c.params.mu0, c.params.mu1);
        out.push_back(std::move(r));
    }
    return out;
}

const std::vector<std::string> kEvalHeader = {
    "A", "L", "nx", "k2", "mu0", "mu1", "classification", "rate", "iterations", "initial_error",
    "final_error", "resolved_by_endpoint", "blowup_index", "min_form_eigenvalue", "error"};

void eval_row(Csv& csv, const EvaluationRecord& r) {
    const CellEvaluation& c = r.cell;
    csv.row({num(r.domain.half_width), num(r.domain.height), std::to_string(r.nx), num(c.params.k2),
             num(c.params.mu0), num(c.params.mu1), to_string(c.classification), num(c.rate),
             std::to_string(c.iterations), num(c.initial_error), num(c.final_error),
             c.resolved_by_endpoint ? "yes" : "no", std::to_string(c.blowup_index), num(r.min_form),
             c.error});
}

// Restricts a boundary function to |x| <= 1 style windows for plotting.
Series window(const std::string& name, const BoundaryFunction& f, const Grid& g, double lo, double hi) {
    Series s{name, {}, {}};
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
        const double x = g.x(g.column_of(f.nodes[k]));
        if (x >= lo - 1e-9 && x <= hi + 1e-9) {
            s.x.push_back(x);
            s.y.push_back(f.values[k]);
        }
    }
    return s;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::optional<double> published_table1(double mu) {
    static const std::map<double, double> t = {{2, 10.6},  {4, 15.6},  {6, 22.6}, {8, 26.3},
                                               {10, 29.7}, {12, 32.2}, {14, 34.8}};
    for (const auto& [k, v] : t) {
        if (near(k, mu)) return v;
    }
    return std::nullopt;
}

std::optional<double> published_table2(double A) {
    static const std::map<double, double> t = {{2, 13.2}, {4, 12.8}, {6, 12.7}, {8, 12.7}};
    for (const auto& [k, v] : t) {
        if (near(k, A)) return v;
    }
    return std::nullopt;
}

std::string published_table3(double L, double k2) {
    static const std::vector<double> k2s = {5, 10, 15, 20, 25, 30, 35, 40, 50};
    static const std::vector<std::vector<std::string>> cols = {
        {"-", "-", "-", "0.5", "1.0", "1.6", "2.1", "2.7", "3.9"},
        {"0.2", "1.3", "2.6", "4.2", "6.1", "8.4", "11.9", "16.5", "36.8"},
        {"1.1", "3.4", "7.2", "15.7", "54.0", "*", "*", "*", "*"}};
    static const std::vector<double> Ls = {0.2, 0.4, 0.6};
    for (std::size_t c = 0; c < Ls.size(); ++c) {
        if (!near(Ls[c], L)) continue;
        for (std::size_t r = 0; r < k2s.size(); ++r) {
            if (near(k2s[r], k2)) return cols[c][r];
        }
    }
    return {};
}

std::vector<Table1Row> compute_table1(const std::vector<double>& mus, double L) {
    std::vector<Table1Row> rows;
    for (double mu : mus) {
        Table1Row r;
        r.mu = mu;
        r.L = L;
        r.root = robin_lambda(mu, L);
        r.oracle = robin_lambda_oracle_fd(mu, mu, L);
        r.published = published_table1(mu);
        r.scored = !near(mu, 2.0);
        rows.push_back(r);
    }
    return rows;
}

std::vector<Table2Row> compute_table2(const ExperimentConfig& cfg, const std::vector<double>& As) {
    return parallel_map<Table2Row>(As.size(), cfg.threads, [&](std::size_t i) {
        const auto t0 = Clock::now();
        Table2Row row;
        DomainSpec d = cfg.domain;
        d.half_width = As[i];
        const SweepSetup setup = cfg.sweep_setup(d);
        const Grid grid = build_grid(d, setup.nx);
        const BoundaryIndexMap map = classify_boundary(grid, d);
        row.A = As[i];
        row.nx = setup.nx;
        row.my = grid.my();
        row.h = grid.h();
        row.mu = cfg.table2_mu;
        row.published = published_table2(As[i]);
        row.lambda_robin = robin_lambda(cfg.table2_mu, grid.mesh_height()).lambda;
        row.form_limit = min_form_eigenvalue(map, 0.0, cfg.table2_mu, cfg.table2_mu);
        try {
            ThresholdResult res = threshold_k2(setup, cfg.table2_mu, cfg.k2_lo, cfg.k2_hi, cfg.k2_resolution);
            row.result = std::move(res);
        } catch (const NoTransitionInRange& e) {
            row.status = std::string("no-transition: ") + e.what();
        } catch (const Error& e) {
            row.status = std::string("error: ") + e.what();
        }
        if (row.result) row.evaluations = annotate(setup, row.result->evaluations);
        row.seconds = seconds_since(t0);
        return row;
    });
}

std::vector<Table3Row> compute_table3(const ExperimentConfig& cfg, const std::vector<Table3Cell>& cells) {
    return parallel_map<Table3Row>(cells.size(), cfg.threads, [&](std::size_t i) {
        const auto t0 = Clock::now();
        Table3Row row;
        row.L = cells[i].L;
        row.k2 = cells[i].k2;
        row.published = published_table3(row.L, row.k2);
        DomainSpec d = cfg.domain;
        d.height = row.L;
        const SweepSetup setup = cfg.sweep_setup(d);
        row.predicted_mu = robin_mu_threshold(row.k2, row.L);
        try {
            MinMuResult res = min_mu(setup, row.k2, cfg.mu_max, cfg.mu_resolution, cfg.localization_tol);
            row.evaluations = annotate(setup, res.evaluations);
            row.result = std::move(res);
        } catch (const NoTransitionInRange& e) {
            row.status = std::string("no-transition: ") + e.what();
        } catch (const Error& e) {
            row.status = std::string("error: ") + e.what();
        }
        row.seconds = seconds_since(t0);
        return row;
    });
}

SolveOutcome run_single(const ExperimentConfig& cfg, bool extend) {
    const int nx = cfg.nx_for(cfg.domain.half_width);
    const Grid grid = build_grid(cfg.domain, nx);
    const BoundaryIndexMap map = classify_boundary(grid, cfg.domain);
    SolveOutcome out;
    out.data = synthesize_cauchy(map, cfg.params.k2, cfg.bump_bottom, cfg.bump_top);
    AlternatingIteration it(map, cfg.params, out.data.cauchy);
    it.set_reference(out.data.u_ref);
    if (extend) {
        run_classified(it, ExtensionPolicy{cfg.n_iter, cfg.extension_factor, cfg.max_extensions, true});
    } else {
        it.run(cfg.n_iter);
        if (!it.blown_up()) {
            const ConvergenceFit fit = classify_convergence(it.report().errors);
            it.report().rate = fit.rate;
            it.report().classification = fit.classification;
        }
    }
    out.report = it.report();
    out.min_form = min_form_eigenvalue(map, cfg.params.k2, cfg.params.mu0, cfg.params.mu1);
    out.lambda_robin = robin_lambda(std::min(cfg.params.mu0, cfg.params.mu1), grid.mesh_height()).lambda;
    return out;
}

void write_table1(const fs::path& path, const std::vector<Table1Row>& rows) {
    Csv csv(path, {"mu", "L", "lambda_root", "beta", "root_residual", "lambda_oracle",
                   "oracle_rel_diff", "published_value", "published_rel_diff", "scored"});
    for (const auto& r : rows) {
        const double od = r.root.lambda > 0 ? std::abs(r.oracle.lambda - r.root.lambda) / r.root.lambda : 0.0;
        csv.row({num(r.mu), num(r.L), num(r.root.lambda), num(r.root.beta), num(r.root.residual),
                 num(r.oracle.lambda), num(od), num(r.published),
                 r.published ? num(std::abs(r.root.lambda - *r.published) / *r.published) : "",
                 r.scored ? "yes" : "no"});
    }
}

void write_table2(const fs::path& dir, const std::vector<Table2Row>& rows) {
    Csv csv(dir / "table2.csv", {"A", "nx", "my", "h", "mu", "threshold_k2", "bracket_lo",
                                 "bracket_hi", "published_value", "deviation", "lambda_robin",
                                 "form_limit_k2", "evaluations", "status"});
    Csv ev(dir / "table2_evaluations.csv", kEvalHeader);
    Csv timing(dir / "timing_table2.csv", {"A", "seconds"});
    for (const auto& r : rows) {
        const auto& res = r.result;
        csv.row({num(r.A), std::to_string(r.nx), std::to_string(r.my), num(r.h), num(r.mu),
                 res ? num(res->value) : "", res ? num(res->lo) : "", res ? num(res->hi) : "",
                 num(r.published), res && r.published ? num(res->value - *r.published) : "",
                 num(r.lambda_robin), num(r.form_limit), std::to_string(r.evaluations.size()), r.status});
        for (const auto& e : r.evaluations) eval_row(ev, e);
        timing.row({num(r.A), num(r.seconds)});
    }
}

void write_table3(const fs::path& dir, const std::vector<Table3Row>& rows) {
    Csv csv(dir / "table3.csv", {"L", "k2", "result", "min_mu", "bracket_lo", "bracket_hi",
                                 "published_value", "outside_mass_fraction", "predicted_mu_robin",
                                 "evaluations", "status"});
    Csv ev(dir / "table3_evaluations.csv", kEvalHeader);
    Csv timing(dir / "timing_table3.csv", {"L", "k2", "seconds"});
    for (const auto& r : rows) {
        const auto& res = r.result;
        const bool has_value = res && res->kind == MinMuKind::Value;
        csv.row({num(r.L), num(r.k2), res ? to_string(res->kind) : "", has_value ? num(res->value) : "",
                 has_value ? num(res->lo) : "", has_value ? num(res->hi) : "", r.published,
                 res ? num(res->localization.fraction) : "", num(r.predicted_mu),
                 std::to_string(r.evaluations.size()), r.status});
        for (const auto& e : r.evaluations) eval_row(ev, e);
        timing.row({num(r.L), num(r.k2), num(r.seconds)});
    }
}

std::vector<Table1Row> run_table1(const ExperimentConfig& cfg) {
    const auto t0 = Clock::now();
    auto rows = compute_table1(cfg.table1_mu, cfg.table1_L);
    write_table1(cfg.out / "table1.csv", rows);
    Csv timing(cfg.out / "timing_table1.csv", {"seconds"});
    timing.row({num(seconds_since(t0))});
    return rows;
}

std::vector<Table2Row> run_table2(const ExperimentConfig& cfg) {
    auto rows = compute_table2(cfg, cfg.table2_A);
    write_table2(cfg.out, rows);
    return rows;
}

std::vector<Table3Row> run_table3(const ExperimentConfig& cfg) {
    std::vector<Table3Cell> cells;
    for (double L : cfg.table3_L) {
        for (double k2 : cfg.table3_k2) cells.push_back({L, k2});
    }
    auto rows = compute_table3(cfg, cells);
    write_table3(cfg.out, rows);
    return rows;
}

void run_figures(const ExperimentConfig& cfg) {
    const fs::path dir = cfg.out / "figures";
    fs::create_directories(dir);
    const bool svg = cfg.render_svg;
    const DomainSpec& d = cfg.domain;
    const double a = d.access_left, b = d.access_right;

    // Domain and boundary partition.
    {
        const Grid grid = build_grid(d, cfg.nx_for(d.half_width));
        const BoundaryIndexMap map = classify_boundary(grid, d);
        LinePlot plot{"Domain and boundary partition", "x", "y", false, {}};
        for (auto [which, name] : {std::pair{Boundary::Gamma0, "gamma0"},
                                   std::pair{Boundary::Gamma1Bottom, "gamma1_bottom"},
                                   std::pair{Boundary::Gamma1Top, "gamma1_top"}}) {
            Series s{name, {}, {}};
            for (auto n : map.nodes(which)) {
                s.x.push_back(grid.x(grid.column_of(n)));
                s.y.push_back(grid.y(grid.row_of(n)));
            }
            // The bottom part of Gamma1 has two pieces; a NaN splits the polyline.
            if (which == Boundary::Gamma1Bottom) {
                for (std::size_t k = 1; k < s.x.size(); ++k) {
                    if (s.x[k] - s.x[k - 1] > 1.5 * grid.h()) {
                        s.x.insert(s.x.begin() + static_cast<long>(k), 0.5 * (s.x[k] + s.x[k - 1]));
                        s.y.insert(s.y.begin() + static_cast<long>(k), std::nan(""));
                        break;
                    }
                }
            }
            write_series(dir / ("domain_" + std::string(name) + ".dat"), s,
                         {"A = " + num(d.half_width), "L = " + num(grid.mesh_height())});
            plot.series.push_back(std::move(s));
        }
        if (svg) render_svg(dir / "domain.svg", plot);
    }

    // Both sides of the transcendental equation for mu = 3 and mu = 30 at L = 0.5.
    for (double mu : {3.0, 30.0}) {
        const double L = 0.5;
        Series lhs{"cot(beta)", {}, {}}, rhs{"(beta^2 - mu^2 L^2) / (2 L beta mu)", {}, {}};
        for (int k = 1; k < 400; ++k) {
            const double beta = std::numbers::pi * k / 400.0;
            const double c = 1.0 / std::tan(beta);
            const double r = (beta * beta - mu * mu * L * L) / (2 * L * beta * mu);
            lhs.x.push_back(beta);
            lhs.y.push_back(std::abs(c) < 20 ? c : std::nan(""));
            rhs.x.push_back(beta);
            rhs.y.push_back(std::abs(r) < 20 ? r : std::nan(""));
        }
        const SpectralResult root = robin_lambda(mu, L);
        const std::vector<std::string> notes = {"mu = " + num(mu) + ", L = " + num(L),
                                                "first root beta = " + num(root.beta) +
                                                    ", lambda = " + num(root.lambda)};
        const std::string tag = "roots_mu" + num(mu);
        write_series(dir / (tag + "_lhs.dat"), lhs, notes);
        write_series(dir / (tag + "_rhs.dat"), rhs, notes);
        if (svg) render_svg(dir / (tag + ".svg"), LinePlot{"mu = " + num(mu) + ", L = 0.5", "beta", "", false, {lhs, rhs}});
    }

    const int nx = cfg.nx_for(d.half_width);
    const Grid grid = build_grid(d, nx);
    const BoundaryIndexMap map = classify_boundary(grid, d);

    // Test data and the forward solution.
    {
        const SynthesizedData data = synthesize_cauchy(map, cfg.params.k2, cfg.bump_bottom, cfg.bump_top);
        const Series bottom = window("u(x,0)", trace(data.u_ref, map, Boundary::Bottom), grid, a, b);
        const Series top = window("u(x,L)", trace(data.u_ref, map, Boundary::Top), grid, a, b);
        const std::vector<std::string> notes = {"k2 = " + num(cfg.params.k2), "L = " + num(grid.mesh_height()),
                                                "nx = " + std::to_string(nx), "my = " + std::to_string(grid.my())};
        write_series(dir / "data_bottom.dat", bottom, notes);
        write_series(dir / "data_top.dat", top, notes);
        write_field(dir / "forward_solution.dat", data.u_ref, grid, a, b, notes);
        if (svg) {
            render_svg(dir / "data.svg", LinePlot{"Dirichlet data", "x", "u", false, {bottom, top}});
            render_field_svg(dir / "forward_solution.svg", data.u_ref, grid, a, b, "forward solution");
        }
    }

    // Error histories in a converging and a diverging case.
    {
        LinePlot plot{"error on the top boundary", "k", "error", true, {}};
        for (double k2 : {9.5, 13.0}) {
            ExperimentConfig c = cfg;
            c.params = ProblemParams{k2, 2.0, 2.0};
            const SolveOutcome o = run_single(c, false);
            Series s{"k2 = " + num(k2), {}, {}};
            for (std::size_t k = 0; k < o.report.errors.size(); ++k) {
                s.x.push_back(static_cast<double>(k));
                s.y.push_back(o.report.errors[k]);
            }
            write_series(dir / ("error_k2_" + num(k2) + ".dat"), s,
                         {"mu0 = mu1 = 2", "classification = " + std::string(to_string(o.report.classification)),
                          "rate = " + num(o.report.rate)});
            plot.series.push_back(std::move(s));
        }
        if (svg) render_svg(dir / "error_histories.svg", plot);
    }

    // Reconstruction after n_iter steps.
    {
        const SolveOutcome o = run_single(cfg, false);
        const Series exact = window("u(x,L)", trace(o.data.u_ref, map, Boundary::Top), grid, a, b);
        BoundaryFunction phi_top(map, Boundary::Top);
        const auto& g1 = map.nodes(Boundary::Gamma1);
        for (std::size_t k = 0; k < phi_top.nodes.size(); ++k) {
            const auto it = std::lower_bound(g1.begin(), g1.end(), phi_top.nodes[k]);
            phi_top.values[k] = o.report.phi.values[static_cast<std::size_t>(it - g1.begin())];
        }
        const Series recon = window("phi^" + std::to_string(o.report.iterations()), phi_top, grid, a, b);
        const std::vector<std::string> notes = {"k2 = " + num(cfg.params.k2), "mu0 = " + num(cfg.params.mu0),
                                                "mu1 = " + num(cfg.params.mu1)};
        write_series(dir / "reconstruction_exact.dat", exact, notes);
        write_series(dir / "reconstruction_phi.dat", recon, notes);
        if (svg) render_svg(dir / "reconstruction.svg", LinePlot{"top trace", "x", "u", false, {exact, recon}});
    }

    // Forward solutions at L = 0.6 across the localisation transition.
    {
        DomainSpec d6 = d;
        d6.height = 0.6;
        const Grid g6 = build_grid(d6, nx);
        const BoundaryIndexMap m6 = classify_boundary(g6, d6);
        for (double k2 : {25.0, 27.0, 28.0, 35.0}) {
            const SynthesizedData data = synthesize_cauchy(m6, k2, cfg.bump_bottom, cfg.bump_top);
            const Localization loc = localization_check(data.u_ref, g6, a, b, cfg.localization_tol);
            const std::string tag = "transition_k2_" + num(k2);
            write_field(dir / (tag + ".dat"), data.u_ref, g6, -d6.half_width, d6.half_width,
                        {"L = 0.6, k2 = " + num(k2), "outside mass fraction = " + num(loc.fraction),
                         loc.localized ? "localized" : "not localized"});
            if (svg) render_field_svg(dir / (tag + ".svg"), data.u_ref, g6, -d6.half_width, d6.half_width, "k2 = " + num(k2));
        }
    }
}

}  // namespace rdcauchy
