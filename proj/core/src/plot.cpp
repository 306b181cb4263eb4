#include "rdcauchy/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            default: o += c;
        }
    }
    return o;
}

const char* kColours[] = {"#c0392b", "#2471a3", "#229954", "#7d3c98", "#d68910", "#17202a"};

// Blue-white-red diverging map on t in [-1, 1].
std::string diverging(double t) {
    t = std::clamp(t, -1.0, 1.0);
    int r = 255, g = 255, b = 255;
    if (t > 0) {
        g = b = static_cast<int>(255 * (1 - t));
    } else {
        r = g = static_cast<int>(255 * (1 + t));
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

void write_series(const std::filesystem::path& path, const Series& s,
                  const std::vector<std::string>& comments) {
    if (s.x.size() != s.y.size()) throw InvalidArgument("series: x and y differ in length");
    auto out = open_out(path);
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# " << s.name << '\n';
    for (std::size_t i = 0; i < s.x.size(); ++i) out << fmt(s.x[i]) << ' ' << fmt(s.y[i]) << '\n';
}

void write_field(const std::filesystem::path& path, const GridFunction& u, const Grid& grid,
                 double x_min, double x_max, const std::vector<std::string>& comments) {
    if (!u.matches(grid)) throw InvalidArgument("field: grid mismatch");
    auto out = open_out(path);
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# x y u\n";
    const double eps = 1e-9 * grid.h();
    for (int j = 0; j <= grid.my(); ++j) {
        for (int i = 0; i <= grid.nx(); ++i) {
            const double x = grid.x(i);
            if (x < x_min - eps || x > x_max + eps) continue;
            out << fmt(x) << ' ' << fmt(grid.y(j)) << ' ' << fmt(u(i, j)) << '\n';
        }
        out << '\n';
    }
}

void render_svg(const std::filesystem::path& path, const LinePlot& plot) {
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto ty = [&](double y) { return plot.log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (ty(y) - y0) / (y1 - y0) * (H - mt - mb); };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(plot.title) << "</text>\n"
        << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
        << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x0 + (x1 - x0) * t / 4;
        const double yv = y0 + (y1 - y0) * t / 4;
        const std::string ylab = plot.log_y ? "1e" + fmt(std::round(yv * 10) / 10) : fmt(yv);
        out << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">"
            << fmt(xv) << "</text>\n"
            << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb - (H - mt - mb) * t / 4 + 4
            << "\" text-anchor=\"end\">" << ylab << "</text>\n";
    }
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
        << escape(plot.xlabel) << "</text>\n"
        << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << H / 2 << ")\">" << escape(plot.ylabel) << "</text>\n";
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* colour = kColours[k % std::size(kColours)];
        // Non-finite samples split the curve.
        std::string pts;
        auto flush = [&] {
            if (!pts.empty()) {
                out << "<polyline fill=\"none\" stroke=\"" << colour
                    << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
            }
            pts.clear();
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isfinite(s.y[i])) {
                pts += fmt(px(s.x[i])) + ',' + fmt(py(s.y[i])) + ' ';
            } else {
                flush();
            }
        }
        flush();
        out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 16 * k
            << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
}

void render_field_svg(const std::filesystem::path& path, const GridFunction& u, const Grid& grid,
                      double x_min, double x_max, const std::string& title, int max_cells) {
    if (!u.matches(grid)) throw InvalidArgument("field: grid mismatch");
    const int i0 = std::max(0, static_cast<int>(std::ceil((x_min - grid.x(0)) / grid.h() - 1e-9)));
    const int i1 = std::min(grid.nx(), static_cast<int>(std::floor((x_max - grid.x(0)) / grid.h() + 1e-9)));
    if (i1 <= i0) throw InvalidArgument("field: empty x range");
    const int stride = std::max(1, (i1 - i0 + 1 + max_cells - 1) / max_cells);
    double umax = 0.0;
    for (int j = 0; j <= grid.my(); ++j) {
        for (int i = i0; i <= i1; ++i) umax = std::max(umax, std::abs(u(i, j)));
    }
    if (umax == 0.0) umax = 1.0;
    const double W = 640, mt = 30, ml = 10;
    const double cw = (W - 2 * ml) / ((i1 - i0) / stride + 1);
    const double aspect = grid.mesh_height() / (grid.x(i1) - grid.x(i0));
    const double plot_h = std::clamp((W - 2 * ml) * aspect, 60.0, 400.0);
    const double ch = plot_h / (grid.my() + 1);
    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << plot_h + mt + 30 << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape(title)
        << " (max |u| = " << fmt(umax) << ")</text>\n";
    for (int j = 0; j <= grid.my(); ++j) {
        int c = 0;
        for (int i = i0; i <= i1; i += stride, ++c) {
            out << "<rect x=\"" << fmt(ml + c * cw) << "\" y=\"" << fmt(mt + (grid.my() - j) * ch)
                << "\" width=\"" << fmt(cw + 0.3) << "\" height=\"" << fmt(ch + 0.3) << "\" fill=\""
                << diverging(u(i, j) / umax) << "\"/>\n";
        }
    }
    out << "<text x=\"" << ml << "\" y=\"" << plot_h + mt + 18 << "\">x = " << fmt(grid.x(i0))
        << "</text>\n<text x=\"" << W - ml << "\" y=\"" << plot_h + mt + 18
        << "\" text-anchor=\"end\">x = " << fmt(grid.x(i1)) << "</text>\n</svg>\n";
}

}  // namespace rdcauchy
