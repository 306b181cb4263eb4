#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rdcauchy/fd_core.hpp"

namespace rdcauchy {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Whitespace-separated "x y" lines preceded by '#' comment lines.
void write_series(const std::filesystem::path& path, const Series& s,
                  const std::vector<std::string>& comments = {});

// "x y u" lines for nodes with x in [x_min, x_max], blank line between y-levels.
void write_field(const std::filesystem::path& path, const GridFunction& u, const Grid& grid,
                 double x_min, double x_max, const std::vector<std::string>& comments = {});

struct LinePlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_y = false;
    std::vector<Series> series;
};

void render_svg(const std::filesystem::path& path, const LinePlot& plot);

// Colour map of u over x in [x_min, x_max], at most max_cells columns.
void render_field_svg(const std::filesystem::path& path, const GridFunction& u, const Grid& grid,
                      double x_min, double x_max, const std::string& title, int max_cells = 200);

}  // namespace rdcauchy
