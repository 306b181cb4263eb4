#include "rdcauchy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

void DomainSpec::validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw InvalidArgument("domain: half_width A must be positive");
    }
    if (!(height > 0.0) || !std::isfinite(height)) {
        throw InvalidArgument("domain: height L must be positive");
    }
    if (!(-half_width < access_left && access_left < access_right && access_right < half_width)) {
        throw InvalidArgument("domain: need -A < a < b < A");
    }
}

Grid::Grid(const DomainSpec& domain, int nx, int my)
    : domain_(domain), nx_(nx), my_(my), h_(2.0 * domain.half_width / nx) {
    if (nx < 1 || my < 1) {
        throw InvalidArgument("grid: nx and my must be positive");
    }
}

Grid build_grid(const DomainSpec& domain, int nx) {
    domain.validate();
    if (nx < 8) {
        throw InvalidArgument("grid: nx must be at least 8, got " + std::to_string(nx));
    }
    const double h = 2.0 * domain.half_width / nx;
    const int my = static_cast<int>(std::lround(domain.height / h));
    if (my < 3) {
        throw InvalidArgument("grid: strip resolves only " + std::to_string(my) +
                              " cells across; need at least 3");
    }
    return Grid(domain, nx, my);
}

bool contains(Boundary boundary, Segment segment) noexcept {
    switch (boundary) {
        case Boundary::Gamma0: return segment == Segment::Gamma0;
        case Boundary::Gamma1:
            return segment == Segment::Gamma1Bottom || segment == Segment::Gamma1Top;
        case Boundary::Gamma1Bottom: return segment == Segment::Gamma1Bottom;
        case Boundary::Gamma1Top: return segment == Segment::Gamma1Top;
        case Boundary::Bottom: return segment == Segment::Gamma0 || segment == Segment::Gamma1Bottom;
        case Boundary::Top: return segment == Segment::Gamma1Top;
    }
    return false;
}

const char* to_string(Segment segment) noexcept {
    switch (segment) {
        case Segment::Interior: return "Interior";
        case Segment::Gamma0: return "Gamma0";
        case Segment::Gamma1Bottom: return "Gamma1Bottom";
        case Segment::Gamma1Top: return "Gamma1Top";
        case Segment::End: return "End";
    }
    return "?";
}

const char* to_string(Boundary boundary) noexcept {
    switch (boundary) {
        case Boundary::Gamma0: return "Gamma0";
        case Boundary::Gamma1: return "Gamma1";
        case Boundary::Gamma1Bottom: return "Gamma1Bottom";
        case Boundary::Gamma1Top: return "Gamma1Top";
        case Boundary::Bottom: return "Bottom";
        case Boundary::Top: return "Top";
    }
    return "?";
}

namespace {

constexpr Boundary kAllBoundaries[] = {Boundary::Gamma0,       Boundary::Gamma1,
                                       Boundary::Gamma1Bottom, Boundary::Gamma1Top,
                                       Boundary::Bottom,       Boundary::Top};

double overlap(double lo, double hi, double a, double b) {
    return std::max(0.0, std::min(hi, b) - std::max(lo, a));
}

}  // namespace

BoundaryIndexMap::BoundaryIndexMap(const Grid& grid, std::vector<Segment> tags,
                                   std::vector<double> weights)
    : grid_(grid), tags_(std::move(tags)), weights_(std::move(weights)) {
    if (tags_.size() != grid_.node_count() || weights_.size() != grid_.node_count()) {
        throw InvalidArgument("boundary map: tag/weight arrays do not match the grid");
    }
    lists_.resize(std::size(kAllBoundaries));
    for (std::size_t b = 0; b < std::size(kAllBoundaries); ++b) {
        for (std::size_t node = 0; node < tags_.size(); ++node) {
            if (contains(kAllBoundaries[b], tags_[node])) lists_[b].push_back(node);
        }
    }
}

Normal BoundaryIndexMap::normal(std::size_t node) const {
    switch (tags_[node]) {
        case Segment::Interior: return Normal::None;
        case Segment::Gamma0:
        case Segment::Gamma1Bottom: return Normal::Down;
        case Segment::Gamma1Top: return Normal::Up;
        case Segment::End: return grid_.column_of(node) == 0 ? Normal::Left : Normal::Right;
    }
    return Normal::None;
}

const std::vector<std::size_t>& BoundaryIndexMap::nodes(Boundary boundary) const {
    return lists_[static_cast<std::size_t>(boundary)];
}

std::size_t BoundaryIndexMap::count(Segment segment) const {
    return static_cast<std::size_t>(std::count(tags_.begin(), tags_.end(), segment));
}

BoundaryIndexMap classify_boundary(const Grid& grid, const DomainSpec& domain) {
    domain.validate();
    const int nx = grid.nx();
    const int my = grid.my();
    const double h = grid.h();
    const double eps = 1e-9 * h;
    const double a = domain.access_left;
    const double b = domain.access_right;

    std::vector<Segment> tags(grid.node_count(), Segment::Interior);
    std::vector<double> weights(grid.node_count(), 0.0);

    bool any_gamma0 = false;
    for (int j = 0; j <= my; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const std::size_t node = grid.index(i, j);
            if (i == 0 || i == nx) {
                tags[node] = Segment::End;
                continue;
            }
            const double x = grid.x(i);
            const double lo = x - 0.5 * h;
            const double hi = x + 0.5 * h;
            if (j == 0) {
                if (x >= a - eps && x <= b + eps) {
                    tags[node] = Segment::Gamma0;
                    weights[node] = overlap(lo, hi, a, b);
                    any_gamma0 = true;
                } else {
                    tags[node] = Segment::Gamma1Bottom;
                    weights[node] = h - overlap(lo, hi, a, b);
                }
            } else if (j == my) {
                tags[node] = Segment::Gamma1Top;
                weights[node] = h;
            }
        }
    }
    if (!any_gamma0) {
        throw InvalidArgument("boundary map: [a, b] contains no grid node");
    }
    return BoundaryIndexMap(grid, std::move(tags), std::move(weights));
}

ScaledProblem rescale_to_unit(const DomainSpec& domain, const ProblemParams& params) {
    const double s = 2.0 * domain.half_width;
    ScaledProblem out;
    out.scale = s;
    out.domain.half_width = 0.5;
    out.domain.height = domain.height / s;
    out.domain.access_left = domain.access_left / s;
    out.domain.access_right = domain.access_right / s;
    // d/dx = (1/s) d/dx', so (Delta + k^2) u = 0 becomes (Delta' + s^2 k^2) u = 0
    // and the Robin condition d_nu u + mu u = 0 becomes d_nu' u + s mu u = 0.
    out.params.k2 = s * s * params.k2;
    out.params.mu0 = s * params.mu0;
    out.params.mu1 = s * params.mu1;
    return out;
}

std::pair<DomainSpec, ProblemParams> rescale_from_unit(const ScaledProblem& scaled) {
    const double s = scaled.scale;
    DomainSpec d;
    d.half_width = 0.5 * s;
    d.height = scaled.domain.height * s;
    d.access_left = scaled.domain.access_left * s;
    d.access_right = scaled.domain.access_right * s;
    ProblemParams p;
    p.k2 = scaled.params.k2 / (s * s);
    p.mu0 = scaled.params.mu0 / s;
    p.mu1 = scaled.params.mu1 / s;
    return {d, p};
}

}  // namespace rdcauchy
