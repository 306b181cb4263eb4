#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rdcauchy/params.hpp"

namespace rdcauchy {

// Truncated strip (-A, A) x (0, L). The accessible boundary Gamma0 is the
// bottom interval [a, b]; Gamma1 is the rest of the bottom plus the whole top.
// The ends x = +-A carry homogeneous Dirichlet closures.
struct DomainSpec {
    double half_width = 4.0;    // A
    double height = 0.4;        // L
    double access_left = -1.0;  // a
    double access_right = 1.0;  // b

    void validate() const;
};

// Uniform mesh with spacing h = 2A / nx. Node (i, j) sits at
// x_i = -A + i h, y_j = j h, for 0 <= i <= nx and 0 <= j <= my.
class Grid {
public:
    // Raw constructor: only checks nx, my >= 1. Use build_grid() for the
    // validated construction rule (my = round(L / h)).
    Grid(const DomainSpec& domain, int nx, int my);

    const DomainSpec& domain() const noexcept { return domain_; }
    int nx() const noexcept { return nx_; }
    int my() const noexcept { return my_; }
    double h() const noexcept { return h_; }

    // Height actually resolved by the mesh, my * h.
    double mesh_height() const noexcept { return my_ * h_; }

    double x(int i) const noexcept { return -domain_.half_width + i * h_; }
    double y(int j) const noexcept { return j * h_; }

    std::size_t node_count() const noexcept {
        return static_cast<std::size_t>(nx_ + 1) * static_cast<std::size_t>(my_ + 1);
    }

    // Row-major by y-level.
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_ + 1) +
               static_cast<std::size_t>(i);
    }
    int column_of(std::size_t node) const noexcept {
        return static_cast<int>(node % static_cast<std::size_t>(nx_ + 1));
    }
    int row_of(std::size_t node) const noexcept {
        return static_cast<int>(node / static_cast<std::size_t>(nx_ + 1));
    }

private:
    DomainSpec domain_;
    int nx_;
    int my_;
    double h_;
};

Grid build_grid(const DomainSpec& domain, int nx);

enum class Segment : unsigned char {
    Interior,
    Gamma0,
    Gamma1Bottom,
    Gamma1Top,
    End,
};

// Unions of segments addressed by boundary functions.
enum class Boundary : unsigned char {
    Gamma0,
    Gamma1,  // Gamma1Bottom + Gamma1Top
    Gamma1Bottom,
    Gamma1Top,
    Bottom,  // Gamma0 + Gamma1Bottom
    Top,     // same nodes as Gamma1Top
};

bool contains(Boundary boundary, Segment segment) noexcept;
const char* to_string(Segment segment) noexcept;
const char* to_string(Boundary boundary) noexcept;

enum class Normal : unsigned char { None, Down, Up, Left, Right };

// Per-node segment tags, outward normals and arc-length weights.
class BoundaryIndexMap {
public:
    BoundaryIndexMap(const Grid& grid, std::vector<Segment> tags, std::vector<double> weights);

    Segment segment(std::size_t node) const { return tags_[node]; }
    Normal normal(std::size_t node) const;

    // Length of the node's dual cell [x - h/2, x + h/2] that lies inside
    // its segment. Zero for interior and End nodes.
    double weight(std::size_t node) const { return weights_[node]; }

    // Node indices of a boundary union, ordered bottom row first then by x.
    const std::vector<std::size_t>& nodes(Boundary boundary) const;

    std::size_t count(Segment segment) const;

    const Grid& grid() const noexcept { return grid_; }

private:
    Grid grid_;
    std::vector<Segment> tags_;
    std::vector<double> weights_;
    std::vector<std::vector<std::size_t>> lists_;
};

// Bottom nodes with a <= x_i <= b are Gamma0 (closed interval), other bottom
// nodes Gamma1Bottom, top nodes Gamma1Top, the x = +-A columns End.
// Throws InvalidArgument when [a, b] contains no node.
BoundaryIndexMap classify_boundary(const Grid& grid, const DomainSpec& domain);

// Unit-width formulation obtained from x = 2A (x' - 1/2), y = 2A y'.
struct ScaledProblem {
    DomainSpec domain;  // centred: x' - 1/2 in (-1/2, 1/2), height L / 2A
    ProblemParams params;
    double scale = 1.0;  // 2A

    double to_unit_x(double x) const noexcept { return x / scale + 0.5; }
    double from_unit_x(double xp) const noexcept { return scale * (xp - 0.5); }
};

ScaledProblem rescale_to_unit(const DomainSpec& domain, const ProblemParams& params);
std::pair<DomainSpec, ProblemParams> rescale_from_unit(const ScaledProblem& scaled);

}  // namespace rdcauchy
