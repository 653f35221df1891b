#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cavitor/geometry.hpp"

namespace cavitor {

enum class GridKind { Cartesian, Polar };

/// Structured grid.
/// Cartesian: n1 x n2 nodes covering [0,A] x [0,B] inclusive of the boundary.
/// Polar (unit disk): n1 = nr+1 radial nodes r_i = i/nr (row 0 is the axis
/// point, kept replicated across all angular slots), n2 = ntheta angles
/// theta_j = 2 pi j / ntheta, periodic.
struct GridSpec {
    GridKind kind = GridKind::Cartesian;
    int n1 = 0, n2 = 0;
    double A = 0.0, B = 0.0; // extents; polar uses A = 1 (radius), B = 2 pi

    static GridSpec cartesian(int nx, int ny, double A, double B);
    static GridSpec polar(int nr, int ntheta);

    double d1() const { return kind == GridKind::Cartesian ? A / (n1 - 1) : 1.0 / (n1 - 1); }
    double d2() const { return kind == GridKind::Cartesian ? B / (n2 - 1) : 2.0 * M_PI / n2; }
    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
    /// Cartesian coordinates of node (i,j).
    void node_xy(int i, int j, double& x, double& y) const;
    bool operator==(const GridSpec&) const = default;
    std::string describe() const;
};

GridSpec parse_grid(const std::string& text, const Geometry& geom); // "256x256"

struct ScalarField2D {
    GridSpec grid;
    std::vector<double> v;

    ScalarField2D() = default;
    explicit ScalarField2D(const GridSpec& g) : grid(g), v(g.size(), 0.0) {}
    double& at(int i, int j) { return v[static_cast<std::size_t>(i) * grid.n2 + j]; }
    double at(int i, int j) const { return v[static_cast<std::size_t>(i) * grid.n2 + j]; }
};

/// Trapezoid quadrature weight of node (i,j) for integrals over the domain
/// (polar weight includes the r of r dr dtheta; the axis row gets weight 0).
double node_weight(const GridSpec& g, int i, int j);

/// sum of w * f over all nodes (serial, fixed order).
double integrate(const ScalarField2D& f);

} // namespace cavitor
