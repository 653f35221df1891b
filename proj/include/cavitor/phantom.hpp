#pragma once

#include <string>
#include <vector>

#include "cavitor/field.hpp"
#include "cavitor/geometry.hpp"

namespace cavitor {

struct BumpSpec {
    double cx = 0.0, cy = 0.0;
    double radius = 0.25;
    double amplitude = 1.0;
    int smoothness = 3; // profile (1 - (d/r)^2)^smoothness, C^{smoothness-1} at the edge
};

/// Initial-pressure phantom. Bump sums are compactly supported; eigenmode
/// phantoms touch the boundary (zero normal derivative) and are admitted with
/// a warning since the reference experiments use them.
struct PhantomSpec {
    enum class Kind { Eigenmode, BumpSum, File } kind = Kind::BumpSum;
    Geometry geom;
    int mode_i1 = 0, mode_i2 = 0; // Neumann eigenmode indices
    std::vector<BumpSpec> bumps;
    std::string path; // Kind::File

    std::string describe() const;
};

/// Analytic pointwise evaluation (File phantoms are materialized first).
double eval_phantom(const PhantomSpec& spec, double x, double y);

/// Samples the phantom on a grid. Bump phantoms must keep a margin of at
/// least two grid cells to the boundary, otherwise a validation error.
ScalarField2D render(const PhantomSpec& spec, const GridSpec& grid);

/// Stand-in for the reference three-bump phantom: disk coordinates
/// (0,0.35) (-0.3,-0.2) (0.3,-0.2), radii 0.25, amplitudes 1/0.8/0.6; mapped
/// affinely into rectangles.
PhantomSpec three_bump_default(const Geometry& g);

/// "three-bump" | "eigen:N,L" | "file:path" | path to a phantom spec file.
PhantomSpec parse_phantom(const std::string& text, const Geometry& g);

PhantomSpec read_phantom_file(const std::string& path, const Geometry& g);
void write_phantom_file(const PhantomSpec& spec, const std::string& path);

} // namespace cavitor
