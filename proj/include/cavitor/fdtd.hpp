#pragma once

#include <functional>
#include <vector>

#include "cavitor/field.hpp"
#include "cavitor/recording.hpp"

namespace cavitor {

/// FDTD grid: nodal Cartesian grid on a rectangle (variable sound speed
/// allowed) or polar grid on the unit disk (c = 1). Perfectly reflecting
/// walls: Neumann via mirrored ghost cells, Dirichlet forcing on Sigma_1 in
/// the reversal mode.
struct Grid2D {
    GridSpec spec;
    std::vector<double> c; // per node
    double c_min = 1.0, c_max = 1.0;

    static Grid2D cartesian(const Geometry& g, int nx, int ny, double c0 = 1.0);
    static Grid2D polar(int nr, int ntheta);

    /// Variable speed (Cartesian only); cached bounds refreshed.
    void set_speed(const std::function<double(double, double)>& c_of_xy);

    /// 0.9 * h_min / (c_max sqrt(2)); h_min includes the first-ring arc
    /// r_1 dtheta on polar grids.
    double max_stable_dt() const;
};

/// Discrete Laplacian with Neumann (mirror) closure everywhere, including the
/// polar axis rule lap(0) = 4 (mean_ring1 - u(0)) / dr^2. Exposed for tests.
void apply_laplacian(const Grid2D& grid, const ScalarField2D& u, ScalarField2D& out);

/// Leapfrog forward run of (1/c^2) u_tt = lap u, u(0) = f, u_t(0) = 0, Neumann
/// walls; returns the boundary trace at the detectors, sampled at the solver
/// step. Throws on CFL violation or detected instability.
BoundaryRecording forward_run(const Grid2D& grid, const ScalarField2D& f, double dt, double T,
                              const DetectorLayout& detectors);

/// Per-step probe for forward_run (step index, current, previous field).
using StepProbe = std::function<void(int, const ScalarField2D&, const ScalarField2D&)>;
BoundaryRecording forward_run(const Grid2D& grid, const ScalarField2D& f, double dt, double T,
                              const DetectorLayout& detectors, const StepProbe& probe);

/// Backward integration from t = T (zero terminal data) to t = 0 with the
/// already-gated recording imposed as Dirichlet values on Sigma_1 (cubic
/// interpolation in time, linear along the boundary) and Neumann on Sigma_2.
/// Returns v_eps(0, .). The solver step is T/ceil(T/dt) so the terminal time
/// is hit exactly.
ScalarField2D reversal_run(const Grid2D& grid, const BoundaryRecording& gated, double dt);

} // namespace cavitor
