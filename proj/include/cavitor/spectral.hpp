#pragma once

#include <functional>
#include <memory>

#include "cavitor/basis.hpp"
#include "cavitor/field.hpp"
#include "cavitor/recording.hpp"

namespace cavitor {

/// Truncated eigenfunction expansion of the forward solution. The stored
/// coefficients are the t = 0 projections; evolution is the exact cosine
/// factor, so spectral energy is conserved identically.
struct ModalState {
    std::shared_ptr<const ModeSet> basis;
    std::vector<double> u0; // <f, phi_n>, aligned with basis->modes
    double t = 0.0;
    double grad_energy = 0.0;  // quadrature of |grad f|^2 (E_0)
    double tail_energy = 0.0;  // E_0 minus the captured sum of lambda^2 u^2
};

/// Projects an analytic initial condition onto the basis with tensor
/// quadrature (Gauss-Legendre radially / per axis, uniform in the angle) at
/// >= 8 samples per oscillation of the highest retained mode.
ModalState project_initial(const std::function<double(double, double)>& f,
                           std::shared_ptr<const ModeSet> basis,
                           const std::function<void(double, double, double&, double&)>& grad = {});

/// Same from a sampled field using the field's own grid quadrature; the grid
/// must resolve the highest mode with at least 4 samples per oscillation.
ModalState project_initial(const ScalarField2D& f, std::shared_ptr<const ModeSet> basis);

/// State advanced to absolute time t (coefficients times cos(lambda t)).
ModalState evolve(const ModalState& state, double t);

/// Coefficients at the state's time: u_n cos(lambda_n t).
std::vector<double> coefficients_at(const ModalState& state);

/// Conserved spectral energy sum lambda_n^2 |u_n|^2.
double spectral_energy(const ModalState& state);

/// Field synthesis on a grid at the state's time.
ScalarField2D synthesize(const ModalState& state, const GridSpec& grid);

/// Boundary data U[i][j] = sum_n u_n phi_n(z_i) cos(lambda_n j dt); requires
/// lambda_max * dt <= pi/8. Deterministic across thread counts.
BoundaryRecording record_boundary(const ModalState& state, const DetectorLayout& layout,
                                  double dt, double T);

/// Smallest cap whose projected tail energy is below tail_frac * E_0 for this
/// phantom (steps the cap geometrically; used by the default truncation rule).
double choose_cap_for_tail(const std::function<double(double, double)>& f,
                           const std::function<void(double, double, double&, double&)>& grad,
                           const Geometry& g, double tail_frac, double cap_start,
                           double cap_limit);

} // namespace cavitor
