#pragma once

#include <vector>

#include "cavitor/basis.hpp"
#include "cavitor/cutoff.hpp"
#include "cavitor/fdtd.hpp"
#include "cavitor/field.hpp"

namespace cavitor {

/// I(lambda, nu, eps) =
///   lambda int_0^1 a'(t) [cos((lambda-nu)t/eps) - cos((lambda+nu)t/eps)] dt
/// + eps/2  int_0^1 a''(t) [sin((lambda-nu)t/eps) - sin((lambda+nu)t/eps)] dt,
/// the sine-kernel transfer integral feeding nu_k w_k(0). Adaptive
/// Gauss-Kronrod over [flat_end, 1] with one panel per oscillation of the
/// fastest factor; absolute tolerance 1e-8.
double coupling_integral(double lambda, double nu, double eps, const CutoffProfile& cutoff);

/// Cosine-kernel variant feeding w_k'(0).
double coupling_integral_cos(double lambda, double nu, double eps, const CutoffProfile& cutoff);

struct Norms {
    double l2w = 0.0;     // weighted L2 norm
    double h1_semi = 0.0; // gradient L2 norm
    double h1 = 0.0;      // sqrt(l2w^2 + h1_semi^2)
};

/// Trapezoid quadrature with centered-difference gradients (one-sided at the
/// walls); matches the solver discretization by design.
Norms norms(const ScalarField2D& field, const Grid2D& grid);

/// Discrete wave energy from two consecutive fields: the time derivative is
/// (u^n - u^{n-1})/dt and the gradient is taken of the midpoint average.
double energy(const ScalarField2D& un, const ScalarField2D& unm1, const Grid2D& grid, double dt);

struct ErrorPrediction {
    std::vector<double> nu_wk0;  // per reversal mode: nu_k w_k(0)
    std::vector<double> wk0p;    // per reversal mode: w_k'(0)
    std::vector<double> persistent_coeff; // eps-independent part, per reversal mode
    std::shared_ptr<const ModeSet> reversal;
    double eps = 0.0;

    /// Persistent residual field - sum_j u_nj <psi_kj, phi_nj> psi_kj.
    ScalarField2D persistent_field(const GridSpec& grid) const;
    double persistent_h1() const; // H1 norm of the persistent part
};

/// The modal error oracle: nu_k w_k(0) = sum_n u_n I_{n,k}(eps) <psi_k, phi_n>.
/// A verification instrument, not a reconstructor: it needs the phantom's
/// Neumann coefficients u_n. The persistent part is assembled from exact
/// eigenvalue coincidences.
ErrorPrediction predict_residual(const std::vector<double>& u_n,
                                 std::shared_ptr<const ModeSet> neumann,
                                 std::shared_ptr<const ModeSet> reversal,
                                 const CutoffProfile& cutoff, double eps);

struct ModeEnergy {
    EigenMode mode;
    double coeff = 0.0;  // <w, psi_k>
    double share = 0.0;  // |coeff|^2 / sum |coeff|^2
};

/// Weighted-L2 modal decomposition of a residual field, sorted by descending
/// share; zero fields give an empty table.
std::vector<ModeEnergy> decompose_residual(const ScalarField2D& w, const ModeSet& reversal,
                                           int n_modes);

} // namespace cavitor
