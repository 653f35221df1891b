#pragma once

#include <optional>

#include "cavitor/analysis.hpp"
#include "cavitor/cutoff.hpp"
#include "cavitor/phantom.hpp"

namespace cavitor {

struct ReconstructionReport {
    ScalarField2D recon;                  // v_eps(0, .)
    std::optional<ScalarField2D> residual; // recon - phantom (phantom given)
    double T = 0.0;
    double eps = 0.0; // always 1/T
    double solver_dt = 0.0;
    Norms phantom_norms, recon_norms, residual_norms;
    double l2w_rel = 0.0, h1_rel = 0.0;
    double energy_res = 0.0; // gradient energy of the residual
    std::string cutoff_label, grid_label;
};

/// Samples multiplied by alpha(t/T), truncated to [0, T]; T is snapped to the
/// recording's sample grid (and eps = 1/T to the snapped value).
BoundaryRecording gate_recording(const BoundaryRecording& rec, const CutoffProfile& cutoff,
                                 double T);

/// Gradual time reversal: gate, run the FDTD backend backward, and compare
/// against the phantom resampled on the solver grid when one is given.
ReconstructionReport gradual_time_reversal(const BoundaryRecording& rec,
                                           const CutoffProfile& cutoff, double T,
                                           const Grid2D& backend,
                                           const std::optional<PhantomSpec>& phantom = {});

/// Independent reconstructions for each T (ascending recommended);
/// max(T_list) must not exceed the recording duration.
std::vector<ReconstructionReport> sweep_T(const BoundaryRecording& rec,
                                          const CutoffProfile& cutoff,
                                          const std::vector<double>& T_list,
                                          const Grid2D& backend,
                                          const std::optional<PhantomSpec>& phantom = {});

} // namespace cavitor
