#include "cavitor/reconstruct.hpp"

#include <cmath>

#include "cavitor/errors.hpp"

namespace cavitor {

BoundaryRecording gate_recording(const BoundaryRecording& rec, const CutoffProfile& cutoff,
                                 double T) {
    if (!(T > 0.0)) throw ParameterError("gate_recording: T must be positive");
    if (T > rec.T * (1.0 + 1e-9) + 0.5 * rec.dt)
        throw ParameterError("gate_recording: T exceeds the recording duration");
    const int n_keep = std::min(rec.n_samples - 1, static_cast<int>(std::llround(T / rec.dt)));
    if (n_keep < 3) throw ParameterError("gate_recording: too few samples below T");
    BoundaryRecording out;
    out.geom = rec.geom;
    out.layout = rec.layout;
    out.detectors = rec.detectors;
    out.dt = rec.dt;
    out.n_samples = n_keep + 1;
    out.T = n_keep * rec.dt;
    const int nd = rec.n_detectors();
    out.U.assign(static_cast<std::size_t>(nd) * out.n_samples, 0.0);
    for (int j = 0; j <= n_keep; ++j) {
        const double a = cutoff.value(j * rec.dt / out.T);
        for (int d = 0; d < nd; ++d) out.sample(d, j) = a * rec.sample(d, j);
    }
    return out;
}

ReconstructionReport gradual_time_reversal(const BoundaryRecording& rec,
                                           const CutoffProfile& cutoff, double T,
                                           const Grid2D& backend,
                                           const std::optional<PhantomSpec>& phantom) {
    ReconstructionReport rep;
    const BoundaryRecording gated = gate_recording(rec, cutoff, T);
    rep.T = gated.T;
    rep.eps = 1.0 / gated.T;
    rep.solver_dt = backend.max_stable_dt();
    rep.cutoff_label = cutoff.label();
    rep.grid_label = backend.spec.describe();
    rep.recon = reversal_run(backend, gated, rep.solver_dt);
    rep.recon_norms = norms(rep.recon, backend);
    if (phantom) {
        const ScalarField2D ref = render(*phantom, backend.spec);
        rep.phantom_norms = norms(ref, backend);
        ScalarField2D res(backend.spec);
        for (std::size_t q = 0; q < res.v.size(); ++q) res.v[q] = rep.recon.v[q] - ref.v[q];
        rep.residual_norms = norms(res, backend);
        rep.residual = std::move(res);
        if (rep.phantom_norms.l2w > 0.0) rep.l2w_rel = rep.residual_norms.l2w / rep.phantom_norms.l2w;
        if (rep.phantom_norms.h1 > 0.0) rep.h1_rel = rep.residual_norms.h1 / rep.phantom_norms.h1;
        rep.energy_res = rep.residual_norms.h1_semi * rep.residual_norms.h1_semi;
    }
    return rep;
}

std::vector<ReconstructionReport> sweep_T(const BoundaryRecording& rec,
                                          const CutoffProfile& cutoff,
                                          const std::vector<double>& T_list,
                                          const Grid2D& backend,
                                          const std::optional<PhantomSpec>& phantom) {
    for (double T : T_list)
        if (T > rec.T * (1.0 + 1e-9) + 0.5 * rec.dt)
            throw ParameterError("sweep_T: entry exceeds the recording duration");
    std::vector<ReconstructionReport> out;
    out.reserve(T_list.size());
    for (double T : T_list) out.push_back(gradual_time_reversal(rec, cutoff, T, backend, phantom));
    return out;
}

} // namespace cavitor
