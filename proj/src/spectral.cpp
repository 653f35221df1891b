#include "cavitor/spectral.hpp"

#include <cmath>

#include "cavitor/errors.hpp"
#include "cavitor/parallel.hpp"
#include "cavitor/quadrature.hpp"
#include "cavitor/specfun.hpp"

namespace cavitor {

namespace {

double rect_wavenumber_x(const EigenMode& m, const Geometry& g) {
    return (m.bc == BcKind::MixedRightDirichlet ? (m.i1 + 0.5) : m.i1) * M_PI / g.A;
}
double rect_wavenumber_y(const EigenMode& m, const Geometry& g) { return m.i2 * M_PI / g.B; }

bool rect_x_is_sin(BcKind bc) { return bc == BcKind::Dirichlet; }

// Projection on rectangles: two-stage contraction over tensor Gauss-Legendre
// nodes, so the cost is (modes_x + modes_y) * grid rather than modes * grid.
void project_rect(const std::function<double(double, double)>& f, const ModeSet& basis,
                  std::vector<double>& u) {
    const Geometry& g = basis.geom;
    const double cap = basis.cap;
    const int nx = std::max(48, static_cast<int>(std::ceil(1.35 * cap * g.A / M_PI)) + 24);
    const int ny = std::max(48, static_cast<int>(std::ceil(1.35 * cap * g.B / M_PI)) + 24);
    const auto rx = quad::gauss_legendre(nx, 0.0, g.A);
    const auto ry = quad::gauss_legendre(ny, 0.0, g.B);

    int i1_max = 0, i2_max = 0;
    for (const auto& m : basis.modes) {
        i1_max = std::max(i1_max, m.i1);
        i2_max = std::max(i2_max, m.i2);
    }
    const bool x_sin = rect_x_is_sin(basis.bc);
    const bool y_sin = rect_x_is_sin(basis.bc);
    // G[i1][jy] = sum_ix wx f(x,y) * xfactor_{i1}(x)
    std::vector<double> G(static_cast<std::size_t>(i1_max + 1) * ny, 0.0);
    std::vector<double> fx(nx);
    for (int jy = 0; jy < ny; ++jy) {
        const double y = ry.nodes[jy];
        for (int ix = 0; ix < nx; ++ix) fx[ix] = rx.weights[ix] * f(rx.nodes[ix], y);
        for (int i1 = 0; i1 <= i1_max; ++i1) {
            const double kx =
                (basis.bc == BcKind::MixedRightDirichlet ? (i1 + 0.5) : i1) * M_PI / g.A;
            double acc = 0.0;
            for (int ix = 0; ix < nx; ++ix)
                acc += fx[ix] * (x_sin ? std::sin(kx * rx.nodes[ix]) : std::cos(kx * rx.nodes[ix]));
            G[static_cast<std::size_t>(i1) * ny + jy] = acc;
        }
    }
    u.assign(basis.modes.size(), 0.0);
    for (std::size_t n = 0; n < basis.modes.size(); ++n) {
        const auto& m = basis.modes[n];
        const double ky = rect_wavenumber_y(m, g);
        const double* row = &G[static_cast<std::size_t>(m.i1) * ny];
        double acc = 0.0;
        for (int jy = 0; jy < ny; ++jy)
            acc += row[jy] * ry.weights[jy] *
                   (y_sin ? std::sin(ky * ry.nodes[jy]) : std::cos(ky * ry.nodes[jy]));
        u[n] = m.norm_const * acc;
    }
}

// Projection on the disk: angular reduction to Fourier rows a_l, b_l, then
// radial Gauss-Legendre against J_l(lambda r).
void project_disk(const std::function<double(double, double)>& f, const ModeSet& basis,
                  std::vector<double>& u) {
    const double cap = basis.cap;
    int l_max = 0;
    for (const auto& m : basis.modes) l_max = std::max(l_max, m.i2);
    const int nr = std::max(64, static_cast<int>(std::ceil(1.35 * cap)) + 32);
    const int nth = std::max(256, 8 * (l_max + 1));
    const auto rr = quad::gauss_legendre(nr, 0.0, 1.0);
    const double wth = 2.0 * M_PI / nth;
    // a[l][i] = int f cos(l th) dth at r_i, b likewise with sin
    std::vector<double> a(static_cast<std::size_t>(l_max + 1) * nr, 0.0);
    std::vector<double> b(static_cast<std::size_t>(l_max + 1) * nr, 0.0);
    std::vector<double> ct(nth), st(nth), fv(nth);
    parallel_for(nr, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> frow(nth);
        for (std::size_t i = lo; i < hi; ++i) {
            const double r = rr.nodes[i];
            for (int j = 0; j < nth; ++j) {
                const double th = wth * j;
                frow[j] = f(r * std::cos(th), r * std::sin(th));
            }
            for (int l = 0; l <= l_max; ++l) {
                double ac = 0.0, as = 0.0;
                for (int j = 0; j < nth; ++j) {
                    const double th = wth * j * l;
                    ac += frow[j] * std::cos(th);
                    as += frow[j] * std::sin(th);
                }
                a[static_cast<std::size_t>(l) * nr + i] = ac * wth;
                b[static_cast<std::size_t>(l) * nr + i] = as * wth;
            }
        }
    });
    u.assign(basis.modes.size(), 0.0);
    parallel_for(basis.modes.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n) {
            const auto& m = basis.modes[n];
            const double* row = (m.parity == 0 ? a.data() : b.data()) +
                                static_cast<std::size_t>(m.i2) * nr;
            double acc = 0.0;
            for (int i = 0; i < nr; ++i) {
                const double r = rr.nodes[i];
                const double radial =
                    (m.eigenvalue == 0.0) ? 1.0 : specfun::bessel_j(m.i2, m.eigenvalue * r);
                acc += rr.weights[i] * r * radial * row[i];
            }
            u[n] = m.norm_const * acc;
        }
    });
}

double grad_energy_quadrature(const std::function<void(double, double, double&, double&)>& grad,
                              const Geometry& g) {
    if (!grad) return 0.0;
    if (g.is_disk()) {
        const int nr = 512, nth = 1024;
        const auto rr = quad::gauss_legendre(nr, 0.0, 1.0);
        const double wth = 2.0 * M_PI / nth;
        double acc = 0.0;
        for (int i = 0; i < nr; ++i) {
            double ring = 0.0;
            for (int j = 0; j < nth; ++j) {
                const double th = wth * j;
                double gx, gy;
                grad(rr.nodes[i] * std::cos(th), rr.nodes[i] * std::sin(th), gx, gy);
                ring += gx * gx + gy * gy;
            }
            acc += ring * wth * rr.weights[i] * rr.nodes[i];
        }
        return acc;
    }
    const int nx = 512, ny = 512;
    const auto rx = quad::gauss_legendre(nx, 0.0, g.A);
    const auto ry = quad::gauss_legendre(ny, 0.0, g.B);
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
        double row = 0.0;
        for (int j = 0; j < ny; ++j) {
            double gx, gy;
            grad(rx.nodes[i], ry.nodes[j], gx, gy);
            row += ry.weights[j] * (gx * gx + gy * gy);
        }
        acc += rx.weights[i] * row;
    }
    return acc;
}

} // namespace

ModalState project_initial(const std::function<double(double, double)>& f,
                           std::shared_ptr<const ModeSet> basis,
                           const std::function<void(double, double, double&, double&)>& grad) {
    ModalState st;
    st.basis = std::move(basis);
    if (st.basis->geom.is_disk())
        project_disk(f, *st.basis, st.u0);
    else
        project_rect(f, *st.basis, st.u0);
    st.grad_energy = grad_energy_quadrature(grad, st.basis->geom);
    if (st.grad_energy > 0.0) {
        double captured = 0.0;
        for (std::size_t n = 0; n < st.u0.size(); ++n) {
            const double lam = st.basis->modes[n].eigenvalue;
            captured += lam * lam * st.u0[n] * st.u0[n];
        }
        st.tail_energy = std::max(0.0, st.grad_energy - captured);
    }
    return st;
}

ModalState project_initial(const ScalarField2D& f, std::shared_ptr<const ModeSet> basis) {
    const auto& g = f.grid;
    const double cap = basis->cap;
    const double hmax = (g.kind == GridKind::Cartesian)
                            ? std::max(g.d1(), g.d2())
                            : std::max(g.d1(), g.d2()); // polar angular arc peaks at r = 1
    if (cap * hmax > M_PI / 2.0 + 1e-12)
        throw ResolutionError("field grid has fewer than 4 samples per oscillation of the "
                              "highest retained mode");
    ModalState st;
    st.basis = std::move(basis);
    st.u0.assign(st.basis->modes.size(), 0.0);
    const Geometry& geom = st.basis->geom;
    for (std::size_t n = 0; n < st.u0.size(); ++n) {
        const auto& m = st.basis->modes[n];
        double acc = 0.0;
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                double x, y;
                g.node_xy(i, j, x, y);
                acc += node_weight(g, i, j) * f.at(i, j) * eval_mode(m, geom, x, y);
            }
        st.u0[n] = acc;
    }
    return st;
}

ModalState evolve(const ModalState& state, double t) {
    ModalState st = state;
    st.t = t;
    return st;
}

std::vector<double> coefficients_at(const ModalState& state) {
    std::vector<double> c(state.u0.size());
    for (std::size_t n = 0; n < c.size(); ++n)
        c[n] = state.u0[n] * std::cos(state.basis->modes[n].eigenvalue * state.t);
    return c;
}

double spectral_energy(const ModalState& state) {
    double acc = 0.0;
    for (std::size_t n = 0; n < state.u0.size(); ++n) {
        const double lam = state.basis->modes[n].eigenvalue;
        acc += lam * lam * state.u0[n] * state.u0[n];
    }
    return acc;
}

ScalarField2D synthesize(const ModalState& state, const GridSpec& grid) {
    ScalarField2D out(grid);
    const auto c = coefficients_at(state);
    const Geometry& geom = state.basis->geom;
    if ((grid.kind == GridKind::Polar) != geom.is_disk())
        throw ConfigError("synthesis grid kind does not match the basis geometry");
    parallel_for(grid.n1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (int j = 0; j < grid.n2; ++j) {
                double x, y;
                grid.node_xy(static_cast<int>(i), j, x, y);
                double acc = 0.0;
                for (std::size_t n = 0; n < c.size(); ++n)
                    if (c[n] != 0.0) acc += c[n] * eval_mode(state.basis->modes[n], geom, x, y);
                out.at(static_cast<int>(i), j) = acc;
            }
    });
    return out;
}

BoundaryRecording record_boundary(const ModalState& state, const DetectorLayout& layout,
                                  double dt, double T) {
    const auto& basis = *state.basis;
    double lam_max = 0.0;
    for (const auto& m : basis.modes) lam_max = std::max(lam_max, m.eigenvalue);
    if (lam_max * dt > M_PI / 8.0 + 1e-12)
        throw ResolutionError("recording dt does not resolve the highest retained mode "
                              "(lambda_max * dt must be <= pi/8)");
    BoundaryRecording rec;
    rec.geom = basis.geom;
    rec.layout = layout;
    rec.detectors = detector_positions(rec.geom, layout);
    rec.dt = dt;
    rec.n_samples = static_cast<int>(std::floor(T / dt)) + 1;
    rec.T = (rec.n_samples - 1) * dt;
    const int nd = rec.n_detectors();
    const int ns = rec.n_samples;
    rec.U.assign(static_cast<std::size_t>(nd) * ns, 0.0);

    // Group modes by their angular/transverse index and synthesize per-group
    // time rows with a cosine rotation recurrence; detectors then combine the
    // rows. Keeps the cost at modes*samples + groups*detectors*samples.
    if (basis.geom.is_disk()) {
        int l_max = 0;
        for (const auto& m : basis.modes) l_max = std::max(l_max, m.i2);
        std::vector<double> rows(static_cast<std::size_t>(2 * (l_max + 1)) * ns, 0.0);
        std::vector<double> row_scratch(ns);
        for (std::size_t n = 0; n < basis.modes.size(); ++n) {
            const auto& m = basis.modes[n];
            const double amp = state.u0[n] * m.norm_const *
                               (m.eigenvalue == 0.0 ? 1.0
                                                    : specfun::bessel_j(m.i2, m.eigenvalue));
            if (amp == 0.0) continue;
            double* row = &rows[static_cast<std::size_t>(2 * m.i2 + m.parity) * ns];
            const double c1 = std::cos(m.eigenvalue * dt);
            double cm = std::cos(-m.eigenvalue * dt), c0 = 1.0;
            for (int j = 0; j < ns; ++j) { // c0 = cos(lambda j dt)
                row[j] += amp * c0;
                const double cn = 2.0 * c1 * c0 - cm;
                cm = c0;
                c0 = cn;
            }
        }
        parallel_for(nd, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t d = lo; d < hi; ++d) {
                double* out = &rec.U[d * ns];
                const double th = rec.detectors[d].s;
                for (int l = 0; l <= l_max; ++l) {
                    const double cl = std::cos(l * th), sl = std::sin(l * th);
                    const double* rc = &rows[static_cast<std::size_t>(2 * l) * ns];
                    const double* rs = &rows[static_cast<std::size_t>(2 * l + 1) * ns];
                    if (cl != 0.0)
                        for (int j = 0; j < ns; ++j) out[j] += cl * rc[j];
                    if (l > 0 && sl != 0.0)
                        for (int j = 0; j < ns; ++j) out[j] += sl * rs[j];
                }
            }
        });
        return rec;
    }

    // rectangle: process the detectors side by side, grouping modes by the
    // index transverse to that side
    const Geometry& geom = basis.geom;
    int i1_max = 0, i2_max = 0;
    for (const auto& m : basis.modes) {
        i1_max = std::max(i1_max, m.i1);
        i2_max = std::max(i2_max, m.i2);
    }
    std::vector<int> det_of_side[4];
    for (int d = 0; d < nd; ++d) det_of_side[rec.detectors[d].side].push_back(d);
    for (int side = 0; side < 4; ++side) {
        const auto& dets = det_of_side[side];
        if (dets.empty()) continue;
        const bool along_y = (side == 1 || side == 3); // right/left: trace varies in y
        const int g_max = along_y ? i2_max : i1_max;
        std::vector<double> rows(static_cast<std::size_t>(g_max + 1) * ns, 0.0);
        for (std::size_t n = 0; n < basis.modes.size(); ++n) {
            const auto& m = basis.modes[n];
            if (state.u0[n] == 0.0) continue;
            // mode value factor at the fixed coordinate of this side
            double fixed;
            if (along_y) {
                const double x = (side == 1) ? geom.A : 0.0;
                const double kx = rect_wavenumber_x(m, geom);
                fixed = rect_x_is_sin(m.bc) ? std::sin(kx * x) : std::cos(kx * x);
            } else {
                const double y = (side == 2) ? geom.B : 0.0;
                const double ky = rect_wavenumber_y(m, geom);
                fixed = rect_x_is_sin(m.bc) ? std::sin(ky * y) : std::cos(ky * y);
            }
            const double amp = state.u0[n] * m.norm_const * fixed;
            if (amp == 0.0) continue;
            double* row = &rows[static_cast<std::size_t>(along_y ? m.i2 : m.i1) * ns];
            const double c1 = std::cos(m.eigenvalue * dt);
            double cm = std::cos(-m.eigenvalue * dt), c0 = 1.0;
            for (int j = 0; j < ns; ++j) {
                row[j] += amp * c0;
                const double cn = 2.0 * c1 * c0 - cm;
                cm = c0;
                c0 = cn;
            }
        }
        parallel_for(dets.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t di = lo; di < hi; ++di) {
                const int d = dets[di];
                double* out = &rec.U[static_cast<std::size_t>(d) * ns];
                const double coord = along_y ? rec.detectors[d].y : rec.detectors[d].x;
                const double len = along_y ? geom.B : geom.A;
                const bool grp_sin = rect_x_is_sin(basis.bc);
                const bool half_idx = !along_y && basis.bc == BcKind::MixedRightDirichlet;
                for (int gi = 0; gi <= g_max; ++gi) {
                    const double kg = (half_idx ? gi + 0.5 : gi) * M_PI / len;
                    const double fac = grp_sin ? std::sin(kg * coord) : std::cos(kg * coord);
                    if (fac == 0.0) continue;
                    const double* row = &rows[static_cast<std::size_t>(gi) * ns];
                    for (int j = 0; j < ns; ++j) out[j] += fac * row[j];
                }
            }
        });
    }
    return rec;
}

double choose_cap_for_tail(const std::function<double(double, double)>& f,
                           const std::function<void(double, double, double&, double&)>& grad,
                           const Geometry& g, double tail_frac, double cap_start,
                           double cap_limit) {
    double cap = cap_start;
    while (true) {
        auto basis = std::make_shared<const ModeSet>(enumerate_modes(g, BcKind::Neumann, cap));
        ModalState st = project_initial(f, basis, grad);
        if (st.grad_energy <= 0.0)
            throw ParameterError("choose_cap_for_tail requires the analytic gradient");
        if (st.tail_energy <= tail_frac * st.grad_energy) return cap;
        if (cap >= cap_limit)
            throw ResolutionError("tail target unreachable below the cap limit");
        cap = std::min(cap_limit, cap * 1.3);
    }
}

} // namespace cavitor
