#include "cavitor/fdtd.hpp"

#include <algorithm>
#include <cmath>

#include "cavitor/errors.hpp"
#include "cavitor/parallel.hpp"

namespace cavitor {

Grid2D Grid2D::cartesian(const Geometry& g, int nx, int ny, double c0) {
    if (g.is_disk()) throw ConfigError("cartesian grids require a rectangle");
    Grid2D grid;
    grid.spec = GridSpec::cartesian(nx, ny, g.A, g.B);
    grid.c.assign(grid.spec.size(), c0);
    grid.c_min = grid.c_max = c0;
    return grid;
}

Grid2D Grid2D::polar(int nr, int ntheta) {
    Grid2D grid;
    grid.spec = GridSpec::polar(nr, ntheta);
    grid.c.assign(grid.spec.size(), 1.0);
    return grid;
}

void Grid2D::set_speed(const std::function<double(double, double)>& c_of_xy) {
    if (spec.kind != GridKind::Cartesian)
        throw ConfigError("variable sound speed is supported on Cartesian grids only");
    c_min = 1e300;
    c_max = 0.0;
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j) {
            double x, y;
            spec.node_xy(i, j, x, y);
            const double v = c_of_xy(x, y);
            if (!(v > 0.0)) throw ParameterError("sound speed must be positive");
            c[static_cast<std::size_t>(i) * spec.n2 + j] = v;
            c_min = std::min(c_min, v);
            c_max = std::max(c_max, v);
        }
}

double Grid2D::max_stable_dt() const {
    double h_min;
    if (spec.kind == GridKind::Cartesian)
        h_min = std::min(spec.d1(), spec.d2());
    else
        h_min = std::min(spec.d1(), spec.d1() * spec.d2()); // dr vs first-ring arc r_1 dtheta
    return 0.9 * h_min / (c_max * std::sqrt(2.0));
}

namespace {

struct PolarCoefs {
    std::vector<double> a_plus, a_minus, b; // per ring
    double inv_dr2;
};

PolarCoefs polar_coefs(const GridSpec& s) {
    PolarCoefs pc;
    const int nr = s.n1 - 1;
    const double dr = s.d1(), dth = s.d2();
    pc.inv_dr2 = 1.0 / (dr * dr);
    pc.a_plus.assign(nr + 1, 0.0);
    pc.a_minus.assign(nr + 1, 0.0);
    pc.b.assign(nr + 1, 0.0);
    for (int ir = 1; ir <= nr; ++ir) {
        const double r = ir * dr;
        pc.a_plus[ir] = pc.inv_dr2 + 1.0 / (2.0 * r * dr);
        pc.a_minus[ir] = pc.inv_dr2 - 1.0 / (2.0 * r * dr);
        pc.b[ir] = 1.0 / (r * r * dth * dth);
    }
    return pc;
}

// Laplacian row for a polar ring with periodic angular wrap.
inline void polar_row_lap(const double* um, const double* u0, const double* up, int nth,
                          double ap, double am, double b, double inv_dr2, double* out) {
    auto lap_at = [&](int j, int jm, int jp) {
        return ap * up[j] + am * um[j] - 2.0 * inv_dr2 * u0[j] +
               b * (u0[jm] + u0[jp] - 2.0 * u0[j]);
    };
    out[0] = lap_at(0, nth - 1, 1);
    for (int j = 1; j < nth - 1; ++j) out[j] = lap_at(j, j - 1, j + 1);
    out[nth - 1] = lap_at(nth - 1, nth - 2, 0);
}

void laplacian_cartesian(const GridSpec& s, const double* u, double* out) {
    const int n1 = s.n1, n2 = s.n2;
    const double ix2 = 1.0 / (s.d1() * s.d1()), iy2 = 1.0 / (s.d2() * s.d2());
    for (int i = 0; i < n1; ++i) {
        const double* row = u + static_cast<std::size_t>(i) * n2;
        // mirrored ghost rows implement the Neumann closure
        const double* rm = (i == 0) ? u + n2 : row - n2;
        const double* rp = (i == n1 - 1) ? row - n2 : row + n2;
        double* o = out + static_cast<std::size_t>(i) * n2;
        auto lap_at = [&](int j, int jm, int jp) {
            return ix2 * (rm[j] + rp[j] - 2.0 * row[j]) +
                   iy2 * (row[jm] + row[jp] - 2.0 * row[j]);
        };
        o[0] = lap_at(0, 1, 1);
        for (int j = 1; j < n2 - 1; ++j) o[j] = lap_at(j, j - 1, j + 1);
        o[n2 - 1] = lap_at(n2 - 1, n2 - 2, n2 - 2);
    }
}

void laplacian_polar(const GridSpec& s, const PolarCoefs& pc, const double* u, double* out) {
    const int nr = s.n1 - 1, nth = s.n2;
    const double dr = s.d1();
    // axis: mean over the first ring
    double mean1 = 0.0;
    for (int j = 0; j < nth; ++j) mean1 += u[nth + j];
    mean1 /= nth;
    const double lap0 = 4.0 * (mean1 - u[0]) / (dr * dr);
    for (int j = 0; j < nth; ++j) out[j] = lap0;
    for (int ir = 1; ir < nr; ++ir) {
        const double* row = u + static_cast<std::size_t>(ir) * nth;
        polar_row_lap(row - nth, row, row + nth, nth, pc.a_plus[ir], pc.a_minus[ir], pc.b[ir],
                      pc.inv_dr2, out + static_cast<std::size_t>(ir) * nth);
    }
    // outer ring: mirror ghost (u_r = 0), radial part collapses to 2(u_in - u)/dr^2
    {
        const int ir = nr;
        const double* row = u + static_cast<std::size_t>(ir) * nth;
        const double* um = row - nth;
        double* o = out + static_cast<std::size_t>(ir) * nth;
        const double b = pc.b[ir];
        auto lap_at = [&](int j, int jm, int jp) {
            return 2.0 * pc.inv_dr2 * (um[j] - row[j]) + b * (row[jm] + row[jp] - 2.0 * row[j]);
        };
        o[0] = lap_at(0, nth - 1, 1);
        for (int j = 1; j < nth - 1; ++j) o[j] = lap_at(j, j - 1, j + 1);
        o[nth - 1] = lap_at(nth - 1, nth - 2, 0);
    }
}

// -------- detector <-> boundary node interpolation --------

struct BoundaryNode {
    int i, j;     // grid indices
    int side;     // rect side, -1 on disk
    double s;     // boundary parameter (angle or offset along side)
};

std::vector<BoundaryNode> boundary_nodes(const GridSpec& s, bool full, const std::vector<Side>& sides) {
    std::vector<BoundaryNode> out;
    if (s.kind == GridKind::Polar) {
        const int nr = s.n1 - 1;
        for (int j = 0; j < s.n2; ++j) out.push_back({nr, j, -1, j * s.d2()});
        return out;
    }
    auto on_sides = [&](Side w) {
        return full || std::find(sides.begin(), sides.end(), w) != sides.end();
    };
    const int n1 = s.n1, n2 = s.n2;
    std::vector<char> taken(s.size(), 0);
    auto push = [&](int i, int j, Side w, double off) {
        const std::size_t idx = static_cast<std::size_t>(i) * n2 + j;
        if (taken[idx]) return;
        taken[idx] = 1;
        out.push_back({i, j, static_cast<int>(w), off});
    };
    if (on_sides(Side::Bottom))
        for (int i = 0; i < n1; ++i) push(i, 0, Side::Bottom, i * s.d1());
    if (on_sides(Side::Right))
        for (int j = 0; j < n2; ++j) push(n1 - 1, j, Side::Right, j * s.d2());
    if (on_sides(Side::Top))
        for (int i = 0; i < n1; ++i) push(i, n2 - 1, Side::Top, i * s.d1());
    if (on_sides(Side::Left))
        for (int j = 0; j < n2; ++j) push(0, j, Side::Left, j * s.d2());
    return out;
}

// node series = linear interpolation of the detector rows along the boundary
std::vector<double> node_mapped_series(const BoundaryRecording& rec,
                                       const std::vector<BoundaryNode>& nodes) {
    const int ns = rec.n_samples;
    std::vector<double> series(nodes.size() * static_cast<std::size_t>(ns), 0.0);
    if (rec.geom.is_disk()) {
        const int nd = rec.n_detectors();
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double th = nodes[q].s;
            const double pos = th / (2.0 * M_PI) * nd;
            const int d0 = static_cast<int>(std::floor(pos)) % nd;
            const int d1 = (d0 + 1) % nd;
            const double w1 = pos - std::floor(pos);
            const double* r0 = &rec.U[static_cast<std::size_t>(d0) * ns];
            const double* r1 = &rec.U[static_cast<std::size_t>(d1) * ns];
            double* o = &series[q * ns];
            for (int t = 0; t < ns; ++t) o[t] = (1.0 - w1) * r0[t] + w1 * r1[t];
        }
        return series;
    }
    // rectangle: group detectors per side, ascending offset; on the full
    // boundary borrow the next side's corner to close each chain
    struct SideChain {
        std::vector<double> s;
        std::vector<int> det;
    };
    SideChain chains[4];
    for (int d = 0; d < rec.n_detectors(); ++d) {
        const auto& det = rec.detectors[d];
        chains[det.side].s.push_back(det.s);
        chains[det.side].det.push_back(d);
    }
    for (int w = 0; w < 4; ++w) {
        auto& ch = chains[w];
        std::vector<int> order(ch.s.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return ch.s[a] < ch.s[b]; });
        SideChain sorted;
        for (int idx : order) {
            sorted.s.push_back(ch.s[idx]);
            sorted.det.push_back(ch.det[idx]);
        }
        ch = std::move(sorted);
    }
    if (rec.layout.full_boundary) {
        // Each side chain omits one corner (deduplicated when the detectors
        // were laid out); borrow it back from the neighboring side so the
        // interpolation covers the full side. Offsets are x on bottom/top and
        // y on right/left, so the missing end differs per side.
        // bottom misses x = A: corner (A,0) = right's offset-0 detector
        chains[0].s.push_back(rec.geom.A);
        chains[0].det.push_back(chains[1].det.front());
        // right misses y = B: corner (A,B) = top's offset-A detector (its max)
        chains[1].s.push_back(rec.geom.B);
        chains[1].det.push_back(chains[2].det.back());
        // top misses x = 0: corner (0,B) = left's offset-B detector (its max)
        chains[2].s.insert(chains[2].s.begin(), 0.0);
        chains[2].det.insert(chains[2].det.begin(), chains[3].det.back());
        // left misses y = 0: corner (0,0) = bottom's offset-0 detector
        chains[3].s.insert(chains[3].s.begin(), 0.0);
        chains[3].det.insert(chains[3].det.begin(), chains[0].det.front());
    }
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const auto& node = nodes[q];
        const auto& ch = chains[node.side];
        if (ch.det.empty()) throw ConfigError("recording has no detectors on a Sigma_1 side");
        double* o = &series[q * ns];
        const auto it = std::upper_bound(ch.s.begin(), ch.s.end(), node.s);
        int hi = static_cast<int>(it - ch.s.begin());
        hi = std::clamp(hi, 1, static_cast<int>(ch.s.size()) - 1);
        const int lo = hi - 1;
        const double span = ch.s[hi] - ch.s[lo];
        const double w1 = span > 0 ? std::clamp((node.s - ch.s[lo]) / span, 0.0, 1.0) : 0.0;
        const double* r0 = &rec.U[static_cast<std::size_t>(ch.det[lo]) * ns];
        const double* r1 = &rec.U[static_cast<std::size_t>(ch.det[hi]) * ns];
        for (int t = 0; t < ns; ++t) o[t] = (1.0 - w1) * r0[t] + w1 * r1[t];
    }
    return series;
}

void nan_check(const std::vector<double>& u, int step) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    if (!std::isfinite(m))
        throw NumericalError("FDTD instability detected at step " + std::to_string(step));
}

} // namespace

void apply_laplacian(const Grid2D& grid, const ScalarField2D& u, ScalarField2D& out) {
    if (u.grid != grid.spec) throw ConfigError("field/grid mismatch");
    if (out.grid != grid.spec) out = ScalarField2D(grid.spec);
    if (grid.spec.kind == GridKind::Cartesian) {
        laplacian_cartesian(grid.spec, u.v.data(), out.v.data());
    } else {
        const PolarCoefs pc = polar_coefs(grid.spec);
        laplacian_polar(grid.spec, pc, u.v.data(), out.v.data());
    }
}

BoundaryRecording forward_run(const Grid2D& grid, const ScalarField2D& f, double dt, double T,
                              const DetectorLayout& detectors) {
    return forward_run(grid, f, dt, T, detectors, {});
}

BoundaryRecording forward_run(const Grid2D& grid, const ScalarField2D& f, double dt, double T,
                              const DetectorLayout& detectors, const StepProbe& probe) {
    if (f.grid != grid.spec) throw ConfigError("initial field does not match the grid");
    if (dt > grid.max_stable_dt() * (1.0 + 1e-12))
        throw ConfigError("CFL violation: dt exceeds 0.9 h_min / (c_max sqrt(2))");
    const bool polar = grid.spec.kind == GridKind::Polar;
    const Geometry geom = polar ? Geometry::disk()
                                : Geometry::rect(grid.spec.A, grid.spec.B);

    BoundaryRecording rec;
    rec.geom = polar ? Geometry::disk() : geom;
    rec.layout = detectors;
    rec.detectors = detector_positions(rec.geom, detectors);
    rec.dt = dt;
    const int n_steps = static_cast<int>(std::llround(T / dt));
    rec.n_samples = n_steps + 1;
    rec.T = n_steps * dt;
    const int nd = rec.n_detectors();
    rec.U.assign(static_cast<std::size_t>(nd) * rec.n_samples, 0.0);

    // detector sampling = linear interpolation between the two nearest
    // boundary nodes (exact when the detectors sit on nodes)
    struct Tap {
        std::size_t idx0, idx1;
        double w1;
    };
    std::vector<Tap> taps(nd);
    const auto& s = grid.spec;
    for (int d = 0; d < nd; ++d) {
        const auto& det = rec.detectors[d];
        if (polar) {
            const double pos = det.s / s.d2();
            const int j0 = static_cast<int>(std::floor(pos)) % s.n2;
            const int j1 = (j0 + 1) % s.n2;
            const std::size_t base = static_cast<std::size_t>(s.n1 - 1) * s.n2;
            taps[d] = {base + j0, base + j1, pos - std::floor(pos)};
        } else {
            int i0, j0, i1, j1;
            double frac;
            switch (static_cast<Side>(det.side)) {
                case Side::Bottom: {
                    const double p = det.s / s.d1();
                    i0 = std::clamp(static_cast<int>(std::floor(p)), 0, s.n1 - 2);
                    frac = p - i0;
                    i1 = i0 + 1;
                    j0 = j1 = 0;
                    break;
                }
                case Side::Top: {
                    const double p = det.s / s.d1();
                    i0 = std::clamp(static_cast<int>(std::floor(p)), 0, s.n1 - 2);
                    frac = p - i0;
                    i1 = i0 + 1;
                    j0 = j1 = s.n2 - 1;
                    break;
                }
                case Side::Right: {
                    const double p = det.s / s.d2();
                    j0 = std::clamp(static_cast<int>(std::floor(p)), 0, s.n2 - 2);
                    frac = p - j0;
                    j1 = j0 + 1;
                    i0 = i1 = s.n1 - 1;
                    break;
                }
                case Side::Left: {
                    const double p = det.s / s.d2();
                    j0 = std::clamp(static_cast<int>(std::floor(p)), 0, s.n2 - 2);
                    frac = p - j0;
                    j1 = j0 + 1;
                    i0 = i1 = 0;
                    break;
                }
                default: throw ConfigError("bad detector side");
            }
            taps[d] = {static_cast<std::size_t>(i0) * s.n2 + j0,
                       static_cast<std::size_t>(i1) * s.n2 + j1, frac};
        }
    }

    const std::size_t n = s.size();
    std::vector<double> u_prev = f.v, u_cur(n), lap(n), cdt2(n);
    for (std::size_t q = 0; q < n; ++q) cdt2[q] = dt * dt * grid.c[q] * grid.c[q];
    const PolarCoefs pc = polar ? polar_coefs(s) : PolarCoefs{};

    auto compute_lap = [&](const std::vector<double>& u) {
        if (polar)
            laplacian_polar(s, pc, u.data(), lap.data());
        else
            laplacian_cartesian(s, u.data(), lap.data());
    };
    auto sample_to = [&](const std::vector<double>& u, int col) {
        for (int d = 0; d < nd; ++d)
            rec.U[static_cast<std::size_t>(d) * rec.n_samples + col] =
                (1.0 - taps[d].w1) * u[taps[d].idx0] + taps[d].w1 * u[taps[d].idx1];
    };

    sample_to(u_prev, 0);
    if (probe) probe(0, f, f);
    if (n_steps == 0) return rec;
    // zero-velocity start: u^1 = u^0 + (dt^2 c^2 / 2) lap u^0
    compute_lap(u_prev);
    for (std::size_t q = 0; q < n; ++q) u_cur[q] = u_prev[q] + 0.5 * cdt2[q] * lap[q];
    sample_to(u_cur, 1);
    ScalarField2D cur_view(s), prev_view(s);
    if (probe) {
        cur_view.v = u_cur;
        prev_view.v = u_prev;
        probe(1, cur_view, prev_view);
    }

    for (int step = 2; step <= n_steps; ++step) {
        compute_lap(u_cur);
        parallel_for(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t q = lo; q < hi; ++q) {
                const double next = 2.0 * u_cur[q] - u_prev[q] + cdt2[q] * lap[q];
                u_prev[q] = next; // reuse the previous buffer as the new field
            }
        });
        std::swap(u_prev, u_cur);
        sample_to(u_cur, step);
        if (step % 500 == 0) nan_check(u_cur, step);
        if (probe) {
            cur_view.v = u_cur;
            prev_view.v = u_prev;
            probe(step, cur_view, prev_view);
        }
    }
    nan_check(u_cur, n_steps);
    return rec;
}

ScalarField2D reversal_run(const Grid2D& grid, const BoundaryRecording& gated, double dt) {
    const bool polar = grid.spec.kind == GridKind::Polar;
    if (polar != gated.geom.is_disk())
        throw ConfigError("recording geometry does not match the grid");
    if (!polar && (std::abs(grid.spec.A - gated.geom.A) > 1e-12 ||
                   std::abs(grid.spec.B - gated.geom.B) > 1e-12))
        throw ConfigError("recording rectangle does not match the grid extents");
    if (dt > grid.max_stable_dt() * (1.0 + 1e-12))
        throw ConfigError("CFL violation: dt exceeds 0.9 h_min / (c_max sqrt(2))");
    const double T = gated.T;
    const int n_steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
    const double dte = T / n_steps; // land on t = 0 exactly

    const auto nodes = boundary_nodes(grid.spec, gated.layout.full_boundary, gated.layout.sides);
    const auto series = node_mapped_series(gated, nodes);
    const int ns = gated.n_samples;
    const std::size_t nb = nodes.size();
    const auto& s = grid.spec;

    // Dirichlet value at backward time tau (t = T - tau), cubic in time
    std::vector<double> bvals(nb);
    auto boundary_at = [&](double tau) {
        const double t = std::clamp(T - tau, 0.0, gated.T);
        const double pos = t / gated.dt;
        int k = static_cast<int>(std::floor(pos));
        k = std::clamp(k, 1, ns - 3);
        const double x = pos - k;
        // 4-point Lagrange weights on samples k-1 .. k+2
        const double w0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
        const double w1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        const double w2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
        const double w3 = (x + 1.0) * x * (x - 1.0) / 6.0;
        for (std::size_t q = 0; q < nb; ++q) {
            const double* row = &series[q * ns];
            bvals[q] = w0 * row[k - 1] + w1 * row[k] + w2 * row[k + 1] + w3 * row[k + 2];
        }
    };
    auto impose = [&](std::vector<double>& u, double tau) {
        boundary_at(tau);
        for (std::size_t q = 0; q < nb; ++q) {
            const std::size_t idx = static_cast<std::size_t>(nodes[q].i) * s.n2 + nodes[q].j;
            u[idx] = bvals[q];
        }
    };

    const std::size_t n = s.size();
    std::vector<double> u_prev(n, 0.0), u_cur(n, 0.0), lap(n), cdt2(n);
    for (std::size_t q = 0; q < n; ++q) cdt2[q] = dte * dte * grid.c[q] * grid.c[q];
    const PolarCoefs pc = polar ? polar_coefs(s) : PolarCoefs{};
    auto compute_lap = [&](const std::vector<double>& u) {
        if (polar)
            laplacian_polar(s, pc, u.data(), lap.data());
        else
            laplacian_cartesian(s, u.data(), lap.data());
    };

    impose(u_prev, 0.0); // alpha(1) = 0 keeps this consistent with zero terminal data
    // first step from zero terminal state
    compute_lap(u_prev);
    for (std::size_t q = 0; q < n; ++q) u_cur[q] = u_prev[q] + 0.5 * cdt2[q] * lap[q];
    impose(u_cur, dte);

    for (int step = 2; step <= n_steps; ++step) {
        compute_lap(u_cur);
        parallel_for(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t q = lo; q < hi; ++q)
                u_prev[q] = 2.0 * u_cur[q] - u_prev[q] + cdt2[q] * lap[q];
        });
        std::swap(u_prev, u_cur);
        impose(u_cur, step * dte);
        if (step % 1000 == 0) nan_check(u_cur, step);
    }
    nan_check(u_cur, n_steps);
    ScalarField2D out(s);
    out.v = std::move(u_cur);
    return out;
}

} // namespace cavitor
