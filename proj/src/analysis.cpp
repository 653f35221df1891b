#include "cavitor/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cavitor/errors.hpp"
#include "cavitor/parallel.hpp"
#include "cavitor/quadrature.hpp"

namespace cavitor {

namespace {

double transfer_integral(double lambda, double nu, double eps, const CutoffProfile& cutoff,
                         bool sine_kernel) {
    if (!(eps > 0.0)) throw ParameterError("coupling integral needs eps > 0");
    if (!(nu > 0.0)) throw ParameterError("coupling integral needs nu > 0");
    const double d1 = (lambda - nu) / eps;
    const double d2 = (lambda + nu) / eps;
    const double t0 = cutoff.flat_end(); // alpha' = alpha'' = 0 on [0, t0]
    auto f = [&](double t) {
        const double ap = cutoff.deriv(t);
        const double app = cutoff.second_deriv(t);
        if (sine_kernel)
            return lambda * ap * (std::cos(d1 * t) - std::cos(d2 * t)) +
                   0.5 * eps * app * (std::sin(d1 * t) - std::sin(d2 * t));
        return lambda * ap * (std::sin(d2 * t) + std::sin(d1 * t)) -
               0.5 * eps * app * (std::cos(d1 * t) + std::cos(d2 * t));
    };
    const int panels =
        std::max(4, static_cast<int>(std::ceil((1.0 - t0) * (lambda + nu) / (2.0 * M_PI * eps))));
    return quad::integrate_adaptive(f, t0, 1.0, 1e-8, panels).value;
}

} // namespace

double coupling_integral(double lambda, double nu, double eps, const CutoffProfile& cutoff) {
    return transfer_integral(lambda, nu, eps, cutoff, true);
}

double coupling_integral_cos(double lambda, double nu, double eps, const CutoffProfile& cutoff) {
    return transfer_integral(lambda, nu, eps, cutoff, false);
}

namespace {

// gradient by centered differences, one-sided at boundaries; polar grids use
// (u_r, u_theta / r) with the axis handled by its zero quadrature weight
void grid_gradient_sq(const ScalarField2D& f, ScalarField2D& gsq) {
    const auto& s = f.grid;
    gsq = ScalarField2D(s);
    const double d1 = s.d1(), d2 = s.d2();
    for (int i = 0; i < s.n1; ++i) {
        for (int j = 0; j < s.n2; ++j) {
            double du1;
            if (i == 0)
                du1 = (f.at(1, j) - f.at(0, j)) / d1;
            else if (i == s.n1 - 1)
                du1 = (f.at(i, j) - f.at(i - 1, j)) / d1;
            else
                du1 = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * d1);
            double du2;
            if (s.kind == GridKind::Polar) {
                const int jm = (j + s.n2 - 1) % s.n2, jp = (j + 1) % s.n2;
                du2 = (f.at(i, jp) - f.at(i, jm)) / (2.0 * d2);
                const double r = i * d1;
                du2 = (i == 0) ? 0.0 : du2 / r;
            } else {
                if (j == 0)
                    du2 = (f.at(i, 1) - f.at(i, 0)) / d2;
                else if (j == s.n2 - 1)
                    du2 = (f.at(i, j) - f.at(i, j - 1)) / d2;
                else
                    du2 = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * d2);
            }
            gsq.at(i, j) = du1 * du1 + du2 * du2;
        }
    }
}

} // namespace

Norms norms(const ScalarField2D& field, const Grid2D& grid) {
    if (field.grid != grid.spec) throw ConfigError("norms: field/grid mismatch");
    Norms out;
    double l2 = 0.0;
    for (int i = 0; i < field.grid.n1; ++i)
        for (int j = 0; j < field.grid.n2; ++j) {
            const double c = grid.c[static_cast<std::size_t>(i) * field.grid.n2 + j];
            const double v = field.at(i, j);
            l2 += node_weight(field.grid, i, j) * v * v / (c * c);
        }
    ScalarField2D gsq;
    grid_gradient_sq(field, gsq);
    const double h1s = integrate(gsq);
    out.l2w = std::sqrt(std::max(0.0, l2));
    out.h1_semi = std::sqrt(std::max(0.0, h1s));
    out.h1 = std::sqrt(std::max(0.0, l2 + h1s));
    return out;
}

double energy(const ScalarField2D& un, const ScalarField2D& unm1, const Grid2D& grid, double dt) {
    if (un.grid != grid.spec || unm1.grid != grid.spec)
        throw ConfigError("energy: field/grid mismatch");
    ScalarField2D mid(un.grid);
    for (std::size_t q = 0; q < mid.v.size(); ++q) mid.v[q] = 0.5 * (un.v[q] + unm1.v[q]);
    ScalarField2D gsq;
    grid_gradient_sq(mid, gsq);
    double acc = integrate(gsq);
    for (int i = 0; i < un.grid.n1; ++i)
        for (int j = 0; j < un.grid.n2; ++j) {
            const double c = grid.c[static_cast<std::size_t>(i) * un.grid.n2 + j];
            const double v = (un.at(i, j) - unm1.at(i, j)) / dt;
            acc += node_weight(un.grid, i, j) * v * v / (c * c);
        }
    return acc;
}

ScalarField2D ErrorPrediction::persistent_field(const GridSpec& grid) const {
    ScalarField2D out(grid);
    const Geometry& g = reversal->geom;
    for (std::size_t k = 0; k < persistent_coeff.size(); ++k) {
        if (persistent_coeff[k] == 0.0) continue;
        for (int i = 0; i < grid.n1; ++i)
            for (int j = 0; j < grid.n2; ++j) {
                double x, y;
                grid.node_xy(i, j, x, y);
                out.at(i, j) += persistent_coeff[k] * eval_mode(reversal->modes[k], g, x, y);
            }
    }
    return out;
}

double ErrorPrediction::persistent_h1() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < persistent_coeff.size(); ++k) {
        const double nu = reversal->modes[k].eigenvalue;
        acc += persistent_coeff[k] * persistent_coeff[k] * (1.0 + nu * nu);
    }
    return std::sqrt(acc);
}

ErrorPrediction predict_residual(const std::vector<double>& u_n,
                                 std::shared_ptr<const ModeSet> neumann,
                                 std::shared_ptr<const ModeSet> reversal,
                                 const CutoffProfile& cutoff, double eps) {
    if (u_n.size() != neumann->modes.size())
        throw ParameterError("predict_residual: coefficient count does not match the basis");
    ErrorPrediction pred;
    pred.reversal = reversal;
    pred.eps = eps;
    const int nk = reversal->size();
    pred.nu_wk0.assign(nk, 0.0);
    pred.wk0p.assign(nk, 0.0);
    pred.persistent_coeff.assign(nk, 0.0);

    // exact coincidences feed the eps-independent term
    const auto records = detect_coincidences(*neumann, *reversal, 1e-9);
    std::vector<std::pair<int, int>> coincident; // (neumann idx, reversal idx)
    auto mode_index = [](const ModeSet& set, const EigenMode& m) {
        for (int i = 0; i < set.size(); ++i) {
            const auto& q = set.modes[i];
            if (q.i1 == m.i1 && q.i2 == m.i2 && q.parity == m.parity) return i;
        }
        return -1;
    };
    for (const auto& rec : records) {
        const int ni = mode_index(*neumann, rec.neumann);
        const int ki = mode_index(*reversal, rec.reversal);
        if (ni < 0 || ki < 0) continue;
        coincident.emplace_back(ni, ki);
        pred.persistent_coeff[ki] -= u_n[ni] * rec.coupling;
    }

    // nonzero phantom coefficients only; coincident pairs use the limiting
    // value I = -nu (the transfer integral converges there, tested separately)
    std::vector<int> active;
    for (int n = 0; n < neumann->size(); ++n)
        if (u_n[n] != 0.0) active.push_back(n);

    parallel_for(nk, [&](std::size_t klo, std::size_t khi) {
        for (std::size_t k = klo; k < khi; ++k) {
            const auto& psi = reversal->modes[k];
            const double nu = psi.eigenvalue;
            if (!(nu > 0.0)) continue;
            double acc_s = 0.0, acc_c = 0.0;
            for (int n : active) {
                const auto& phi = neumann->modes[n];
                const double cp = coupling(psi, phi, reversal->geom);
                if (cp == 0.0) continue;
                const double lam = phi.eigenvalue;
                const bool coincide = std::abs(lam - nu) <= 1e-9;
                const double is = coincide ? -nu : coupling_integral(lam, nu, eps, cutoff);
                const double ic = coincide ? 0.0 : coupling_integral_cos(lam, nu, eps, cutoff);
                acc_s += u_n[n] * is * cp;
                acc_c += u_n[n] * ic * cp;
            }
            pred.nu_wk0[k] = acc_s;
            pred.wk0p[k] = acc_c;
        }
    });
    return pred;
}

std::vector<ModeEnergy> decompose_residual(const ScalarField2D& w, const ModeSet& reversal,
                                           int n_modes) {
    const auto& grid = w.grid;
    if ((grid.kind == GridKind::Polar) != reversal.geom.is_disk())
        throw ConfigError("decompose_residual: grid does not match the basis geometry");
    n_modes = std::min<int>(n_modes, reversal.size());
    std::vector<ModeEnergy> table(n_modes);
    if (grid.kind == GridKind::Cartesian) {
        // separable two-stage contraction: stage 1 reduces over y per angular
        // index, stage 2 over x per mode
        const Geometry& g = reversal.geom;
        int i2_max = 0;
        for (int k = 0; k < n_modes; ++k) i2_max = std::max(i2_max, reversal.modes[k].i2);
        const bool y_sin = reversal.bc == BcKind::Dirichlet;
        const bool x_sin = reversal.bc == BcKind::Dirichlet;
        std::vector<double> H(static_cast<std::size_t>(i2_max + 1) * grid.n1, 0.0);
        std::vector<double> ytab(static_cast<std::size_t>(i2_max + 1) * grid.n2);
        for (int i2 = 0; i2 <= i2_max; ++i2)
            for (int j = 0; j < grid.n2; ++j) {
                const double ky = i2 * M_PI / g.B;
                const double y = j * grid.d2();
                const double wy = grid.d2() * ((j == 0 || j == grid.n2 - 1) ? 0.5 : 1.0);
                ytab[static_cast<std::size_t>(i2) * grid.n2 + j] =
                    wy * (y_sin ? std::sin(ky * y) : std::cos(ky * y));
            }
        for (int i = 0; i < grid.n1; ++i) {
            const double* frow = &w.v[static_cast<std::size_t>(i) * grid.n2];
            for (int i2 = 0; i2 <= i2_max; ++i2) {
                const double* yr = &ytab[static_cast<std::size_t>(i2) * grid.n2];
                double acc = 0.0;
                for (int j = 0; j < grid.n2; ++j) acc += frow[j] * yr[j];
                H[static_cast<std::size_t>(i2) * grid.n1 + i] = acc;
            }
        }
        for (int k = 0; k < n_modes; ++k) {
            const auto& m = reversal.modes[k];
            const double kx = (reversal.bc == BcKind::MixedRightDirichlet ? m.i1 + 0.5 : m.i1) *
                              M_PI / g.A;
            const double* hr = &H[static_cast<std::size_t>(m.i2) * grid.n1];
            double acc = 0.0;
            for (int i = 0; i < grid.n1; ++i) {
                const double x = i * grid.d1();
                const double wx = grid.d1() * ((i == 0 || i == grid.n1 - 1) ? 0.5 : 1.0);
                acc += wx * (x_sin ? std::sin(kx * x) : std::cos(kx * x)) * hr[i];
            }
            table[k].mode = m;
            table[k].coeff = m.norm_const * acc;
        }
    } else {
        parallel_for(n_modes, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const auto& m = reversal.modes[k];
                double acc = 0.0;
                for (int i = 0; i < grid.n1; ++i)
                    for (int j = 0; j < grid.n2; ++j) {
                        double x, y;
                        grid.node_xy(i, j, x, y);
                        acc += node_weight(grid, i, j) * w.at(i, j) *
                               eval_mode(m, reversal.geom, x, y);
                    }
                table[k].mode = m;
                table[k].coeff = acc;
            }
        });
    }
    double total = 0.0;
    for (const auto& e : table) total += e.coeff * e.coeff;
    if (total <= 0.0) return {};
    for (auto& e : table) e.share = e.coeff * e.coeff / total;
    std::sort(table.begin(), table.end(),
              [](const ModeEnergy& a, const ModeEnergy& b) { return a.share > b.share; });
    return table;
}

} // namespace cavitor
