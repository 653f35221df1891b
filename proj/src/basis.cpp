#include "cavitor/basis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cavitor/errors.hpp"
#include "cavitor/quadrature.hpp"

namespace cavitor {

BcKind parse_bc(const std::string& text) {
    if (text == "neumann") return BcKind::Neumann;
    if (text == "dirichlet") return BcKind::Dirichlet;
    if (text == "mixed-right-dirichlet" || text == "mixed") return BcKind::MixedRightDirichlet;
    throw ParameterError("unknown boundary condition: " + text);
}

std::string bc_name(BcKind bc) {
    switch (bc) {
        case BcKind::Neumann: return "neumann";
        case BcKind::Dirichlet: return "dirichlet";
        case BcKind::MixedRightDirichlet: return "mixed-right-dirichlet";
    }
    return "?";
}

namespace {

void sort_modes(std::vector<EigenMode>& modes) {
    std::sort(modes.begin(), modes.end(), [](const EigenMode& a, const EigenMode& b) {
        if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
        if (a.i1 != b.i1) return a.i1 < b.i1;
        if (a.i2 != b.i2) return a.i2 < b.i2;
        return a.parity < b.parity;
    });
}

ModeSet enumerate_rect(const Geometry& g, BcKind bc, double cap) {
    ModeSet set{g, bc, cap, {}};
    const double cap2 = cap * cap;
    const int i1_lo = (bc == BcKind::Dirichlet) ? 1 : 0;
    const int i2_lo = (bc == BcKind::Dirichlet) ? 1 : 0;
    for (int i1 = i1_lo;; ++i1) {
        const double kx = (bc == BcKind::MixedRightDirichlet) ? (i1 + 0.5) * M_PI / g.A
                                                              : i1 * M_PI / g.A;
        if (kx * kx > cap2) break;
        for (int i2 = i2_lo;; ++i2) {
            const double ky = i2 * M_PI / g.B;
            const double e2 = kx * kx + ky * ky;
            if (e2 > cap2) break;
            EigenMode m;
            m.geom = GeomKind::Rect;
            m.bc = bc;
            m.i1 = i1;
            m.i2 = i2;
            m.eigenvalue = std::sqrt(e2);
            switch (bc) {
                case BcKind::Neumann:
                    m.norm_const = std::sqrt((i1 == 0 ? 1.0 : 2.0) * (i2 == 0 ? 1.0 : 2.0) / (g.A * g.B));
                    break;
                case BcKind::Dirichlet:
                    m.norm_const = 2.0 / std::sqrt(g.A * g.B);
                    break;
                case BcKind::MixedRightDirichlet:
                    m.norm_const = std::sqrt(2.0 * (i2 == 0 ? 1.0 : 2.0) / (g.A * g.B));
                    break;
            }
            set.modes.push_back(m);
        }
    }
    sort_modes(set.modes);
    return set;
}

ModeSet enumerate_disk(const Geometry& g, BcKind bc, double cap) {
    if (bc == BcKind::MixedRightDirichlet)
        throw ConfigError("mixed boundary conditions are not defined on the disk");
    ModeSet set{g, bc, cap, {}};
    const bool neumann = (bc == BcKind::Neumann);
    for (int l = 0;; ++l) {
        if (l > 0 && std::sqrt(static_cast<double>(l) * (l + 2.0)) > cap) break;
        const auto zeros = specfun::bessel_zeros_below(l, cap, neumann);
        for (std::size_t n = 0; n < zeros.size(); ++n) {
            const double eig = zeros[n];
            double base;
            if (neumann && l == 0 && n == 0) {
                base = 1.0 / std::sqrt(M_PI); // constant mode, eigenvalue 0
            } else if (neumann) {
                const double jl = specfun::bessel_j(l, eig);
                base = 1.0 / std::sqrt(M_PI * (1.0 - static_cast<double>(l) * l / (eig * eig))) /
                       std::abs(jl);
            } else {
                base = 1.0 / (std::sqrt(M_PI) * std::abs(specfun::bessel_j_prime(l, eig)));
            }
            for (int parity = 0; parity <= (l == 0 ? 0 : 1); ++parity) {
                EigenMode m;
                m.geom = GeomKind::Disk;
                m.bc = bc;
                m.i1 = static_cast<int>(n) + 1;
                m.i2 = l;
                m.parity = parity;
                m.eigenvalue = eig;
                m.norm_const = (l == 0) ? base : std::sqrt(2.0) * base;
                set.modes.push_back(m);
            }
        }
    }
    sort_modes(set.modes);
    return set;
}

// exact sin(k pi/2), cos(k pi/2) for integer k (negative allowed)
int sin_half(int k) {
    const int r = ((k % 4) + 4) % 4;
    return r == 1 ? 1 : (r == 3 ? -1 : 0);
}
int cos_half(int k) {
    const int r = ((k % 4) + 4) % 4;
    return r == 0 ? 1 : (r == 2 ? -1 : 0);
}

// 1D factor: sin or cos with wavenumber q * pi / (2L), q integer (2i for whole
// indices, 2i+1 for the half indices of the mixed problem).
struct Trig1D {
    bool is_sin;
    int q;
    double L;
};

// Exact \int_0^L f1 f2 dx via product-to-sum; the boundary phases q pi/2 are
// evaluated in integer arithmetic so orthogonality is exact.
double trig_integral(const Trig1D& f1, const Trig1D& f2) {
    const double w = M_PI / (2.0 * f1.L);
    const int qm = f1.q - f2.q, qp = f1.q + f2.q;
    auto int_cos = [&](int q) { // \int_0^L cos(q w x) dx
        if (q == 0) return f1.L;
        return sin_half(q) / (q * w);
    };
    auto int_sin = [&](int q) { // \int_0^L sin(q w x) dx
        if (q == 0) return 0.0;
        return (1.0 - cos_half(q)) / (q * w);
    };
    if (!f1.is_sin && !f2.is_sin) return 0.5 * (int_cos(qm) + int_cos(qp));
    if (f1.is_sin && f2.is_sin) return 0.5 * (int_cos(qm) - int_cos(qp));
    if (f1.is_sin && !f2.is_sin) return 0.5 * (int_sin(qp) + int_sin(qm));
    return 0.5 * (int_sin(qp) - int_sin(qm)); // cos * sin
}

Trig1D x_factor(const EigenMode& m, const Geometry& g) {
    switch (m.bc) {
        case BcKind::Neumann: return {false, 2 * m.i1, g.A};
        case BcKind::Dirichlet: return {true, 2 * m.i1, g.A};
        case BcKind::MixedRightDirichlet: return {false, 2 * m.i1 + 1, g.A};
    }
    throw ParameterError("bad bc");
}

Trig1D y_factor(const EigenMode& m, const Geometry& g) {
    if (m.bc == BcKind::Dirichlet) return {true, 2 * m.i2, g.B};
    return {false, 2 * m.i2, g.B};
}

double disk_radial(const EigenMode& m, double r) {
    if (m.eigenvalue == 0.0) return 1.0;
    return specfun::bessel_j(m.i2, m.eigenvalue * r);
}

} // namespace

ModeSet enumerate_modes(const Geometry& g, BcKind bc, double cap) {
    if (!(cap > 0.0)) throw ParameterError("eigenvalue cap must be positive");
    return g.is_disk() ? enumerate_disk(g, bc, cap) : enumerate_rect(g, bc, cap);
}

double eval_mode(const EigenMode& m, const Geometry& g, double x, double y) {
    if (m.geom != g.kind) throw ConfigError("mode/geometry mismatch");
    if (g.is_disk()) {
        const double r = std::hypot(x, y);
        if (r > 1.0 + 1e-9) throw DomainError("point outside the unit disk");
        const double th = std::atan2(y, x);
        const double ang = (m.i2 == 0) ? 1.0
                         : (m.parity == 0 ? std::cos(m.i2 * th) : std::sin(m.i2 * th));
        return m.norm_const * disk_radial(m, std::min(r, 1.0)) * ang;
    }
    if (x < -1e-12 || x > g.A + 1e-12 || y < -1e-12 || y > g.B + 1e-12)
        throw DomainError("point outside the rectangle");
    const Trig1D fx = x_factor(m, g), fy = y_factor(m, g);
    const double wx = fx.q * M_PI / (2.0 * g.A), wy = fy.q * M_PI / (2.0 * g.B);
    const double vx = fx.is_sin ? std::sin(wx * x) : std::cos(wx * x);
    const double vy = fy.is_sin ? std::sin(wy * y) : std::cos(wy * y);
    return m.norm_const * vx * vy;
}

double coupling(const EigenMode& a, const EigenMode& b, const Geometry& g) {
    if (a.geom != b.geom || a.geom != g.kind)
        throw ConfigError("coupling requires modes of the same geometry");
    if (g.is_disk()) {
        if (a.i2 != b.i2 || a.parity != b.parity) return 0.0; // angular orthogonality
        const double ang = (a.i2 == 0) ? 2.0 * M_PI : M_PI;
        const double s = a.eigenvalue + b.eigenvalue;
        const int n = std::max(48, static_cast<int>(std::ceil(0.8 * s)) + 8);
        const auto rule = quad::gauss_legendre(n, 0.0, 1.0);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = rule.nodes[i];
            acc += rule.weights[i] * disk_radial(a, r) * disk_radial(b, r) * r;
        }
        return ang * a.norm_const * b.norm_const * acc;
    }
    const double ix = trig_integral(x_factor(a, g), x_factor(b, g));
    const double iy = trig_integral(y_factor(a, g), y_factor(b, g));
    return a.norm_const * b.norm_const * ix * iy;
}

namespace {

// squared eigenvalue as an exact integer key: 4 * (qx^2 qa pb + qy^2 qb pa)
// in units of pi^2/(4 pa pb), where q are the doubled wavenumber indices.
bool exact_keys(const ModeSet& set, std::vector<std::int64_t>& keys) {
    const auto& g = set.geom;
    if (g.is_disk() || !g.a2_over_pi2 || !g.b2_over_pi2) return false;
    const std::int64_t pa = g.a2_over_pi2->num, qa = g.a2_over_pi2->den;
    const std::int64_t pb = g.b2_over_pi2->num, qb = g.b2_over_pi2->den;
    keys.clear();
    keys.reserve(set.modes.size());
    for (const auto& m : set.modes) {
        const std::int64_t qx = (m.bc == BcKind::MixedRightDirichlet) ? 2 * m.i1 + 1 : 2 * m.i1;
        const std::int64_t qy = 2 * m.i2;
        keys.push_back(qx * qx * qa * pb + qy * qy * qb * pa);
    }
    return true;
}

} // namespace

std::vector<CoincidenceRecord> detect_coincidences(const ModeSet& neumann,
                                                   const ModeSet& reversal, double tol) {
    if ((neumann.geom.is_disk()) != (reversal.geom.is_disk()))
        throw ConfigError("coincidence detection requires matching geometries");
    std::vector<CoincidenceRecord> out;
    std::vector<std::int64_t> nk, rk;
    if (exact_keys(neumann, nk) && exact_keys(reversal, rk)) {
        std::unordered_map<std::int64_t, std::vector<int>> by_key;
        for (int i = 0; i < neumann.size(); ++i) by_key[nk[i]].push_back(i);
        for (int j = 0; j < reversal.size(); ++j) {
            auto it = by_key.find(rk[j]);
            if (it == by_key.end()) continue;
            for (int i : it->second) {
                const auto& a = neumann.modes[i];
                const auto& b = reversal.modes[j];
                out.push_back({a, b, a.eigenvalue, coupling(b, a, neumann.geom)});
            }
        }
        return out;
    }
    // floating comparison (disk / irrational rectangles)
    for (int i = 0, j0 = 0; i < neumann.size(); ++i) {
        const double lam = neumann.modes[i].eigenvalue;
        while (j0 < reversal.size() && reversal.modes[j0].eigenvalue < lam - tol) ++j0;
        for (int j = j0; j < reversal.size() && reversal.modes[j].eigenvalue <= lam + tol; ++j) {
            const auto& a = neumann.modes[i];
            const auto& b = reversal.modes[j];
            out.push_back({a, b, 0.5 * (lam + b.eigenvalue), coupling(b, a, neumann.geom)});
        }
    }
    return out;
}

} // namespace cavitor
