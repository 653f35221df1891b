#include "cavitor/specfun.hpp"

#include <cmath>
#include <limits>

#include "cavitor/errors.hpp"

namespace cavitor::specfun {

namespace {

void check_range(int m, double x) {
    if (m < 0 || m > kMaxOrder)
        throw ParameterError("bessel_j: order out of range [0, 200]: " + std::to_string(m));
    if (!(x >= 0.0) || x > kMaxArgument)
        throw ParameterError("bessel_j: argument out of range [0, 1e4]");
}

// Ascending series J_m(x) = (x/2)^m / m! * sum_k (-1)^k (x^2/4)^k / (k! (m+1)_k).
// Safe in long double for x <= max(16, 2 sqrt(m+1)): terms then decay almost
// immediately and cancellation stays below the extended-precision headroom.
long double series_jm(int m, long double x) {
    if (x == 0.0L) return m == 0 ? 1.0L : 0.0L;
    const long double q = 0.25L * x * x;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 400; ++k) {
        term *= -q / (static_cast<long double>(k) * (m + k));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) && k > 4) break;
    }
    long double lp = m * std::log(x * 0.5L) - std::lgamma(static_cast<long double>(m) + 1.0L);
    if (lp < -11000.0L) return 0.0L;
    return std::exp(lp) * sum;
}

bool series_ok(int m, double x) { return x <= 16.0 || x * x <= 4.0 * (m + 1.0); }

bool hankel_ok(int m, double x) { return m <= 8 && x >= 40.0; }

// Hankel asymptotic expansion J_m(x) = sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
// chi = x - (m/2 + 1/4) pi; truncated at the smallest term (far below 1e-16
// for x >= 40, m <= 8).
long double hankel_jm(int m, long double x) {
    const long double mu = 4.0L * m * m;
    long double p = 1.0L, q = 0.0L;
    long double term = 1.0L;
    const long double ix8 = 1.0L / (8.0L * x);
    long double prev = std::numeric_limits<long double>::max();
    for (int k = 1; k < 60; ++k) {
        term *= (mu - (2 * k - 1) * (2 * k - 1)) * ix8 / k;
        if (std::abs(term) >= prev) break;
        prev = std::abs(term);
        if (k % 2 == 1)
            q += (((k - 1) / 2) % 2 == 0) ? term : -term;
        else
            p += ((k / 2) % 2 == 0) ? term : -term;
        if (std::abs(term) < 1e-20L) break;
    }
    const long double chi = x - (0.5L * m + 0.25L) * M_PIl;
    return std::sqrt(2.0L / (M_PIl * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Miller backward recurrence at fixed x: J_0..J_{m_max}, normalized by
// J_0 + 2 J_2 + 2 J_4 + ... = 1. The start order sits past the turning point
// so the arbitrary seeded tail is negligible.
void miller_all(int m_max, long double x, std::vector<long double>& out) {
    const int top = std::max(m_max, static_cast<int>(std::ceil(static_cast<double>(x))));
    const int start = top + 24 + static_cast<int>(16.0 * std::cbrt(static_cast<double>(top) + 1.0));
    out.assign(m_max + 1, 0.0L);
    long double fp = 0.0L;    // f_{n+1}
    long double fn = 1e-300L; // f_n
    long double sum = 0.0L;
    for (int n = start; n >= 1; --n) {
        long double fm = (2.0L * n / x) * fn - fp;
        fp = fn;
        fn = fm;
        if (n - 1 <= m_max) out[n - 1] = fn;
        if (n > 1 && ((n - 1) % 2 == 0)) sum += 2.0L * fn;
        if (std::abs(fn) > 1e280L) {
            fn *= 1e-280L;
            fp *= 1e-280L;
            sum *= 1e-280L;
            for (auto& v : out) v *= 1e-280L;
        }
    }
    sum += fn; // J_0 term
    for (auto& v : out) v /= sum;
}

long double jm_core(int m, long double x) {
    if (series_ok(m, static_cast<double>(x))) return series_jm(m, x);
    if (hankel_ok(m, static_cast<double>(x))) return hankel_jm(m, x);
    std::vector<long double> tmp;
    miller_all(m, x, tmp);
    return tmp[m];
}

struct JPair {
    double j;  // J_m(x)
    double jp; // J_m'(x)
};

// One-pass evaluation of J_m and J_m' (shares the Miller sweep).
JPair jm_pair(int m, double xd) {
    const long double x = xd;
    if (xd == 0.0) return {m == 0 ? 1.0 : 0.0, m == 1 ? 0.5 : 0.0};
    if (series_ok(m + 1, xd)) {
        const long double jm = series_jm(m, x);
        const long double jp = (m == 0) ? -series_jm(1, x)
                                        : 0.5L * (series_jm(m - 1, x) - series_jm(m + 1, x));
        return {static_cast<double>(jm), static_cast<double>(jp)};
    }
    if (hankel_ok(m + 1, xd)) {
        const long double jm = hankel_jm(m, x);
        const long double jp = (m == 0) ? -hankel_jm(1, x)
                                        : 0.5L * (hankel_jm(m - 1, x) - hankel_jm(m + 1, x));
        return {static_cast<double>(jm), static_cast<double>(jp)};
    }
    std::vector<long double> tmp;
    miller_all(m + 1, x, tmp);
    const long double jp = (m == 0) ? -tmp[1] : 0.5L * (tmp[m - 1] - tmp[m + 1]);
    return {static_cast<double>(tmp[m]), static_cast<double>(jp)};
}

// J_m''(x) from the Bessel ODE; used by Newton on J_m'.
double jm_second(int m, double x, double jm, double jmp) {
    if (x == 0.0) {
        if (m == 0) return -0.5;
        if (m == 2) return 0.25;
        return 0.0;
    }
    return -jmp / x - (1.0 - static_cast<double>(m) * m / (x * x)) * jm;
}

struct ZeroProblem {
    int m;
    bool prime; // zeros of J_m' instead of J_m
    double f(double x) const {
        const JPair p = jm_pair(m, x);
        return prime ? p.jp : p.j;
    }
    double df(double x) const {
        const JPair p = jm_pair(m, x);
        return prime ? jm_second(m, x, p.j, p.jp) : p.jp;
    }
};

// Newton clipped to a sign-change bracket, bisection fallback.
double polish_zero(const ZeroProblem& zp, double a, double b, double fa, double fb) {
    double x = 0.5 * (a + b);
    for (int it = 0; it < 80; ++it) {
        const double fx = zp.f(x);
        if (std::abs(fx) < 2e-13) return x;
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        const double dfx = zp.df(x);
        double xn = (dfx != 0.0) ? x - fx / dfx : 0.5 * (a + b);
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
        if (b - a < 1e-15 * std::max(1.0, b)) return 0.5 * (a + b);
        x = xn;
    }
    throw NumericalError("bessel zero refinement did not converge (m=" + std::to_string(zp.m) +
                         (zp.prime ? ", J_m'" : ", J_m") + ")");
}

// McMahon expansions (A&S 9.5.12/9.5.13). With the m = 0 derivative-zero
// convention (0 counted first) the same k indexes both formulas.
double mcmahon_zero(int m, int k) {
    const double mu = 4.0 * static_cast<double>(m) * m;
    const double b = (k + 0.5 * m - 0.25) * M_PI;
    const double b8 = 8.0 * b;
    return b - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
}

double mcmahon_prime_zero(int m, int k) {
    const double mu = 4.0 * static_cast<double>(m) * m;
    const double b = (k + 0.5 * m - 0.75) * M_PI;
    const double b8 = 8.0 * b;
    return b - (mu + 3.0) / b8 - 4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * b8 * b8 * b8);
}

// Sequential zero list: scanning upward from below the first zero makes the
// index k exact by construction. The McMahon guess is used as a jump
// accelerator only where it is trustworthy (k not small against m); the
// bracket is always established by an explicit sign change.
std::vector<double> zeros_up_to_k(int m, int k_max, bool prime) {
    ZeroProblem zp{m, prime};
    std::vector<double> roots;
    roots.reserve(k_max);
    double x = (m == 0) ? 0.3 : std::sqrt(static_cast<double>(m) * (m + 2.0)) * 0.999;
    if (m == 0 && prime) {
        roots.push_back(0.0); // x = 0 counted as the first zero of J_0'
        x = 1.0;
    }
    double fx = zp.f(x);
    if (fx == 0.0) {
        x += 1e-6;
        fx = zp.f(x);
    }
    const double step = 0.5;
    while (static_cast<int>(roots.size()) < k_max) {
        const int k_next = static_cast<int>(roots.size()) + 1;
        // McMahon error ~ m^2/(2 pi (k + m/2)); jump only when it is << gap
        if (k_next >= m) {
            const double guess = prime ? mcmahon_prime_zero(m, k_next) : mcmahon_zero(m, k_next);
            const double xj = guess - 1.5;
            if (xj > x + step && (roots.empty() || xj > roots.back() + 0.3)) {
                const double fj = zp.f(xj);
                if ((fj < 0.0) == (fx < 0.0)) {
                    x = xj;
                    fx = fj;
                }
            }
        }
        double xn = x + step;
        double fn = zp.f(xn);
        int guard = 0;
        while ((fn < 0.0) == (fx < 0.0)) {
            x = xn;
            fx = fn;
            xn = x + step;
            fn = zp.f(xn);
            if (++guard > 400000)
                throw NumericalError("bessel zero scan failed to bracket a sign change");
        }
        roots.push_back(polish_zero(zp, x, xn, fx, fn));
        x = xn;
        fx = fn;
    }
    return roots;
}

} // namespace

double bessel_j(int m, double x) {
    check_range(m, x);
    return static_cast<double>(jm_core(m, static_cast<long double>(x)));
}

double bessel_j_prime(int m, double x) {
    check_range(m, x);
    return jm_pair(m, x).jp;
}

void bessel_j_all(int m_max, double x, std::vector<double>& out) {
    check_range(m_max, x);
    out.resize(m_max + 1);
    if (series_ok(m_max, x)) {
        for (int m = 0; m <= m_max; ++m) out[m] = static_cast<double>(series_jm(m, x));
        return;
    }
    std::vector<long double> tmp;
    miller_all(m_max, static_cast<long double>(x), tmp);
    for (int m = 0; m <= m_max; ++m) out[m] = static_cast<double>(tmp[m]);
}

double bessel_zero(int m, int k) {
    if (k < 1) throw ParameterError("bessel_zero: k must be >= 1");
    check_range(m, 0.0);
    return zeros_up_to_k(m, k, false).back();
}

double bessel_prime_zero(int m, int k) {
    if (k < 1) throw ParameterError("bessel_prime_zero: k must be >= 1");
    check_range(m, 0.0);
    return zeros_up_to_k(m, k, true).back();
}

std::vector<double> bessel_zeros_below(int m, double cap, bool prime) {
    check_range(m, 0.0);
    if (!(cap > 0.0)) throw ParameterError("bessel_zeros_below: cap must be positive");
    std::vector<double> out;
    if (m > 0 && std::sqrt(static_cast<double>(m) * (m + 2.0)) > cap) return out;
    // grow in chunks; the k-th zero is >= (k - 3/4) pi so the count is bounded
    const int k_hint = std::max(1, static_cast<int>(cap / M_PI) + 2);
    std::vector<double> roots = zeros_up_to_k(m, k_hint, prime);
    while (roots.back() <= cap)
        roots = zeros_up_to_k(m, static_cast<int>(roots.size()) + 4, prime);
    for (double r : roots)
        if (r <= cap) out.push_back(r);
    return out;
}

std::size_t BesselZeroTable::idx(int m, int k) const {
    if (m < 0 || m > m_max_ || k < 1 || k > k_max_)
        throw ParameterError("BesselZeroTable: index out of range");
    return static_cast<std::size_t>(m) * k_max_ + (k - 1);
}

BesselZeroTable::BesselZeroTable(int m_max, int k_max) : m_max_(m_max), k_max_(k_max) {
    if (m_max < 0 || k_max < 1) throw ParameterError("BesselZeroTable: bad dimensions");
    j_.resize(static_cast<std::size_t>(m_max + 1) * k_max);
    jp_.resize(j_.size());
    for (int m = 0; m <= m_max; ++m) {
        auto zj = zeros_up_to_k(m, k_max, false);
        auto zp = zeros_up_to_k(m, k_max, true);
        for (int k = 1; k <= k_max; ++k) {
            j_[static_cast<std::size_t>(m) * k_max + (k - 1)] = zj[k - 1];
            jp_[static_cast<std::size_t>(m) * k_max + (k - 1)] = zp[k - 1];
        }
        for (int k = 1; k < k_max; ++k) {
            if (!(zj[k - 1] < zp[k] && zp[k] < zj[k]))
                throw NumericalError("BesselZeroTable: interlacing violated at m=" + std::to_string(m));
        }
        if (m > 0 && !(zp[0] > std::sqrt(static_cast<double>(m) * (m + 2.0))))
            throw NumericalError("BesselZeroTable: j'_{m,1} bound violated at m=" + std::to_string(m));
    }
}

GapReport verify_zero_gaps(const BesselZeroTable& t) {
    GapReport rep;
    const int k_max = t.k_max();
    const double sqrt2 = std::sqrt(2.0);
    for (int m = 1; m <= t.m_max(); ++m) {
        GapMargin best[4] = {{m, 0, 0, "j-jp", sqrt2, 1e300},
                             {m, 0, 0, "jp-j", 1.0, 1e300},
                             {m, 0, 0, "elbert", 0.0, 1e300},
                             {m, 0, 0, "prop", 0.0, 1e300}};
        auto consider = [&](int which, int k, int l, double bound, double margin) {
            if (margin - bound < best[which].value - best[which].bound) {
                best[which].k = k;
                best[which].l = l;
                best[which].bound = bound;
                best[which].value = margin;
            }
        };
        for (int k = 1; k <= k_max; ++k) {
            const double jk = t.zero(m, k);
            rep.max_residual = std::max(rep.max_residual, std::abs(bessel_j(m, jk)));
            rep.max_residual =
                std::max(rep.max_residual, std::abs(bessel_j_prime(m, t.prime_zero(m, k))));
            if (k >= 2) {
                ++rep.checks;
                const double d = jk - t.prime_zero(m, k);
                consider(0, k, k, sqrt2, d);
                if (d < sqrt2) rep.violations.push_back({m, k, k, "j-jp", sqrt2, d});
            }
            if (k + 1 <= k_max) {
                ++rep.checks;
                const double d = t.prime_zero(m, k + 1) - jk;
                consider(1, k, k + 1, 1.0, d);
                if (d < 1.0) rep.violations.push_back({m, k, k + 1, "jp-j", 1.0, d});
                ++rep.checks;
                if (!(jk < t.prime_zero(m, k + 1) && t.prime_zero(m, k + 1) < t.zero(m, k + 1)))
                    rep.violations.push_back({m, k, k + 1, "interlace", 0.0, 0.0});
            }
            for (int l = 1; l <= k_max; ++l) {
                if (l != k) {
                    ++rep.checks;
                    const double d = std::abs(jk - t.zero(m, l));
                    const double bound = M_PI * std::abs(k - l);
                    consider(2, k, l, bound, d);
                    if (!(d > bound)) rep.violations.push_back({m, k, l, "elbert", bound, d});
                }
                ++rep.checks;
                const double d = std::abs(jk - t.prime_zero(m, l));
                const double bound = std::abs(2.0 * k - 2.0 * l + 1.0);
                consider(3, k, l, bound, d);
                if (d < bound) rep.violations.push_back({m, k, l, "prop", bound, d});
            }
        }
        for (const auto& b : best) rep.minima.push_back(b);
    }
    // m = 0: the Proposition only guarantees existence of a constant; measure it.
    double c0 = std::numeric_limits<double>::max();
    for (int k = 1; k <= k_max; ++k) {
        for (int l = 1; l <= k_max; ++l) {
            const double d = std::abs(t.zero(0, k) - t.prime_zero(0, l));
            c0 = std::min(c0, d / std::abs(2.0 * k - 2.0 * l + 1.0));
        }
        rep.max_residual = std::max(rep.max_residual, std::abs(bessel_j(0, t.zero(0, k))));
        rep.max_residual =
            std::max(rep.max_residual, std::abs(bessel_j_prime(0, t.prime_zero(0, k))));
    }
    rep.m0_constant = c0;
    return rep;
}

GapReport verify_zero_gaps(int m_max, int k_max) {
    if (m_max < 1 || k_max < 2)
        throw ParameterError("verify_zero_gaps: need m_max >= 1, k_max >= 2");
    return verify_zero_gaps(BesselZeroTable(m_max, k_max));
}

} // namespace cavitor::specfun
