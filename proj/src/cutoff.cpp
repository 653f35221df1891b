#include "cavitor/cutoff.hpp"

#include <cmath>

#include "cavitor/errors.hpp"

namespace cavitor {

namespace {

// Mollifier quotient phi(x) = g(x)/(g(x)+g(1-x)), g(x) = exp(-1/x); phi(0)=0,
// phi(1)=1, all derivatives vanish at both ends. min(x,1-x) <= 1/2 keeps the
// denominator >= exp(-2), so no 0/0 can occur.
struct Mollifier {
    double phi, dphi, d2phi;
};

Mollifier mollifier(double x) {
    if (x <= 0.0) return {0.0, 0.0, 0.0};
    if (x >= 1.0) return {1.0, 0.0, 0.0};
    const double g = std::exp(-1.0 / x);
    const double h = std::exp(-1.0 / (1.0 - x));
    const double gp = g / (x * x);
    const double hp = h / ((1.0 - x) * (1.0 - x)); // = -d/dx g(1-x)
    const double gpp = g * (1.0 - 2.0 * x) / (x * x * x * x);
    const double hpp = h * (1.0 - 2.0 * (1.0 - x)) / std::pow(1.0 - x, 4);
    const double den = g + h;
    // phi' = (g' h + g h~')/den^2 with h~(x) = g(1-x), h~' = +hp after sign fold
    const double num1 = gp * h + g * hp;
    const double dphi = num1 / (den * den);
    // N = g' h~ - g h~' with h~' = -hp; N' = g'' h~ - g h~'' with h~'' = +hpp
    const double nprime = gpp * h - g * hpp;
    const double dden = gp - hp; // (g + h~)' = g' - hp
    const double d2phi = nprime / (den * den) - 2.0 * num1 * dden / (den * den * den);
    return {g / den, dphi, d2phi};
}

// Quintic smoothstep S(x) = x^3 (10 - 15 x + 6 x^2); S(0)=0, S(1)=1,
// S' = S'' = 0 at both ends.
struct Quintic {
    double s, ds, d2s;
};

Quintic quintic(double x) {
    if (x <= 0.0) return {0.0, 0.0, 0.0};
    if (x >= 1.0) return {1.0, 0.0, 0.0};
    const double x2 = x * x;
    return {x2 * x * (10.0 - 15.0 * x + 6.0 * x2),
            30.0 * x2 * (1.0 - x) * (1.0 - x),
            60.0 * x * (2.0 * x - 1.0) * (x - 1.0)};
}

} // namespace

CutoffProfile::CutoffProfile(CutoffClass cls, double flat_end) : cls_(cls), flat_end_(flat_end) {
    if (!(flat_end > 0.0 && flat_end < 1.0))
        throw ParameterError("cutoff flat_end must lie in (0,1)");
}

CutoffProfile make_cutoff(CutoffClass cls, double flat_end) { return {cls, flat_end}; }

double CutoffProfile::value(double s) const {
    if (s <= flat_end_) return 1.0;
    if (s >= 1.0) return 0.0;
    const double x = (1.0 - s) / (1.0 - flat_end_);
    return cls_ == CutoffClass::Bump ? mollifier(x).phi : quintic(x).s;
}

double CutoffProfile::deriv(double s) const {
    if (s <= flat_end_ || s >= 1.0) return 0.0;
    const double inv = 1.0 / (1.0 - flat_end_);
    const double x = (1.0 - s) * inv;
    return -(cls_ == CutoffClass::Bump ? mollifier(x).dphi : quintic(x).ds) * inv;
}

double CutoffProfile::second_deriv(double s) const {
    if (s <= flat_end_ || s >= 1.0) return 0.0;
    const double inv = 1.0 / (1.0 - flat_end_);
    const double x = (1.0 - s) * inv;
    return (cls_ == CutoffClass::Bump ? mollifier(x).d2phi : quintic(x).d2s) * inv * inv;
}

std::string CutoffProfile::label() const {
    return (cls_ == CutoffClass::Bump ? "bump:" : "poly5:") + std::to_string(flat_end_);
}

CutoffProfile parse_cutoff(const std::string& spec) {
    std::string name = spec;
    double t0 = 0.5;
    if (auto pos = spec.find(':'); pos != std::string::npos) {
        name = spec.substr(0, pos);
        try {
            t0 = std::stod(spec.substr(pos + 1));
        } catch (const std::exception&) {
            throw ParameterError("bad cutoff spec: " + spec);
        }
    }
    if (name == "bump") return {CutoffClass::Bump, t0};
    if (name == "poly5") return {CutoffClass::Poly5, t0};
    throw ParameterError("unknown cutoff class: " + name);
}

DerivativeMaxima cutoff_derivative_maxima(const CutoffProfile& p, int samples) {
    if (samples < 10001) samples = 10001;
    auto refine = [&](auto&& f, double a, double b) {
        for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (f(m1) < f(m2))
                a = m1;
            else
                b = m2;
        }
        return f(0.5 * (a + b));
    };
    double a1 = 0.0, a2 = 0.0;
    int i1 = 0, i2 = 0;
    const double lo = p.flat_end(), hi = 1.0;
    for (int i = 0; i < samples; ++i) {
        const double s = lo + (hi - lo) * i / (samples - 1);
        const double d1 = std::abs(p.deriv(s));
        const double d2 = std::abs(p.second_deriv(s));
        if (d1 > a1) {
            a1 = d1;
            i1 = i;
        }
        if (d2 > a2) {
            a2 = d2;
            i2 = i;
        }
    }
    const double h = (hi - lo) / (samples - 1);
    auto sat = [&](int i) { return std::pair{lo + std::max(0, i - 1) * h, lo + std::min(samples - 1, i + 1) * h}; };
    auto [l1, r1] = sat(i1);
    auto [l2, r2] = sat(i2);
    a1 = std::max(a1, refine([&](double s) { return std::abs(p.deriv(s)); }, l1, r1));
    a2 = std::max(a2, refine([&](double s) { return std::abs(p.second_deriv(s)); }, l2, r2));
    return {a1, a2};
}

} // namespace cavitor
