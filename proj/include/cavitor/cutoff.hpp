#pragma once

#include <string>

namespace cavitor {

enum class CutoffClass { Bump, Poly5 };

/// Smooth taper alpha on [0,1]: identically 1 on [0, flat_end], decreasing to
/// alpha(1) = 0. The Bump class vanishes at 1 with all derivatives (mollifier
/// quotient); Poly5 is the quintic smoothstep (C^2, alpha' = alpha'' = 0 at
/// both junctions). Immutable; concurrent evaluation is safe.
class CutoffProfile {
public:
    CutoffProfile(CutoffClass cls, double flat_end);

    double value(double s) const;        // alpha(s), clamped outside [0,1]
    double deriv(double s) const;        // alpha'(s)
    double second_deriv(double s) const; // alpha''(s)

    CutoffClass cutoff_class() const { return cls_; }
    double flat_end() const { return flat_end_; }
    std::string label() const;

private:
    CutoffClass cls_;
    double flat_end_;
};

CutoffProfile make_cutoff(CutoffClass cls, double flat_end);

/// Parses "bump:0.5" / "poly5:0.3"; plain "bump" defaults flat_end = 0.5.
CutoffProfile parse_cutoff(const std::string& spec);

struct DerivativeMaxima {
    double a1; // max |alpha'|
    double a2; // max |alpha''|
};

/// Dense sampling (>= 1e4 points) with local ternary refinement.
DerivativeMaxima cutoff_derivative_maxima(const CutoffProfile& profile, int samples = 20001);

} // namespace cavitor
