#pragma once

#include <functional>
#include <vector>

namespace cavitor::quad {

struct Rule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n points (Newton on P_n, good to ~1e-15).
Rule gauss_legendre(int n);

/// Nodes/weights mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

struct AdaptiveResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a, b] to absolute tolerance abs_tol.
/// initial_panels splits [a, b] up front; use >= one panel per oscillation for
/// oscillatory integrands. Throws NumericalError if the tolerance is not
/// reached within max_evaluations.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int initial_panels = 1,
                                  int max_evaluations = 2'000'000);

} // namespace cavitor::quad
