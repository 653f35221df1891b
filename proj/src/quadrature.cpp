#include "cavitor/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "cavitor/errors.hpp"

namespace cavitor::quad {

Rule gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n(x).
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

Rule gauss_legendre(int n, double a, double b) {
    Rule r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

namespace {

// Gauss 7 / Kronrod 15 abscissae and weights (symmetric half, node >= 0).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double value;
    double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double fc = f(mid);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        resk += kWgk[i] * fsum;
        if (i % 2 == 1) resg += kWg[i / 2] * fsum;
    }
    return {resk * half, std::abs((resk - resg) * half)};
}

struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

} // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int initial_panels, int max_evaluations) {
    initial_panels = std::max(1, initial_panels);
    std::priority_queue<Segment> queue;
    AdaptiveResult res;
    double total = 0.0, total_err = 0.0;
    const double w = (b - a) / initial_panels;
    for (int p = 0; p < initial_panels; ++p) {
        const double pa = a + p * w, pb = (p + 1 == initial_panels) ? b : a + (p + 1) * w;
        auto r = gk15(f, pa, pb);
        res.evaluations += 15;
        total += r.value;
        total_err += r.err;
        queue.push({pa, pb, r.value, r.err});
    }
    while (total_err > abs_tol && !queue.empty()) {
        if (res.evaluations > max_evaluations)
            throw NumericalError("adaptive quadrature: tolerance unreachable within node cap");
        Segment s = queue.top();
        queue.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (mid <= s.a || mid >= s.b) continue; // interval exhausted by rounding
        auto r1 = gk15(f, s.a, mid);
        auto r2 = gk15(f, mid, s.b);
        res.evaluations += 30;
        total += r1.value + r2.value - s.value;
        total_err += r1.err + r2.err - s.err;
        queue.push({s.a, mid, r1.value, r1.err});
        queue.push({mid, s.b, r2.value, r2.err});
    }
    res.value = total;
    res.error_estimate = total_err;
    return res;
}

} // namespace cavitor::quad
