#pragma once

#include <string>
#include <vector>

namespace cavitor::specfun {

inline constexpr int kMaxOrder = 200;
inline constexpr double kMaxArgument = 1.0e4;

/// J_m(x) for integer m in [0, 200], x in [0, 1e4].
/// Power series for small x, Hankel asymptotics for large x with small m,
/// Miller backward recurrence elsewhere; all accumulation in long double.
double bessel_j(int m, double x);

/// J_m'(x) via the recurrence J_m' = (J_{m-1} - J_{m+1})/2 (J_0' = -J_1).
double bessel_j_prime(int m, double x);

/// Fills out[0..m_max] = J_0(x)..J_{m_max}(x) in one pass.
void bessel_j_all(int m_max, double x, std::vector<double>& out);

/// k-th positive zero of J_m (k >= 1), |J_m(root)| <= 1e-10.
double bessel_zero(int m, int k);

/// k-th zero of J_m' with the convention that x = 0 is the first zero for
/// m = 0 (so bessel_prime_zero(0, 1) == 0) and is not counted for m > 0.
double bessel_prime_zero(int m, int k);

/// All zeros of J_m (or J_m' when prime) that are <= cap, ascending,
/// following the same m = 0 derivative-zero convention.
std::vector<double> bessel_zeros_below(int m, double cap, bool prime);

/// Zeros j[m][k] and jp[m][k] for m <= m_max, k <= k_max (1-based k).
/// Immutable after construction; safe for concurrent reads.
class BesselZeroTable {
public:
    BesselZeroTable(int m_max, int k_max);

    int m_max() const { return m_max_; }
    int k_max() const { return k_max_; }
    double zero(int m, int k) const { return j_[idx(m, k)]; }
    double prime_zero(int m, int k) const { return jp_[idx(m, k)]; }

private:
    std::size_t idx(int m, int k) const;
    int m_max_, k_max_;
    std::vector<double> j_, jp_;
};

struct GapViolation {
    int m, k, l;
    std::string quantity; // "interlace", "j-jp", "jp-j", "elbert", "prop"
    double bound, value;
};

struct GapMargin {
    int m, k, l;
    std::string quantity;
    double bound, value; // tightest instance of the inequality for this m
};

struct GapReport {
    long checks = 0;
    std::vector<GapViolation> violations;
    std::vector<GapMargin> minima;  // per (m, quantity) minimal-margin rows
    double m0_constant = 0.0;       // measured min |j_{0,k}-j'_{0,l}|/|2k-2l+1|
    double max_residual = 0.0;      // max |J_m| resp. |J_m'| over all tabulated roots
};

/// Verifies, over 1 <= m <= m_max and k, l <= k_max:
///   interlacing j[k] < jp[k+1] < j[k+1],
///   j[k] - jp[k] >= sqrt(2) for k >= 2,
///   jp[k+1] - j[k] >= 1,
///   |j[k] - j[l]| > pi |k-l| for k != l,
///   |j[k] - jp[l]| >= |2k - 2l + 1|,
/// and measures the minimal m = 0 constant for the last inequality.
GapReport verify_zero_gaps(int m_max, int k_max);
GapReport verify_zero_gaps(const BesselZeroTable& table);

} // namespace cavitor::specfun
