#pragma once

#include <memory>
#include <vector>

#include "cavitor/geometry.hpp"
#include "cavitor/specfun.hpp"

namespace cavitor {

enum class BcKind { Neumann, Dirichlet, MixedRightDirichlet };

BcKind parse_bc(const std::string& text);
std::string bc_name(BcKind bc);

/// One normalized eigenfunction of the weighted Laplacian (c = 1 on these
/// domains, so the weight is plain L2).
///
/// Rect Neumann:   N cos(i1 pi x/A) cos(i2 pi y/B),          eig^2 = (i1 pi/A)^2 + (i2 pi/B)^2
/// Rect Dirichlet: N sin(i1 pi x/A) sin(i2 pi y/B),  i1,i2 >= 1
/// Rect MixedRightDirichlet: N cos((i1+1/2) pi x/A) cos(i2 pi y/B)
/// Disk Neumann:   N J_{i2}(eig r) {cos,sin}(i2 th), eig = j'_{i2 zero}, (1,0) is the constant mode
/// Disk Dirichlet: N J_{i2}(eig r) {cos,sin}(i2 th), eig = j zero
struct EigenMode {
    GeomKind geom = GeomKind::Rect;
    BcKind bc = BcKind::Neumann;
    int i1 = 0;      // radial (disk, 1-based) or x index
    int i2 = 0;      // angular (disk) or y index
    int parity = 0;  // disk angular factor: 0 = cos, 1 = sin
    double eigenvalue = 0.0;   // sqrt of Laplacian eigenvalue
    double norm_const = 0.0;
};

/// Modes with eigenvalue <= cap, sorted by (eigenvalue, i1, i2, parity).
/// Immutable after enumeration; evaluation and coupling are concurrency-safe.
struct ModeSet {
    Geometry geom;
    BcKind bc = BcKind::Neumann;
    double cap = 0.0;
    std::vector<EigenMode> modes;

    int size() const { return static_cast<int>(modes.size()); }
};

ModeSet enumerate_modes(const Geometry& g, BcKind bc, double eigenvalue_cap);

/// Pointwise value at a cartesian point inside the closure of the domain.
double eval_mode(const EigenMode& mode, const Geometry& g, double x, double y);

/// Weighted L2 inner product of two modes of the same geometry. Rectangles use
/// closed-form separable integrals; the disk uses Gauss-Legendre radial
/// quadrature with >= 4 points per oscillation.
double coupling(const EigenMode& a, const EigenMode& b, const Geometry& g);

struct CoincidenceRecord {
    EigenMode neumann;
    EigenMode reversal;
    double shared_eigenvalue = 0.0;
    double coupling = 0.0;
};

/// All pairs with |lambda - nu| <= tol (coupling attached, possibly 0).
/// When both squared-side ratios of a rectangle are exact rationals the
/// comparison is exact in 64-bit integers and tol is ignored there.
std::vector<CoincidenceRecord> detect_coincidences(const ModeSet& neumann,
                                                   const ModeSet& reversal, double tol);

} // namespace cavitor
