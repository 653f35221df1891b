#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cavitor {

enum class GeomKind { Disk, Rect };

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

/// Cavity domain: the unit disk centered at the origin, or the rectangle
/// (0,A) x (0,B). When A^2/pi^2 and B^2/pi^2 are exact rationals they are
/// carried along so eigenvalue-coincidence detection can use integer
/// arithmetic.
struct Geometry {
    GeomKind kind = GeomKind::Rect;
    double A = 0.0, B = 0.0;
    std::optional<Rational> a2_over_pi2, b2_over_pi2;

    static Geometry disk();
    static Geometry square();                       // (0,pi)^2, exact ratios 1/1
    static Geometry rect(double A, double B);
    static Geometry rect_exact(double A, double B, Rational a2, Rational b2);

    bool is_disk() const { return kind == GeomKind::Disk; }
    double area() const;
    std::string describe() const;   // "disk" | "square" | "rect A B"
};

Geometry parse_geometry(const std::string& text);

/// Boundary sides of a rectangle; Right is x1 = A (the paper's partial-data side).
enum class Side : int { Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct DetectorLayout {
    bool full_boundary = true;
    std::vector<Side> sides;  // used when !full_boundary (rect only)
    int count = 0;            // disk: total; rect: per side
    std::string describe() const;
};

DetectorLayout parse_detectors(const std::string& text); // "full:1024", "right:256", ...

struct DetectorPosition {
    double x, y;   // cartesian coordinates
    int side;      // rect side index; -1 on the disk
    double s;      // boundary parameter: angle on the disk, offset along side on rect
};

/// Detector positions, equispaced by arc length. On a rectangle the per-side
/// chains run corner to corner inclusive (shared corners deduplicated on the
/// full boundary).
std::vector<DetectorPosition> detector_positions(const Geometry& g, const DetectorLayout& layout);

} // namespace cavitor
