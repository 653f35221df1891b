#include "cavitor/geometry.hpp"

#include <cmath>
#include <sstream>

#include "cavitor/errors.hpp"

namespace cavitor {

Geometry Geometry::disk() {
    Geometry g;
    g.kind = GeomKind::Disk;
    g.A = 1.0;
    g.B = 2.0 * M_PI;
    return g;
}

Geometry Geometry::square() {
    Geometry g;
    g.kind = GeomKind::Rect;
    g.A = M_PI;
    g.B = M_PI;
    g.a2_over_pi2 = Rational{1, 1};
    g.b2_over_pi2 = Rational{1, 1};
    return g;
}

Geometry Geometry::rect(double A, double B) {
    if (!(A > 0.0 && B > 0.0)) throw ParameterError("rectangle sides must be positive");
    Geometry g;
    g.kind = GeomKind::Rect;
    g.A = A;
    g.B = B;
    return g;
}

Geometry Geometry::rect_exact(double A, double B, Rational a2, Rational b2) {
    Geometry g = rect(A, B);
    g.a2_over_pi2 = a2;
    g.b2_over_pi2 = b2;
    return g;
}

double Geometry::area() const { return is_disk() ? M_PI : A * B; }

std::string Geometry::describe() const {
    if (is_disk()) return "disk";
    if (a2_over_pi2 && b2_over_pi2 && a2_over_pi2->num == 1 && a2_over_pi2->den == 1 &&
        b2_over_pi2->num == 1 && b2_over_pi2->den == 1)
        return "square";
    std::ostringstream os;
    os.precision(17);
    os << "rect " << A << " " << B;
    if (a2_over_pi2 && b2_over_pi2)
        os << " exact " << a2_over_pi2->num << "/" << a2_over_pi2->den << " "
           << b2_over_pi2->num << "/" << b2_over_pi2->den;
    return os.str();
}

Geometry parse_geometry(const std::string& text) {
    std::istringstream is(text);
    std::string head;
    is >> head;
    if (head == "disk") return Geometry::disk();
    if (head == "square") return Geometry::square();
    if (head == "rect") {
        double A, B;
        if (!(is >> A >> B)) throw ParameterError("rect geometry needs two sides: " + text);
        std::string tag;
        if (is >> tag && tag == "exact") {
            char slash;
            Rational ra, rb;
            if (!(is >> ra.num >> slash >> ra.den >> rb.num >> slash >> rb.den))
                throw ParameterError("bad exact rationals in geometry: " + text);
            return Geometry::rect_exact(A, B, ra, rb);
        }
        return Geometry::rect(A, B);
    }
    throw ParameterError("unknown geometry: " + text);
}

std::string DetectorLayout::describe() const {
    std::ostringstream os;
    if (full_boundary) {
        os << "full:" << count;
    } else {
        static const char* names[] = {"bottom", "right", "top", "left"};
        for (std::size_t i = 0; i < sides.size(); ++i)
            os << (i ? "+" : "") << names[static_cast<int>(sides[i])];
        os << ":" << count;
    }
    return os.str();
}

DetectorLayout parse_detectors(const std::string& text) {
    DetectorLayout layout;
    auto pos = text.find(':');
    std::string head = text.substr(0, pos);
    layout.count = (pos == std::string::npos) ? 0 : std::atoi(text.c_str() + pos + 1);
    if (head == "full") {
        layout.full_boundary = true;
        return layout;
    }
    layout.full_boundary = false;
    std::istringstream is(head);
    std::string name;
    while (std::getline(is, name, '+')) {
        if (name == "bottom")
            layout.sides.push_back(Side::Bottom);
        else if (name == "right")
            layout.sides.push_back(Side::Right);
        else if (name == "top")
            layout.sides.push_back(Side::Top);
        else if (name == "left")
            layout.sides.push_back(Side::Left);
        else
            throw ParameterError("unknown detector side: " + name);
    }
    if (layout.sides.empty()) throw ParameterError("empty detector layout: " + text);
    return layout;
}

namespace {

DetectorPosition rect_side_point(const Geometry& g, Side side, double t) {
    // t in [0,1] along the side, oriented counterclockwise
    switch (side) {
        case Side::Bottom: return {t * g.A, 0.0, 0, t * g.A};
        case Side::Right: return {g.A, t * g.B, 1, t * g.B};
        case Side::Top: return {(1.0 - t) * g.A, g.B, 2, (1.0 - t) * g.A};
        case Side::Left: return {0.0, (1.0 - t) * g.B, 3, (1.0 - t) * g.B};
    }
    throw ParameterError("bad side");
}

} // namespace

std::vector<DetectorPosition> detector_positions(const Geometry& g, const DetectorLayout& layout) {
    std::vector<DetectorPosition> out;
    if (g.is_disk()) {
        if (!layout.full_boundary)
            throw ConfigError("disk geometry supports only full-boundary detectors");
        const int n = layout.count > 0 ? layout.count : 1024;
        out.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * i / n;
            out.push_back({std::cos(th), std::sin(th), -1, th});
        }
        return out;
    }
    const int per_side = layout.count > 0 ? layout.count : 256;
    const std::vector<Side> sides = layout.full_boundary
        ? std::vector<Side>{Side::Bottom, Side::Right, Side::Top, Side::Left}
        : layout.sides;
    for (Side s : sides) {
        // corner-to-corner inclusive; on the full boundary drop the last point
        // of each side (it coincides with the next side's first point)
        const int n = per_side;
        for (int i = 0; i < n; ++i) {
            const double t = (n == 1) ? 0.5 : static_cast<double>(i) / (n - 1);
            if (layout.full_boundary && i == n - 1) continue;
            out.push_back(rect_side_point(g, s, t));
        }
    }
    if (!layout.full_boundary) return out;
    return out;
}

} // namespace cavitor
