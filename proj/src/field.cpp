#include "cavitor/field.hpp"

#include <cmath>
#include <sstream>

#include "cavitor/errors.hpp"

namespace cavitor {

GridSpec GridSpec::cartesian(int nx, int ny, double A, double B) {
    if (nx < 3 || ny < 3) throw ResolutionError("cartesian grid needs at least 3x3 nodes");
    if (!(A > 0 && B > 0)) throw ParameterError("grid extents must be positive");
    return {GridKind::Cartesian, nx, ny, A, B};
}

GridSpec GridSpec::polar(int nr, int ntheta) {
    if (nr < 8 || ntheta < 16) throw ResolutionError("polar grid needs nr >= 8, ntheta >= 16");
    return {GridKind::Polar, nr + 1, ntheta, 1.0, 2.0 * M_PI};
}

void GridSpec::node_xy(int i, int j, double& x, double& y) const {
    if (kind == GridKind::Cartesian) {
        x = i * d1();
        y = j * d2();
    } else {
        const double r = i * d1();
        const double th = j * d2();
        x = r * std::cos(th);
        y = r * std::sin(th);
    }
}

std::string GridSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (kind == GridKind::Cartesian)
        os << "cartesian " << n1 << " " << n2 << " " << A << " " << B;
    else
        os << "polar " << (n1 - 1) << " " << n2;
    return os.str();
}

GridSpec parse_grid(const std::string& text, const Geometry& geom) {
    auto xpos = text.find('x');
    if (xpos == std::string::npos) throw ParameterError("grid spec must look like 128x256");
    const int a = std::atoi(text.substr(0, xpos).c_str());
    const int b = std::atoi(text.substr(xpos + 1).c_str());
    if (geom.is_disk()) return GridSpec::polar(a, b);
    return GridSpec::cartesian(a, b, geom.A, geom.B);
}

double node_weight(const GridSpec& g, int i, int j) {
    if (g.kind == GridKind::Cartesian) {
        const double wx = g.d1() * ((i == 0 || i == g.n1 - 1) ? 0.5 : 1.0);
        const double wy = g.d2() * ((j == 0 || j == g.n2 - 1) ? 0.5 : 1.0);
        return wx * wy;
    }
    (void)j;
    const double r = i * g.d1();
    const double wr = g.d1() * ((i == 0 || i == g.n1 - 1) ? 0.5 : 1.0);
    return r * wr * g.d2() / (i == 0 ? g.n2 : 1.0); // axis row shared by all slots
}

double integrate(const ScalarField2D& f) {
    double acc = 0.0;
    for (int i = 0; i < f.grid.n1; ++i) {
        double row = 0.0;
        for (int j = 0; j < f.grid.n2; ++j) row += node_weight(f.grid, i, j) * f.at(i, j);
        acc += row;
    }
    return acc;
}

} // namespace cavitor
