#include "cavitor/phantom.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cavitor/basis.hpp"
#include "cavitor/errors.hpp"

namespace cavitor {

std::string PhantomSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::Eigenmode: os << "eigen:" << mode_i1 << "," << mode_i2; break;
        case Kind::BumpSum:
            os << "bumps";
            for (const auto& b : bumps)
                os << " " << b.cx << " " << b.cy << " " << b.radius << " " << b.amplitude << " "
                   << b.smoothness;
            break;
        case Kind::File: os << "file:" << path; break;
    }
    return os.str();
}

double eval_phantom(const PhantomSpec& spec, double x, double y) {
    switch (spec.kind) {
        case PhantomSpec::Kind::Eigenmode: {
            EigenMode m;
            m.geom = spec.geom.kind;
            m.bc = BcKind::Neumann;
            m.i1 = spec.mode_i1;
            m.i2 = spec.mode_i2;
            if (spec.geom.is_disk())
                throw ConfigError("eigenmode phantoms are provided on rectangles only");
            m.eigenvalue = std::hypot(spec.mode_i1 * M_PI / spec.geom.A,
                                      spec.mode_i2 * M_PI / spec.geom.B);
            m.norm_const = std::sqrt((spec.mode_i1 == 0 ? 1.0 : 2.0) *
                                     (spec.mode_i2 == 0 ? 1.0 : 2.0) /
                                     (spec.geom.A * spec.geom.B));
            return eval_mode(m, spec.geom, x, y);
        }
        case PhantomSpec::Kind::BumpSum: {
            double v = 0.0;
            for (const auto& b : spec.bumps) {
                const double d2 = ((x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy)) /
                                  (b.radius * b.radius);
                if (d2 < 1.0) v += b.amplitude * std::pow(1.0 - d2, b.smoothness);
            }
            return v;
        }
        case PhantomSpec::Kind::File:
            throw ConfigError("file phantom must be loaded before evaluation");
    }
    return 0.0;
}

namespace {

void check_support(const PhantomSpec& spec, const GridSpec& grid) {
    const double margin = 2.0 * std::max(grid.d1(), grid.kind == GridKind::Polar
                                                        ? grid.d1() // radial cell
                                                        : grid.d2());
    for (const auto& b : spec.bumps) {
        bool ok;
        if (spec.geom.is_disk()) {
            ok = std::hypot(b.cx, b.cy) + b.radius + margin <= 1.0;
        } else {
            ok = b.cx - b.radius >= margin && b.cx + b.radius + margin <= spec.geom.A &&
                 b.cy - b.radius >= margin && b.cy + b.radius + margin <= spec.geom.B;
        }
        if (!ok)
            throw ParameterError("bump support touches the boundary (margin >= 2 cells required)");
    }
}

} // namespace

ScalarField2D render(const PhantomSpec& spec, const GridSpec& grid) {
    if (spec.kind == PhantomSpec::Kind::File)
        throw ConfigError("load file phantoms with read_phantom_file before rendering");
    if (spec.kind == PhantomSpec::Kind::BumpSum) {
        check_support(spec, grid);
    } else {
        std::cerr << "[cavitor] note: eigenmode phantom touches the boundary "
                     "(admitted, zero normal derivative)\n";
    }
    ScalarField2D f(grid);
    for (int i = 0; i < grid.n1; ++i) {
        for (int j = 0; j < grid.n2; ++j) {
            double x, y;
            grid.node_xy(i, j, x, y);
            f.at(i, j) = eval_phantom(spec, x, y);
        }
    }
    return f;
}

PhantomSpec three_bump_default(const Geometry& g) {
    PhantomSpec spec;
    spec.kind = PhantomSpec::Kind::BumpSum;
    spec.geom = g;
    const double base_c[3][2] = {{0.0, 0.35}, {-0.3, -0.2}, {0.3, -0.2}};
    const double base_a[3] = {1.0, 0.8, 0.6};
    if (g.is_disk()) {
        for (int i = 0; i < 3; ++i)
            spec.bumps.push_back({base_c[i][0], base_c[i][1], 0.25, base_a[i], 3});
    } else {
        // affine map of the disk layout into the rectangle interior
        const double s = 0.45 * std::min(g.A, g.B);
        const double mx = 0.5 * g.A, my = 0.5 * g.B;
        for (int i = 0; i < 3; ++i)
            spec.bumps.push_back(
                {mx + s * base_c[i][0] * 1.4142135623730951, my + s * base_c[i][1] * 1.4142135623730951,
                 0.25 * s * 1.4142135623730951, base_a[i], 3});
    }
    return spec;
}

PhantomSpec parse_phantom(const std::string& text, const Geometry& g) {
    if (text == "three-bump") return three_bump_default(g);
    if (text.rfind("eigen:", 0) == 0) {
        PhantomSpec spec;
        spec.kind = PhantomSpec::Kind::Eigenmode;
        spec.geom = g;
        if (std::sscanf(text.c_str() + 6, "%d,%d", &spec.mode_i1, &spec.mode_i2) != 2)
            throw ParameterError("bad eigenmode phantom spec: " + text);
        return spec;
    }
    if (text.rfind("file:", 0) == 0) return read_phantom_file(text.substr(5), g);
    return read_phantom_file(text, g);
}

PhantomSpec read_phantom_file(const std::string& path, const Geometry& g) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open phantom file: " + path);
    PhantomSpec spec;
    spec.geom = g;
    spec.kind = PhantomSpec::Kind::BumpSum;
    std::string line;
    bool saw_kind = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key, eq;
        ls >> key >> eq;
        if (eq != "=") throw ConfigError("phantom file lines must be 'key = value': " + line);
        if (key == "kind") {
            std::string v;
            ls >> v;
            saw_kind = true;
            if (v == "eigenmode")
                spec.kind = PhantomSpec::Kind::Eigenmode;
            else if (v == "bumps" || v == "bump_sum")
                spec.kind = PhantomSpec::Kind::BumpSum;
            else
                throw ConfigError("unknown phantom kind: " + v);
        } else if (key == "mode") {
            char comma;
            ls >> spec.mode_i1 >> comma >> spec.mode_i2;
        } else if (key == "bump") {
            BumpSpec b;
            if (!(ls >> b.cx >> b.cy >> b.radius >> b.amplitude)) {
                throw ConfigError("bump needs: cx cy radius amplitude [smoothness]");
            }
            if (!(ls >> b.smoothness)) b.smoothness = 3;
            spec.bumps.push_back(b);
        } else {
            throw ConfigError("unknown phantom key: " + key);
        }
    }
    if (!saw_kind) throw ConfigError("phantom file missing 'kind': " + path);
    return spec;
}

void write_phantom_file(const PhantomSpec& spec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os.precision(17);
    if (spec.kind == PhantomSpec::Kind::Eigenmode) {
        os << "kind = eigenmode\n"
           << "mode = " << spec.mode_i1 << "," << spec.mode_i2 << "\n";
        return;
    }
    os << "kind = bumps\n";
    for (const auto& b : spec.bumps)
        os << "bump = " << b.cx << " " << b.cy << " " << b.radius << " " << b.amplitude << " "
           << b.smoothness << "\n";
}

} // namespace cavitor
