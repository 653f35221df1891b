#include "cavitor/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cavitor/errors.hpp"

namespace cavitor {

void write_field(const ScalarField2D& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os << "cavitor-field 1\n"
       << "grid " << f.grid.describe() << "\n"
       << "data\n";
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!os) throw ConfigError("write failed: " + path);
}

ScalarField2D read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open field: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("cavitor-field", 0) != 0)
        throw ConfigError("not a cavitor field file: " + path);
    GridSpec grid;
    while (std::getline(is, line) && line != "data") {
        std::istringstream ls(line);
        std::string key, kind;
        ls >> key;
        if (key != "grid") throw ConfigError("unknown field header key: " + key);
        ls >> kind;
        if (kind == "cartesian") {
            int nx, ny;
            double A, B;
            ls >> nx >> ny >> A >> B;
            grid = GridSpec::cartesian(nx, ny, A, B);
        } else if (kind == "polar") {
            int nr, nth;
            ls >> nr >> nth;
            grid = GridSpec::polar(nr, nth);
        } else {
            throw ConfigError("unknown grid kind: " + kind);
        }
    }
    ScalarField2D f(grid);
    is.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (is.gcount() != static_cast<std::streamsize>(f.v.size() * sizeof(double)))
        throw ConfigError("field data block truncated: " + path);
    return f;
}

void write_pgm16(const ScalarField2D& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    double lo = f.v.empty() ? 0.0 : f.v[0], hi = lo;
    for (double v : f.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = (hi > lo) ? hi - lo : 1.0;
    os << "P5\n# cavitor min " << lo << " max " << hi << "\n"
       << f.grid.n2 << " " << f.grid.n1 << "\n65535\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(f.grid.n2) * 2);
    for (int i = 0; i < f.grid.n1; ++i) {
        for (int j = 0; j < f.grid.n2; ++j) {
            const double t = (f.at(i, j) - lo) / span;
            const unsigned v = static_cast<unsigned>(std::lround(t * 65535.0));
            row[2 * j] = static_cast<unsigned char>(v >> 8);
            row[2 * j + 1] = static_cast<unsigned char>(v & 0xff);
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os.precision(17);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
}

Config Config::parse_text(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto ltrim = line.find_first_not_of(" \t\r");
        if (ltrim == std::string::npos) continue;
        auto rtrim = line.find_last_not_of(" \t\r");
        line = line.substr(ltrim, rtrim - ltrim + 1);
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line needs key = value: " + line);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        cfg.kv_[key].push_back(val);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_text(ss.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end() || it->second.empty()) throw ConfigError("missing config key: " + key);
    return it->second.back();
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    try {
        return std::stod(get(key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config key is not a number: " + key);
    }
}

double Config::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int_or(const std::string& key, int fallback) const {
    return has(key) ? static_cast<int>(std::llround(get_double(key))) : fallback;
}

std::vector<std::string> Config::get_all(const std::string& key) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? std::vector<std::string>{} : it->second;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = {value}; }

void Config::set_double(const std::string& key, double value) {
    std::ostringstream os;
    os.precision(17);
    os << value;
    set(key, os.str());
}

std::string Config::serialize() const {
    std::ostringstream os;
    for (const auto& [key, vals] : kv_)
        for (const auto& v : vals) os << key << " = " << v << "\n";
    return os.str();
}

void write_provenance(const Config& resolved, const std::string& dir, double seconds) {
    std::filesystem::create_directories(dir);
    Config cfg = resolved;
    cfg.set("provenance.version", kVersion);
    cfg.set_double("provenance.seconds", seconds);
    std::ofstream os(dir + "/provenance.cfg");
    if (!os) throw ConfigError("cannot write provenance in " + dir);
    os << cfg.serialize();
}

} // namespace cavitor
