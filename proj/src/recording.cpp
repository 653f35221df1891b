#include "cavitor/recording.hpp"

#include <bit>
#include <fstream>
#include <random>
#include <sstream>

#include "cavitor/errors.hpp"

namespace cavitor {

static_assert(std::endian::native == std::endian::little,
              "recording/field binary blocks assume a little-endian host");

void write_recording(const BoundaryRecording& rec, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os.precision(17);
    os << "cavitor-recording 1\n"
       << "geometry " << rec.geom.describe() << "\n"
       << "detectors " << rec.layout.describe() << "\n"
       << "n_detectors " << rec.n_detectors() << "\n"
       << "dt " << rec.dt << "\n"
       << "T " << rec.T << "\n"
       << "n_samples " << rec.n_samples << "\n"
       << "data\n";
    os.write(reinterpret_cast<const char*>(rec.U.data()),
             static_cast<std::streamsize>(rec.U.size() * sizeof(double)));
    if (!os) throw ConfigError("write failed: " + path);
}

BoundaryRecording read_recording(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open recording: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("cavitor-recording", 0) != 0)
        throw ConfigError("not a cavitor recording: " + path);
    BoundaryRecording rec;
    int n_det = 0;
    while (std::getline(is, line) && line != "data") {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string rest = line.size() > key.size() ? line.substr(key.size() + 1) : "";
        if (key == "geometry")
            rec.geom = parse_geometry(rest);
        else if (key == "detectors")
            rec.layout = parse_detectors(rest);
        else if (key == "n_detectors")
            ls >> n_det;
        else if (key == "dt")
            ls >> rec.dt;
        else if (key == "T")
            ls >> rec.T;
        else if (key == "n_samples")
            ls >> rec.n_samples;
        else
            throw ConfigError("unknown recording header key: " + key);
    }
    rec.detectors = detector_positions(rec.geom, rec.layout);
    if (n_det != rec.n_detectors())
        throw ConfigError("recording header inconsistent with detector layout");
    rec.U.resize(static_cast<std::size_t>(n_det) * rec.n_samples);
    is.read(reinterpret_cast<char*>(rec.U.data()),
            static_cast<std::streamsize>(rec.U.size() * sizeof(double)));
    if (is.gcount() != static_cast<std::streamsize>(rec.U.size() * sizeof(double)))
        throw ConfigError("recording data block truncated: " + path);
    return rec;
}

void write_recording_csv(const BoundaryRecording& rec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os.precision(17);
    os << "t";
    for (int d = 0; d < rec.n_detectors(); ++d) os << ",det" << d;
    os << "\n";
    for (int j = 0; j < rec.n_samples; ++j) {
        os << j * rec.dt;
        for (int d = 0; d < rec.n_detectors(); ++d) os << "," << rec.sample(d, j);
        os << "\n";
    }
}

void add_gaussian_noise(BoundaryRecording& rec, double sigma, std::uint64_t seed) {
    if (sigma <= 0.0) return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, sigma);
    for (auto& u : rec.U) u += n(rng);
}

} // namespace cavitor
