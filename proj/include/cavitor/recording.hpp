#pragma once

#include <string>
#include <vector>

#include "cavitor/geometry.hpp"

namespace cavitor {

/// Detector x time pressure samples U[i][j] = u(j dt, z_i) on Sigma_1.
struct BoundaryRecording {
    Geometry geom;
    DetectorLayout layout;
    std::vector<DetectorPosition> detectors;
    double dt = 0.0;
    double T = 0.0;       // duration; samples cover [0, T]
    int n_samples = 0;    // per detector
    std::vector<double> U; // row-major [detector][sample]

    int n_detectors() const { return static_cast<int>(detectors.size()); }
    double sample(int det, int j) const { return U[static_cast<std::size_t>(det) * n_samples + j]; }
    double& sample(int det, int j) { return U[static_cast<std::size_t>(det) * n_samples + j]; }
};

/// File format: text header lines then a little-endian float64 row-major block:
///   cavitor-recording 1
///   geometry <...>
///   detectors <layout>
///   n_detectors N
///   dt <dt>
///   T <T>
///   n_samples M
///   data
void write_recording(const BoundaryRecording& rec, const std::string& path);
BoundaryRecording read_recording(const std::string& path);
void write_recording_csv(const BoundaryRecording& rec, const std::string& path);

/// Adds white Gaussian noise (sigma in absolute pressure units). Plumbing for
/// robustness experiments; never enabled by default.
void add_gaussian_noise(BoundaryRecording& rec, double sigma, std::uint64_t seed);

} // namespace cavitor
