#pragma once

#include <map>
#include <string>
#include <vector>

#include "cavitor/field.hpp"

namespace cavitor {

/// Field file: text header then little-endian float64 row-major block:
///   cavitor-field 1
///   grid cartesian NX NY A B   (or: grid polar NR NTHETA)
///   data
void write_field(const ScalarField2D& f, const std::string& path);
ScalarField2D read_field(const std::string& path);

/// 16-bit PGM with linear min-max scaling; the scale is recorded in a comment.
void write_pgm16(const ScalarField2D& f, const std::string& path);

/// CSV writer: header row then value rows, 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Flat key-value configuration with [section] blocks mapping to dotted keys;
/// '#' starts a comment; repeated keys accumulate.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const; // throws ConfigError if missing
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    int get_int_or(const std::string& key, int fallback) const;
    std::vector<std::string> get_all(const std::string& key) const;

    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value);
    std::string serialize() const; // stable order, re-parseable

private:
    std::map<std::string, std::vector<std::string>> kv_;
};

/// Provenance = the resolved run configuration echoed with code version and
/// timing; the file is itself a valid Config and can be re-run.
void write_provenance(const Config& resolved, const std::string& dir, double seconds);

inline constexpr const char* kVersion = "cavitor 0.1.0";

} // namespace cavitor
