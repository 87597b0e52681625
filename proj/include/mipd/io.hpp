#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mipd/topology.hpp"

namespace mipd {

inline constexpr std::string_view kToolVersion = "mipd 0.1.0";

inline constexpr std::string_view kScanHeader = "C,A,theta,d,re_z,im_z,alpha,chi_principal";
inline constexpr std::string_view kCurveHeader = "theta,re_z,im_z,alpha,chi_unwrapped";
inline constexpr std::string_view kCriticalHeader = "A,C_crit,theta_crit,residual";

/// Rows in cell order (A outer, C inner).
std::string scan_csv(const ScanGrid &grid);
/// Rows in increasing θ.
std::string curve_csv(const PhaseCurve &curve);
/// Rows in the given order (continuation order for traced lines).
std::string critical_csv(std::span<const CriticalPoint> points);

std::string sha256_hex(std::string_view data);

/// Provenance for one emitted data file.
struct RunManifest {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json axes = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    std::string started_utc;  // RFC 3339
    std::string output_path;
    std::string output_sha256;

    /// Full manifest, including the timestamp.
    nlohmann::json to_json() const;
    /// SHA-256 of the manifest with the timestamp removed; equal for
    /// identical invocations.
    std::string digest() const;
};

std::string utc_timestamp_now();

/// `grid.csv` → `grid.manifest.json`.
std::filesystem::path manifest_path_for(const std::filesystem::path &data_path);

/// Writes the data file, fills in its path and digest, and writes the
/// companion manifest. Throws IoError naming the path on failure.
RunManifest write_data_file(const std::filesystem::path &path, std::string_view content, RunManifest manifest);

void write_text_file(const std::filesystem::path &path, std::string_view content);
std::string read_text_file(const std::filesystem::path &path);

}  // namespace mipd
