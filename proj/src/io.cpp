#include "mipd/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "mipd/csv.hpp"
#include "mipd/error.hpp"

namespace mipd {

std::string scan_csv(const ScanGrid &grid) {
    std::string out(kScanHeader);
    out += '\n';
    const std::string theta = format_real(grid.theta);
    const std::string d = std::to_string(sign(grid.direction));
    for (int ia = 0; ia < grid.asymmetry.count; ia++) {
        for (int ic = 0; ic < grid.strength.count; ic++) {
            const SignalPoint &s = grid.at(ia, ic);
            out += format_real(grid.strength.at(ic)) + ',' + format_real(grid.asymmetry.at(ia)) + ',' + theta + ',' +
                   d + ',' + format_real(s.z.real()) + ',' + format_real(s.z.imag()) + ',' + format_real(s.alpha) +
                   ',' + format_real(s.chi_principal) + '\n';
        }
    }
    return out;
}

std::string curve_csv(const PhaseCurve &curve) {
    std::string out(kCurveHeader);
    out += '\n';
    for (std::size_t i = 0; i < curve.theta.size(); i++) {
        const SignalPoint s = SignalPoint::from_z(curve.z[i]);
        out += format_real(curve.theta[i]) + ',' + format_real(s.z.real()) + ',' + format_real(s.z.imag()) + ',' +
               format_real(s.alpha) + ',' + format_real(curve.chi_unwrapped[i]) + '\n';
    }
    return out;
}

std::string critical_csv(std::span<const CriticalPoint> points) {
    std::string out(kCriticalHeader);
    out += '\n';
    for (const CriticalPoint &p : points) {
        out += format_real(p.asymmetry) + ',' + format_real(p.strength) + ',' + format_real(p.theta) + ',' +
               format_real(p.residual) + '\n';
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; i++) {
        hex.push_back(kHex[md[i] >> 4]);
        hex.push_back(kHex[md[i] & 15]);
    }
    return hex;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["params"] = params;
    j["axes"] = axes;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["started_utc"] = started_utc;
    j["outputs"] = nlohmann::json::array({{{"path", output_path}, {"sha256", output_sha256}}});
    return j;
}

std::string RunManifest::digest() const {
    nlohmann::json j = to_json();
    j.erase("started_utc");
    return sha256_hex(j.dump());
}

std::string utc_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path manifest_path_for(const std::filesystem::path &data_path) {
    std::filesystem::path p = data_path;
    p.replace_extension(".manifest.json");
    return p;
}

void write_text_file(const std::filesystem::path &path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path.string(), "cannot open for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        throw IoError(path.string(), "write failed");
    }
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path.string(), "cannot open for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunManifest write_data_file(const std::filesystem::path &path, std::string_view content, RunManifest manifest) {
    write_text_file(path, content);
    manifest.output_path = path.filename().string();
    manifest.output_sha256 = sha256_hex(content);
    if (manifest.started_utc.empty()) {
        manifest.started_utc = utc_timestamp_now();
    }
    nlohmann::json j = manifest.to_json();
    j["manifest_digest"] = manifest.digest();
    write_text_file(manifest_path_for(path), j.dump(2) + "\n");
    return manifest;
}

}  // namespace mipd
