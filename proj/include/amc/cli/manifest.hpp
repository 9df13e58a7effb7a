// Run manifest: config echo, digests of the files written, validation summary.
// Linking this header needs libcrypto.
#pragma once

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "amc/errors.hpp"
#include "amc/version.hpp"

namespace amc::cli {

inline std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("sha256: digest failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

inline std::string sha256_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ValidationError("sha256: cannot read " + p.string());
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(data);
}

struct ValidationSummary {
    std::optional<double> max_trace_err;
    std::optional<double> min_eig;
    std::optional<double> invariant_drift;

    void merge(const ValidationSummary& o) {
        auto mx = [](std::optional<double>& a, const std::optional<double>& b) {
            if (b) a = a ? std::max(*a, *b) : *b;
        };
        mx(max_trace_err, o.max_trace_err);
        mx(invariant_drift, o.invariant_drift);
        if (o.min_eig) min_eig = min_eig ? std::min(*min_eig, *o.min_eig) : *o.min_eig;
    }

    // Exact-solver health: trace error below 1e-9, min eigenvalue above -1e-8.
    bool exact_ok() const {
        if (max_trace_err && !(*max_trace_err < 1e-9)) return false;
        if (min_eig && !(*min_eig > -1e-8)) return false;
        return true;
    }
};

class Manifest {
public:
    Manifest(std::string command, nlohmann::json config)
        : command_(std::move(command)), config_(std::move(config)), start_(std::chrono::steady_clock::now()) {}

    void add_file(const std::filesystem::path& p) { files_.push_back(p); }
    ValidationSummary& validation() { return validation_; }
    const ValidationSummary& validation() const { return validation_; }

    nlohmann::json to_json(const std::filesystem::path& base) const {
        nlohmann::json j;
        j["command"] = command_;
        j["config"] = config_;
        j["version"] = std::string(kVersion);
        j["wall_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        j["timestamp"] = utc_now();
        j["files"] = nlohmann::json::array();
        for (const auto& f : files_) {
            j["files"].push_back({{"path", std::filesystem::relative(f, base).generic_string()}, {"sha256", sha256_file(f)}});
        }
        auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
        j["validation"] = {{"max_trace_err", opt(validation_.max_trace_err)},
                           {"min_eig", opt(validation_.min_eig)},
                           {"invariant_drift", opt(validation_.invariant_drift)}};
        return j;
    }

    std::filesystem::path write(const std::filesystem::path& dir, const std::string& name = "manifest.json") const {
        const auto path = dir / name;
        std::ofstream out(path);
        if (!out) throw ValidationError("manifest: cannot write " + path.string());
        out << to_json(dir).dump(2) << '\n';
        return path;
    }

private:
    static std::string utc_now() {
        const std::time_t t = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    std::string command_;
    nlohmann::json config_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::filesystem::path> files_;
    ValidationSummary validation_;
};

}  // namespace amc::cli
