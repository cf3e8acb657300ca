#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "sitesel/errors.hpp"

namespace sitesel {

inline constexpr std::string_view kToolName = "sitesel";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Lowercase hex SHA-256 of `bytes`.
inline std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw std::runtime_error("sha256 computation failed");
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        char byte[3];
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

struct QuadrantSummary {
    char letter = 'A';
    std::size_t n_points = 0;
    double auc = 0.0;
    std::optional<std::size_t> k_min;
    std::optional<std::size_t> k_max;
    std::optional<std::size_t> optimal_k;
    std::optional<double> best_dunn;
    std::optional<std::uint64_t> best_seed;
    std::optional<bool> converged;
};

/// Everything needed to reproduce a run's numeric outputs from its input file.
struct RunManifest {
    std::string command;
    std::string input_sha256;
    std::uint64_t base_seed = 0;
    std::size_t k_min = 0;
    /// Empty when each quadrant used floor(sqrt(n)).
    std::optional<std::size_t> k_max;
    std::size_t runs_per_k = 0;
    std::size_t max_iterations = 0;
    double earth_radius_km = 0.0;
    bool strict = false;
    std::vector<std::string> region_order;
    std::size_t accepted_rows = 0;
    std::size_t skipped_rows = 0;
    std::vector<QuadrantSummary> quadrants;
};

inline std::string manifest_to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = m.command;
    j["input_sha256"] = m.input_sha256;
    j["base_seed"] = m.base_seed;
    j["k_min"] = m.k_min;
    if (m.k_max) j["k_max"] = *m.k_max;
    else j["k_max"] = nullptr;
    j["runs_per_k"] = m.runs_per_k;
    j["max_iterations"] = m.max_iterations;
    j["earth_radius_km"] = m.earth_radius_km;
    j["strict"] = m.strict;
    j["region_order"] = m.region_order;
    j["accepted_rows"] = m.accepted_rows;
    j["skipped_rows"] = m.skipped_rows;
    auto& qs = j["quadrants"] = nlohmann::ordered_json::array();
    for (const auto& q : m.quadrants) {
        nlohmann::ordered_json e;
        e["quadrant"] = std::string(1, q.letter);
        e["n_points"] = q.n_points;
        e["auc"] = q.auc;
        if (q.k_min) e["k_min"] = *q.k_min;
        if (q.k_max) e["k_max"] = *q.k_max;
        if (q.optimal_k) e["optimal_k"] = *q.optimal_k;
        if (q.best_dunn) e["best_dunn"] = *q.best_dunn;
        if (q.best_seed) e["best_seed"] = *q.best_seed;
        if (q.converged) e["converged"] = *q.converged;
        qs.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

}  // namespace sitesel
