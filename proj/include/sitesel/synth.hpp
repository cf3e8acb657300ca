#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "sitesel/errors.hpp"
#include "sitesel/export.hpp"
#include "sitesel/geo.hpp"
#include "sitesel/random.hpp"
#include "sitesel/sites.hpp"
#include "sitesel/survey.hpp"

namespace sitesel {

/// How frequency category and visit duration are drawn for synthetic responses.
enum class WeightLaw {
    /// Uniform category, duration uniform in [0, 3] minutes: weights spread over (0.5, 1).
    Spread,
    /// "10 or more" visits of 30 minutes: weight 1 at machine precision.
    Constant,
    /// Zero duration: every weight is 0.5.
    Zero,
};

inline std::optional<WeightLaw> parse_weight_law(std::string_view s) {
    if (s == "spread") return WeightLaw::Spread;
    if (s == "constant") return WeightLaw::Constant;
    if (s == "zero") return WeightLaw::Zero;
    return std::nullopt;
}

struct SynthSpec {
    std::size_t blobs = 4;
    std::size_t per_blob = 25;
    /// Standard deviation of the isotropic offset, km.
    double spread_km = 1.0;
    /// Spacing of the square grid of blob centers, km.
    double separation_km = 20.0;
    WeightLaw law = WeightLaw::Spread;
    std::uint64_t seed = 0;
    Quadrant quadrant = Quadrant::FullOfLifeExciting;
    double origin_lat_deg = 1.30;
    double origin_lon_deg = 103.70;
    EarthModel earth{};
};

/// Survey CSV with `blobs * per_blob` rows. Blob b sits on a square grid `separation_km`
/// apart and is labelled with region b of the default region order (cycled). Members are
/// displaced north/east by N(0, spread_km^2) each, mapped to angles on the sphere.
inline std::string generate_synthetic_csv(const SynthSpec& spec) {
    if (spec.blobs == 0 || spec.per_blob == 0) throw ValidationError("synth: blob count and blob size must be positive");
    if (!(spec.spread_km >= 0.0) || !std::isfinite(spec.spread_km))
        throw ValidationError("synth: spread must be finite and non-negative");
    if (!(spec.separation_km >= 0.0) || !std::isfinite(spec.separation_km))
        throw ValidationError("synth: separation must be finite and non-negative");
    const GeoPoint origin = from_degrees(spec.origin_lat_deg, spec.origin_lon_deg);
    const double radius = spec.earth.radius_km();

    std::size_t columns = 1;
    while (columns * columns < spec.blobs) ++columns;

    const auto regions = default_region_order();
    SplitMix64 rng(spec.seed);
    std::string out = "participant_id,quadrant,region,latitude_deg,longitude_deg,visit_count_category,avg_duration_min\n";
    for (std::size_t b = 0; b < spec.blobs; ++b) {
        const double north = static_cast<double>(b / columns) * spec.separation_km;
        const double east = static_cast<double>(b % columns) * spec.separation_km;
        const double c_lat = origin.lat + north / radius;
        const double c_lon = origin.lon + east / (radius * std::cos(c_lat));
        const std::string& region = regions[b % regions.size()];

        for (std::size_t i = 0; i < spec.per_blob; ++i) {
            double lat = c_lat, lon = c_lon;
            if (spec.spread_km > 0.0) {
                lat += spec.spread_km * rng.normal() / radius;
                lon += spec.spread_km * rng.normal() / (radius * std::cos(c_lat));
            }
            FrequencyCategory cat = FrequencyCategory::TenOrMore;
            double minutes = 30.0;
            switch (spec.law) {
                case WeightLaw::Spread:
                    cat = static_cast<FrequencyCategory>(rng.uniform_index(4));
                    minutes = std::round(rng.uniform01() * 300.0) / 100.0;
                    break;
                case WeightLaw::Constant: break;
                case WeightLaw::Zero: minutes = 0.0; break;
            }
            out += "s" + std::to_string(b) + "_" + std::to_string(i) + "," + quadrant_letter(spec.quadrant) + "," +
                   region + "," + format_fixed(lat * kRadToDeg, 12) + "," +
                   format_fixed(normalize_longitude_deg(lon * kRadToDeg), 12) + "," +
                   std::string(category_label(cat)) + "," + format_fixed(minutes, 2) + "\n";
        }
    }
    return out;
}

}  // namespace sitesel
