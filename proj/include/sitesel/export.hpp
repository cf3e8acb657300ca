#pragma once

#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sitesel/clustering.hpp"
#include "sitesel/errors.hpp"
#include "sitesel/model_selection.hpp"
#include "sitesel/sites.hpp"
#include "sitesel/survey.hpp"
#include "sitesel/weighting.hpp"

namespace sitesel {

/// Fixed-point decimal with exactly `decimals` digits after the point.
inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);  // no "-0.000"
    return s;
}

inline constexpr int kGeoJsonDecimals = 12;
inline constexpr int kSiteTableDecimals = 9;

namespace detail {

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

inline void geojson_point(std::string& out, double lon_deg, double lat_deg, const std::string& properties) {
    out += "    {\"type\": \"Feature\", \"geometry\": {\"type\": \"Point\", \"coordinates\": [";
    out += format_fixed(lon_deg, kGeoJsonDecimals);
    out += ", ";
    out += format_fixed(lat_deg, kGeoJsonDecimals);
    out += "]}, \"properties\": {";
    out += properties;
    out += "}}";
}

}  // namespace detail

/// FeatureCollection with one Point per response (role "response"), per center
/// (role "center") and per site (role "site"): n + k + k features in that order.
/// Response and site coordinates are the input degrees; centers are converted from radians.
inline std::string export_geojson(std::span<const WeightedPoint> points, std::span<const SurveyResponse> responses,
                                  const ClusteringResult& result, const SiteReport& sites) {
    if (result.assignment.labels.size() != points.size() || result.centers.size() != result.assignment.k)
        throw ValidationError("export_geojson: clustering result does not match the point list");

    std::string out = "{\n  \"type\": \"FeatureCollection\",\n  \"features\": [\n";
    bool first = true;
    auto next = [&] {
        if (!first) out += ",\n";
        first = false;
    };

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& wp = points[i];
        if (wp.source_index >= responses.size()) throw ValidationError("export_geojson: source index out of range");
        const auto& r = responses[wp.source_index];
        std::string props = "\"role\": \"response\", \"cluster\": " + std::to_string(result.assignment.labels[i]) +
                            ", \"weight\": " + format_fixed(wp.weight, kGeoJsonDecimals) +
                            ", \"source_row\": " + std::to_string(r.source_row) +
                            ", \"participant_id\": " + detail::json_string(r.participant_id) +
                            ", \"region\": " + detail::json_string(r.region);
        next();
        detail::geojson_point(out, r.lon_deg, r.lat_deg, props);
    }
    for (std::size_t c = 0; c < result.centers.size(); ++c) {
        next();
        detail::geojson_point(out, lon_degrees(result.centers[c]), lat_degrees(result.centers[c]),
                              "\"role\": \"center\", \"cluster\": " + std::to_string(c));
    }
    for (const auto& s : sites.sites) {
        std::string props = "\"role\": \"site\", \"site_id\": " + detail::json_string(s.site_id) +
                            ", \"cluster\": " + std::to_string(s.cluster) +
                            ", \"region\": " + detail::json_string(s.region) +
                            ", \"source_row\": " + std::to_string(s.source_row) +
                            ", \"distance_to_center_km\": " + format_fixed(s.distance_to_center_km, kGeoJsonDecimals);
        next();
        detail::geojson_point(out, s.lon_deg, s.lat_deg, props);
    }
    out += "\n  ]\n}\n";
    return out;
}

/// ID,Region,Latitude_deg,Longitude_deg,SourceRow with 9-decimal coordinates.
inline std::string export_site_table(const SiteReport& sites) {
    std::string out = "ID,Region,Latitude_deg,Longitude_deg,SourceRow\n";
    for (const auto& s : sites.sites) {
        out += csv_escape(s.site_id) + "," + csv_escape(s.region) + "," + format_fixed(s.lat_deg, kSiteTableDecimals) +
               "," + format_fixed(s.lon_deg, kSiteTableDecimals) + "," + std::to_string(s.source_row) + "\n";
    }
    return out;
}

/// Per-response weight table.
inline std::string export_weight_table(std::span<const SurveyResponse> responses) {
    std::string out =
        "SourceRow,ParticipantID,Quadrant,Region,Latitude_deg,Longitude_deg,FrequencyWeight,AvgDuration_min,Weight\n";
    for (const auto& r : responses) {
        const int f = frequency_weight(r.visit_count_category);
        out += std::to_string(r.source_row) + "," + csv_escape(r.participant_id) + "," + quadrant_letter(r.quadrant) +
               "," + csv_escape(r.region) + "," + format_fixed(r.lat_deg, kSiteTableDecimals) + "," +
               format_fixed(r.lon_deg, kSiteTableDecimals) + "," + std::to_string(f) + "," +
               format_fixed(r.avg_duration_min, 6) + "," +
               format_fixed(reliability_weight(f, r.avg_duration_min), 12) + "\n";
    }
    return out;
}

/// Best Dunn index per k, the data behind a "max Dunn vs k" plot.
inline std::string export_dunn_curve(const SweepResult& sweep) {
    std::string out = "k,BestDunn,MinInter_km,MaxIntra_km,BestRun,Seed,DegenerateRuns,Optimal\n";
    for (const auto& e : sweep.per_k) {
        out += std::to_string(e.k) + ",";
        if (e.scored()) {
            out += format_fixed(e.dunn->value, 12) + "," + format_fixed(e.dunn->min_inter_km, 9) + "," +
                   format_fixed(e.dunn->max_intra_km, 9) + "," + std::to_string(e.best_run) + "," +
                   std::to_string(e.result->seed);
        } else {
            out += ",,,,";
        }
        out += "," + std::to_string(e.degenerate_runs) + "," + (e.k == sweep.optimal_k ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace sitesel
