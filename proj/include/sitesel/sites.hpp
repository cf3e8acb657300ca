#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sitesel/clustering.hpp"
#include "sitesel/errors.hpp"
#include "sitesel/geo.hpp"

namespace sitesel {

/// The member of a cluster nearest its center.
struct Representative {
    std::size_t cluster = 0;
    std::size_t point_index = 0;
    double distance_km = 0.0;
};

/// For each cluster, the member point with the smallest unweighted distance to the
/// cluster center (lowest point index on ties). The result is always an input point.
template <DistanceMetric Metric>
std::vector<Representative> select_representatives(std::span<const GeoPoint> points,
                                                   const ClusterAssignment& assignment,
                                                   std::span<const GeoPoint> centers, const Metric& metric) {
    if (assignment.labels.size() != points.size() || centers.size() != assignment.k)
        throw ValidationError("select_representatives: inconsistent shapes");

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<Representative> reps(assignment.k);
    std::vector<double> best(assignment.k, std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < assignment.k; ++c) reps[c] = Representative{c, kNone, 0.0};

    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t c = assignment.labels[i];
        if (c >= assignment.k) throw ValidationError("select_representatives: label out of range");
        const double d = metric(points[i], centers[c]);
        if (d < best[c]) {
            best[c] = d;
            reps[c].point_index = i;
            reps[c].distance_km = d;
        }
    }
    for (const auto& r : reps)
        if (r.point_index == kNone) throw EmptyClusterError("select_representatives: cluster has no members");
    return reps;
}

/// Provenance for one point: where it came from and how it is labelled.
struct SiteSource {
    std::string region = "UNKNOWN";
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    std::size_t source_row = 0;
};

struct SiteRecord {
    std::string site_id;
    std::size_t cluster = 0;
    std::size_t point_index = 0;
    std::string region;
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    std::size_t source_row = 0;
    double distance_to_center_km = 0.0;
};

struct SiteReport {
    char quadrant_letter = 'A';
    std::vector<SiteRecord> sites;
};

inline std::vector<std::string> default_region_order() {
    return {"CBD", "East", "Central", "North", "North-east", "West"};
}

/// Numbers representatives `<letter>01, <letter>02, ...` after sorting by region (position
/// in `region_order`, unlisted regions after it alphabetically) then latitude ascending.
inline SiteReport assign_site_ids(std::span<const Representative> reps, char quadrant_letter,
                                  const std::function<SiteSource(std::size_t point_index)>& source_of,
                                  std::span<const std::string> region_order) {
    if (quadrant_letter < 'A' || quadrant_letter > 'D')
        throw ValidationError(std::string("quadrant letter must be A-D, got '") + quadrant_letter + "'");

    SiteReport report;
    report.quadrant_letter = quadrant_letter;
    for (const auto& rep : reps) {
        SiteSource src = source_of(rep.point_index);
        report.sites.push_back(SiteRecord{"", rep.cluster, rep.point_index, std::move(src.region), src.lat_deg,
                                          src.lon_deg, src.source_row, rep.distance_km});
    }

    auto rank = [&](const std::string& region) {
        auto it = std::find(region_order.begin(), region_order.end(), region);
        return static_cast<std::size_t>(it - region_order.begin());
    };
    std::sort(report.sites.begin(), report.sites.end(), [&](const SiteRecord& a, const SiteRecord& b) {
        const auto ra = rank(a.region), rb = rank(b.region);
        if (ra != rb) return ra < rb;
        if (a.region != b.region) return a.region < b.region;
        if (a.lat_deg != b.lat_deg) return a.lat_deg < b.lat_deg;
        return a.cluster < b.cluster;
    });

    for (std::size_t i = 0; i < report.sites.size(); ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "%c%02zu", quadrant_letter, i + 1);
        report.sites[i].site_id = id;
    }
    return report;
}

/// Resolver that knows only the clustered coordinates.
inline std::function<SiteSource(std::size_t)> coordinates_only(std::span<const GeoPoint> points) {
    return [points](std::size_t i) {
        return SiteSource{"UNKNOWN", lat_degrees(points[i]), lon_degrees(points[i]), i};
    };
}

}  // namespace sitesel
