#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sitesel/errors.hpp"

namespace sitesel {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

/// Latitude/longitude in radians. lat in [-pi/2, pi/2], lon in (-pi, pi].
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Spherical Earth. The default radius is the mean radius, 6371 km.
class EarthModel {
public:
    constexpr EarthModel() = default;
    explicit EarthModel(double radius_km) : radius_km_(radius_km) {
        if (!(radius_km > 0.0) || !std::isfinite(radius_km)) {
            std::ostringstream os;
            os << "earth radius must be positive and finite, got " << radius_km;
            throw ValidationError(os.str());
        }
    }

    constexpr double radius_km() const { return radius_km_; }

private:
    double radius_km_ = 6371.0;
};

/// Wraps a longitude in degrees into (-180, 180]. In-range values pass through unchanged.
inline double normalize_longitude_deg(double lon_deg) {
    if (lon_deg > -180.0 && lon_deg <= 180.0) return lon_deg;
    double wrapped = std::fmod(lon_deg, 360.0);
    if (wrapped <= -180.0) wrapped += 360.0;
    if (wrapped > 180.0) wrapped -= 360.0;
    return wrapped;
}

inline GeoPoint from_degrees(double lat_deg, double lon_deg) {
    if (!std::isfinite(lat_deg) || std::abs(lat_deg) > 90.0) {
        std::ostringstream os;
        os.precision(17);
        os << "latitude out of range [-90, 90]: " << lat_deg;
        throw ValidationError(os.str());
    }
    if (!std::isfinite(lon_deg)) {
        std::ostringstream os;
        os << "longitude is not finite: " << lon_deg;
        throw ValidationError(os.str());
    }
    GeoPoint p{lat_deg * kDegToRad, normalize_longitude_deg(lon_deg) * kDegToRad};
    // 90 * (pi/180) can land one ulp outside the closed range.
    p.lat = std::clamp(p.lat, -std::numbers::pi / 2, std::numbers::pi / 2);
    return p;
}

inline double lat_degrees(const GeoPoint& p) { return p.lat * kRadToDeg; }
inline double lon_degrees(const GeoPoint& p) { return p.lon * kRadToDeg; }

/// Great-circle distance in km.
///
///   a = sin^2(dlat/2) + cos(lat1) cos(lat2) sin^2(dlon/2)
///   d = 2R atan2(sqrt(a), sqrt(1 - a))
///
/// `a` is clamped to [0, 1] so rounding never produces a NaN near antipodes.
inline double haversine(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth = {}) {
    const double s_lat = std::sin((b.lat - a.lat) / 2.0);
    const double s_lon = std::sin((b.lon - a.lon) / 2.0);
    double h = s_lat * s_lat + std::cos(a.lat) * std::cos(b.lat) * s_lon * s_lon;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * earth.radius_km() * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

/// Haversine distance on a fixed Earth model; the default clustering metric.
struct HaversineMetric {
    EarthModel earth{};

    double operator()(const GeoPoint& a, const GeoPoint& b) const { return haversine(a, b, earth); }
};

/// Euclidean distance treating (lat, lon) radians as plane coordinates. Used for oracle tests.
struct PlanarMetric {
    double operator()(const GeoPoint& a, const GeoPoint& b) const {
        return std::hypot(a.lat - b.lat, a.lon - b.lon);
    }
};

}  // namespace sitesel
