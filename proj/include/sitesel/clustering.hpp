#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "sitesel/errors.hpp"
#include "sitesel/geo.hpp"
#include "sitesel/random.hpp"

namespace sitesel {

/// Symmetric, non-negative distance between two points with d(x, x) == 0.
template <typename M>
concept DistanceMetric = std::copy_constructible<M> && requires(const M& m, const GeoPoint& a, const GeoPoint& b) {
    { m(a, b) } -> std::convertible_to<double>;
};

/// Hard partition of n points into k clusters.
struct ClusterAssignment {
    std::vector<std::size_t> labels;
    std::size_t k = 0;

    std::vector<std::size_t> cluster_sizes() const {
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t l : labels) ++sizes[l];
        return sizes;
    }

    std::vector<std::size_t> members(std::size_t cluster) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cluster) out.push_back(i);
        return out;
    }
};

struct ClusteringResult {
    std::vector<GeoPoint> centers;
    ClusterAssignment assignment;
    std::size_t iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    /// Sum over points of w * d(x, center)^2.
    double objective = 0.0;
    /// Set when some cluster's longitudes spanned more than pi, where the coordinate
    /// mean is not meaningful (antimeridian wrap).
    bool longitude_wrap_warning = false;
};

inline constexpr std::size_t kDefaultMaxIterations = 300;

namespace detail {

inline void require_nonempty_and_k(std::size_t n, std::size_t k) {
    if (n == 0) throw ValidationError("no points to cluster");
    if (k == 0 || k > n) {
        std::ostringstream os;
        os << "cluster count k must be in [1, " << n << "], got " << k;
        throw ValidationError(os.str());
    }
}

inline void require_weights(std::size_t n, std::span<const double> weights) {
    if (weights.size() != n) {
        std::ostringstream os;
        os << "weights size " << weights.size() << " does not match point count " << n;
        throw ValidationError(os.str());
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            std::ostringstream os;
            os << "weights must be positive and finite, got " << w;
            throw ValidationError(os.str());
        }
    }
}

template <DistanceMetric Metric>
std::size_t nearest_center(const GeoPoint& x, std::span<const GeoPoint> centers, const Metric& metric) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
        const double d = metric(x, centers[j]);
        if (d < best_d) {  // strict: lowest index wins ties
            best_d = d;
            best = j;
        }
    }
    return best;
}

}  // namespace detail

/// k-means++ seeding returning point indices. The first center is uniform over all points
/// unless `preset` already fixes some; each further center is drawn with probability
/// r^2 / sum(r^2), r being the distance to the nearest chosen center. If every remaining
/// r is zero the draw falls back to a uniform choice among unchosen indices.
template <DistanceMetric Metric>
std::vector<std::size_t> kmeanspp_indices(std::span<const GeoPoint> points, std::size_t k, const Metric& metric,
                                          SplitMix64& rng, std::span<const std::size_t> preset = {}) {
    const std::size_t n = points.size();
    detail::require_nonempty_and_k(n, k);
    if (preset.size() > k) throw ValidationError("more preset centers than k");

    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    std::vector<char> is_chosen(n, 0);
    std::vector<double> r(n, std::numeric_limits<double>::infinity());

    auto add_center = [&](std::size_t idx) {
        chosen.push_back(idx);
        is_chosen[idx] = 1;
        for (std::size_t j = 0; j < n; ++j) r[j] = std::min(r[j], static_cast<double>(metric(points[idx], points[j])));
    };

    for (std::size_t idx : preset) {
        if (idx >= n || is_chosen[idx]) throw ValidationError("preset center index invalid or repeated");
        add_center(idx);
    }
    if (chosen.empty()) add_center(rng.uniform_index(n));

    std::vector<double> cumulative(n);
    while (chosen.size() < k) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            total += r[j] * r[j];
            cumulative[j] = total;
        }

        std::size_t pick = n;
        if (total > 0.0) {
            const double u = rng.uniform01() * total;
            for (std::size_t j = 0; j < n; ++j) {
                if (r[j] > 0.0 && cumulative[j] > u) {
                    pick = j;
                    break;
                }
            }
            if (pick == n) {  // rounding at the top end
                for (std::size_t j = n; j-- > 0;) {
                    if (r[j] > 0.0) {
                        pick = j;
                        break;
                    }
                }
            }
        } else {
            std::vector<std::size_t> unchosen;
            for (std::size_t j = 0; j < n; ++j)
                if (!is_chosen[j]) unchosen.push_back(j);
            pick = unchosen[rng.uniform_index(unchosen.size())];
        }
        add_center(pick);
    }
    return chosen;
}

template <DistanceMetric Metric>
std::vector<GeoPoint> kmeanspp_init(std::span<const GeoPoint> points, std::size_t k, const Metric& metric,
                                    SplitMix64& rng) {
    std::vector<GeoPoint> centers;
    for (std::size_t idx : kmeanspp_indices(points, k, metric, rng)) centers.push_back(points[idx]);
    return centers;
}

/// True when the longitudes of `points` span more than pi radians.
inline bool longitude_span_exceeds_pi(std::span<const GeoPoint> points) {
    if (points.empty()) return false;
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const GeoPoint& a, const GeoPoint& b) { return a.lon < b.lon; });
    return hi->lon - lo->lon > std::numbers::pi;
}

/// Component-wise weighted mean of (lat, lon): sum(w x) / sum(w).
inline GeoPoint weighted_center(std::span<const GeoPoint> points, std::span<const double> weights) {
    if (points.empty()) throw EmptyClusterError("weighted_center: cluster has no points");
    if (points.size() != weights.size()) throw ValidationError("weighted_center: points and weights differ in length");
    if (points.size() == 1) {
        if (!(weights[0] > 0.0) || !std::isfinite(weights[0]))
            throw ValidationError("weighted_center: weights must be positive and finite");
        return points[0];
    }
    double sum_w = 0.0, sum_lat = 0.0, sum_lon = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
            throw ValidationError("weighted_center: weights must be non-negative and finite");
        sum_w += weights[i];
        sum_lat += weights[i] * points[i].lat;
        sum_lon += weights[i] * points[i].lon;
    }
    if (!(sum_w > 0.0)) throw ValidationError("weighted_center: weights sum to zero");
    return GeoPoint{sum_lat / sum_w, sum_lon / sum_w};
}

/// sum_i w_i * d(x_i, center[label_i])^2
template <DistanceMetric Metric>
double objective(std::span<const GeoPoint> points, std::span<const double> weights,
                 std::span<const GeoPoint> centers, const ClusterAssignment& assignment, const Metric& metric) {
    if (weights.size() != points.size() || assignment.labels.size() != points.size() ||
        centers.size() != assignment.k)
        throw ValidationError("objective: inconsistent shapes");
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (assignment.labels[i] >= centers.size()) throw ValidationError("objective: label out of range");
        const double d = metric(points[i], centers[assignment.labels[i]]);
        total += weights[i] * d * d;
    }
    return total;
}

namespace detail {

// Gives every empty cluster the point farthest from its own center, taken only from
// clusters that can spare one. Returns true if anything moved.
template <DistanceMetric Metric>
bool repair_empty_clusters(std::span<const GeoPoint> points, std::vector<std::size_t>& labels,
                           std::vector<GeoPoint>& centers, const Metric& metric) {
    const std::size_t k = centers.size();
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t l : labels) ++sizes[l];

    bool repaired = false;
    for (std::size_t j = 0; j < k; ++j) {
        if (sizes[j] != 0) continue;
        std::size_t far = points.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (sizes[labels[i]] < 2) continue;
            const double d = metric(points[i], centers[labels[i]]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        --sizes[labels[far]];
        labels[far] = j;
        sizes[j] = 1;
        centers[j] = points[far];
        repaired = true;
    }
    return repaired;
}

}  // namespace detail

/// Weighted k-means: k-means++ seeding, nearest-center assignment (lowest index on ties),
/// weighted coordinate-mean updates. Stops once an assignment pass leaves every label
/// unchanged, or after `max_iterations` passes with `converged == false`.
/// The result is a pure function of the arguments.
template <DistanceMetric Metric>
ClusteringResult kmeans(std::span<const GeoPoint> points, std::span<const double> weights, std::size_t k,
                        const Metric& metric, std::uint64_t seed,
                        std::size_t max_iterations = kDefaultMaxIterations) {
    const std::size_t n = points.size();
    detail::require_nonempty_and_k(n, k);
    detail::require_weights(n, weights);
    if (max_iterations == 0) throw ValidationError("max_iterations must be at least 1");

    ClusteringResult result;
    result.seed = seed;
    SplitMix64 rng(seed);
    std::vector<GeoPoint> centers = kmeanspp_init(points, k, metric, rng);

    constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> previous(n, kUnassigned);
    std::vector<std::size_t> labels(n);
    std::vector<GeoPoint> member_points;
    std::vector<double> member_weights;

    for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
        result.iterations = iter;
        for (std::size_t i = 0; i < n; ++i) labels[i] = detail::nearest_center(points[i], centers, metric);
        const bool repaired = detail::repair_empty_clusters(points, labels, centers, metric);

        if (!repaired && labels == previous) {
            result.converged = true;
            break;
        }
        previous = labels;

        for (std::size_t j = 0; j < k; ++j) {
            member_points.clear();
            member_weights.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (labels[i] != j) continue;
                member_points.push_back(points[i]);
                member_weights.push_back(weights[i]);
            }
            if (longitude_span_exceeds_pi(member_points)) result.longitude_wrap_warning = true;
            centers[j] = weighted_center(member_points, member_weights);
        }
    }

    result.centers = std::move(centers);
    result.assignment = ClusterAssignment{std::move(previous), k};
    result.objective = objective(points, weights, result.centers, result.assignment, metric);
    return result;
}

}  // namespace sitesel
