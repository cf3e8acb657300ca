#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <thread>
#include <vector>

#include "sitesel/clustering.hpp"
#include "sitesel/errors.hpp"
#include "sitesel/random.hpp"

namespace sitesel {

struct DunnScore {
    double value = 0.0;
    double min_inter_km = 0.0;
    double max_intra_km = 0.0;
};

/// Dunn index: smallest distance between points of different clusters divided by the
/// largest distance between points of the same cluster (complete diameter). Singleton
/// clusters contribute a diameter of 0; if every diameter is 0 the ratio is undefined and
/// DegenerateClusteringError is thrown.
template <DistanceMetric Metric>
DunnScore dunn_index(std::span<const GeoPoint> points, std::span<const std::size_t> labels, const Metric& metric) {
    if (labels.size() != points.size()) throw ValidationError("dunn_index: labels and points differ in length");

    std::vector<std::size_t> distinct(labels.begin(), labels.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) throw ValidationError("dunn_index: needs at least 2 non-empty clusters");

    double min_inter = std::numeric_limits<double>::infinity();
    double max_intra = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = metric(points[i], points[j]);
            if (labels[i] == labels[j])
                max_intra = std::max(max_intra, d);
            else
                min_inter = std::min(min_inter, d);
        }
    }
    if (!(max_intra > 0.0))
        throw DegenerateClusteringError("dunn_index: every cluster has zero diameter; lower k");
    return DunnScore{min_inter / max_intra, min_inter, max_intra};
}

template <DistanceMetric Metric>
DunnScore dunn_index(std::span<const GeoPoint> points, const ClusterAssignment& assignment, const Metric& metric) {
    return dunn_index(points, std::span<const std::size_t>(assignment.labels), metric);
}

/// floor(sqrt(n)): the largest k keeping the mean cluster size at least k.
inline std::size_t default_k_max(std::size_t n) {
    if (n < 4) {
        std::ostringstream os;
        os << "default_k_max: need at least 4 points for a k range starting at 2, got " << n;
        throw ValidationError(os.str());
    }
    auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (k * k > n) --k;
    while ((k + 1) * (k + 1) <= n) ++k;
    return k;
}

struct KRange {
    std::size_t k_min = 2;
    std::size_t k_max = 2;
};

struct SweepOptions {
    KRange k_range;
    std::size_t runs_per_k = 100;
    std::uint64_t base_seed = 0;
    std::size_t max_iterations = kDefaultMaxIterations;
    /// Worker threads for (k, run) cells. Never changes the result.
    std::size_t workers = 1;
};

struct KBest {
    std::size_t k = 0;
    /// Empty when every run at this k was degenerate.
    std::optional<ClusteringResult> result;
    std::optional<DunnScore> dunn;
    std::size_t best_run = 0;
    std::size_t degenerate_runs = 0;

    bool scored() const { return dunn.has_value(); }
};

struct SweepResult {
    std::vector<KBest> per_k;
    std::size_t optimal_k = 0;
    KRange k_range;
    std::size_t runs_per_k = 0;
    std::uint64_t base_seed = 0;

    const KBest& best() const {
        for (const auto& entry : per_k)
            if (entry.k == optimal_k) return entry;
        throw SweepError("sweep result has no entry for its optimal k");
    }
};

/// Runs kmeans for every (k, run) cell with seed derive_seed(base_seed, k, run), keeps the
/// run with the highest Dunn index per k (earliest run on ties, degenerate runs skipped),
/// and picks the k with the highest best-Dunn value (smallest k on ties).
template <DistanceMetric Metric>
SweepResult sweep(std::span<const GeoPoint> points, std::span<const double> weights, const SweepOptions& options,
                  const Metric& metric) {
    const std::size_t n = points.size();
    const std::size_t k_min = options.k_range.k_min;
    const std::size_t k_max = options.k_range.k_max;
    if (k_min < 2 || k_min > k_max || k_max > n) {
        std::ostringstream os;
        os << "sweep: k range [" << k_min << ", " << k_max << "] must satisfy 2 <= k_min <= k_max <= n = " << n;
        throw ValidationError(os.str());
    }
    if (options.runs_per_k == 0) throw ValidationError("sweep: runs_per_k must be at least 1");
    detail::require_weights(n, weights);

    struct Cell {
        std::optional<ClusteringResult> result;
        std::optional<DunnScore> dunn;
    };
    const std::size_t num_k = k_max - k_min + 1;
    const std::size_t runs = options.runs_per_k;
    std::vector<Cell> cells(num_k * runs);

    auto run_cell = [&](std::size_t index) {
        const std::size_t k = k_min + index / runs;
        const std::size_t run = index % runs;
        Cell& cell = cells[index];
        cell.result = kmeans(points, weights, k, metric, derive_seed(options.base_seed, k, run), options.max_iterations);
        try {
            cell.dunn = dunn_index(points, cell.result->assignment, metric);
        } catch (const DegenerateClusteringError&) {
            cell.dunn.reset();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, cells.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) {
                    try {
                        run_cell(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        pool.clear();
        if (failure) std::rethrow_exception(failure);
    }

    SweepResult out;
    out.k_range = options.k_range;
    out.runs_per_k = runs;
    out.base_seed = options.base_seed;
    std::optional<double> best_value;
    for (std::size_t ki = 0; ki < num_k; ++ki) {
        KBest entry;
        entry.k = k_min + ki;
        for (std::size_t run = 0; run < runs; ++run) {
            Cell& cell = cells[ki * runs + run];
            if (!cell.dunn) {
                ++entry.degenerate_runs;
                continue;
            }
            if (!entry.dunn || cell.dunn->value > entry.dunn->value) {
                entry.dunn = cell.dunn;
                entry.result = std::move(cell.result);
                entry.best_run = run;
            }
        }
        if (entry.dunn && (!best_value || entry.dunn->value > *best_value)) {
            best_value = entry.dunn->value;
            out.optimal_k = entry.k;
        }
        out.per_k.push_back(std::move(entry));
    }
    if (!best_value) {
        std::ostringstream os;
        os << "sweep: every run for every k in [" << k_min << ", " << k_max
           << "] produced zero-diameter clusters; lower k";
        throw SweepError(os.str());
    }
    return out;
}

}  // namespace sitesel
