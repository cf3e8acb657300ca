#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sitesel/clustering.hpp"
#include "sitesel/errors.hpp"
#include "sitesel/export.hpp"
#include "sitesel/geo.hpp"
#include "sitesel/manifest.hpp"
#include "sitesel/model_selection.hpp"
#include "sitesel/sites.hpp"
#include "sitesel/survey.hpp"
#include "sitesel/weighting.hpp"

namespace sitesel {

/// Process exit statuses for the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParse = 2,
    kExitConfig = 3,
    kExitDegenerate = 4,
};

struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path output_dir = ".";
    std::filesystem::path column_map;
    std::uint64_t base_seed = 0;
    std::size_t runs_per_k = 100;
    std::size_t k_min = 2;
    /// Defaults to floor(sqrt(n)) per quadrant.
    std::optional<std::size_t> k_max;
    std::size_t max_iterations = kDefaultMaxIterations;
    double earth_radius_km = 6371.0;
    bool strict = false;
    /// Empty means every quadrant present in the input.
    std::vector<Quadrant> quadrants;
    std::vector<std::string> region_order = default_region_order();
    /// Threads for sweep cells. Output bytes do not depend on it.
    std::size_t workers = 1;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

struct LoadedInput {
    std::string digest;
    ParseResult parsed;
};

inline LoadedInput load_input(const RunConfig& config, std::ostream& log) {
    ParseOptions options;
    options.strict = config.strict;
    if (!config.column_map.empty()) options.columns = parse_column_map(read_file(config.column_map));
    const std::string bytes = read_file(config.input);
    LoadedInput loaded{sha256_hex(bytes), parse_responses(bytes, options)};
    for (const auto& d : loaded.parsed.diagnostics) log << "warning: " << format_diagnostic(d) << "\n";
    if (loaded.parsed.skipped_rows > 0)
        log << "skipped " << loaded.parsed.skipped_rows << " of " << loaded.parsed.data_rows << " data rows\n";
    return loaded;
}

inline std::vector<Quadrant> selected_quadrants(const RunConfig& config, std::span<const SurveyResponse> responses) {
    if (!config.quadrants.empty()) return config.quadrants;
    std::vector<Quadrant> present;
    for (Quadrant q : kAllQuadrants) {
        for (const auto& r : responses) {
            if (r.quadrant == q) {
                present.push_back(q);
                break;
            }
        }
    }
    return present;
}

struct QuadrantData {
    Quadrant quadrant;
    std::vector<WeightedPoint> weighted;
    std::vector<GeoPoint> points;
    std::vector<double> weights;
};

inline QuadrantData quadrant_data(std::span<const SurveyResponse> responses, Quadrant q) {
    QuadrantData d{q, build_weighted_points(responses, q), {}, {}};
    for (const auto& wp : d.weighted) {
        d.points.push_back(wp.point);
        d.weights.push_back(wp.weight);
    }
    return d;
}

inline std::function<SiteSource(std::size_t)> response_source(const QuadrantData& data,
                                                               std::span<const SurveyResponse> responses) {
    return [&data, responses](std::size_t i) {
        const auto& r = responses[data.weighted[i].source_index];
        return SiteSource{r.region.empty() ? "UNKNOWN" : r.region, r.lat_deg, r.lon_deg, r.source_row};
    };
}

inline RunManifest base_manifest(const RunConfig& config, const LoadedInput& input, std::string command) {
    RunManifest m;
    m.command = std::move(command);
    m.input_sha256 = input.digest;
    m.base_seed = config.base_seed;
    m.k_min = config.k_min;
    m.k_max = config.k_max;
    m.runs_per_k = config.runs_per_k;
    m.max_iterations = config.max_iterations;
    m.earth_radius_km = config.earth_radius_km;
    m.strict = config.strict;
    m.region_order = config.region_order;
    m.accepted_rows = input.parsed.responses.size();
    m.skipped_rows = input.parsed.skipped_rows;
    return m;
}

inline void check_common(const RunConfig& config) {
    if (config.runs_per_k == 0) throw ConfigError("runs_per_k must be at least 1");
    if (config.max_iterations == 0) throw ConfigError("max_iterations must be at least 1");
    if (!(config.earth_radius_km > 0.0)) throw ConfigError("earth radius must be positive");
}

// ---------------------------------------------------------------------------------------
// weights

struct AucRow {
    char letter;
    std::size_t n;
    double auc;
};

/// Writes weights.csv (one row per accepted response) and auc.csv (one row per quadrant).
inline std::vector<AucRow> run_weights(const RunConfig& config, std::ostream& log) {
    const LoadedInput input = load_input(config, log);
    const auto& responses = input.parsed.responses;
    std::filesystem::create_directories(config.output_dir);
    write_file(config.output_dir / "weights.csv", export_weight_table(responses));

    std::vector<AucRow> rows;
    std::string auc_csv = "Quadrant,N,AUC\n";
    for (Quadrant q : selected_quadrants(config, responses)) {
        const auto data = quadrant_data(responses, q);
        if (data.weights.empty()) continue;
        const AucRow row{quadrant_letter(q), data.weights.size(), reliability_auc(data.weights)};
        rows.push_back(row);
        auc_csv += std::string(1, row.letter) + "," + std::to_string(row.n) + "," + format_fixed(row.auc, 12) + "\n";
        log << "quadrant " << row.letter << ": n=" << row.n << " AUC=" << format_fixed(row.auc, 4) << "\n";
    }
    write_file(config.output_dir / "auc.csv", auc_csv);
    return rows;
}

// ---------------------------------------------------------------------------------------
// cluster / sweep

struct QuadrantOutcome {
    Quadrant quadrant;
    QuadrantData data;
    double auc = 0.0;
    SweepResult sweep;
    SiteReport sites;
};

namespace detail {

inline QuadrantOutcome cluster_quadrant(const RunConfig& config, std::span<const SurveyResponse> responses,
                                        Quadrant q, KRange range, std::ostream& log) {
    QuadrantOutcome out{q, quadrant_data(responses, q), 0.0, {}, {}};
    const HaversineMetric metric{EarthModel(config.earth_radius_km)};
    out.auc = reliability_auc(out.data.weights);

    SweepOptions options;
    options.k_range = range;
    options.runs_per_k = config.runs_per_k;
    options.base_seed = config.base_seed;
    options.max_iterations = config.max_iterations;
    options.workers = config.workers;
    try {
        out.sweep = sweep(out.data.points, out.data.weights, options, metric);
    } catch (const SweepError& e) {
        std::ostringstream os;
        os << "quadrant " << quadrant_letter(q) << ": " << e.what() << " (k range " << range.k_min << ".."
           << range.k_max << " over " << out.data.points.size() << " points)";
        throw SweepError(os.str());
    }

    const ClusteringResult& best = *out.sweep.best().result;
    if (best.longitude_wrap_warning)
        log << "warning: quadrant " << quadrant_letter(q)
            << ": a cluster spans more than 180 degrees of longitude; coordinate means are unreliable\n";
    const auto reps = select_representatives(out.data.points, best.assignment, best.centers, metric);
    out.sites = assign_site_ids(reps, quadrant_letter(q), response_source(out.data, responses), config.region_order);
    return out;
}

inline QuadrantSummary summarize(const QuadrantOutcome& o) {
    QuadrantSummary s;
    s.letter = quadrant_letter(o.quadrant);
    s.n_points = o.data.points.size();
    s.auc = o.auc;
    s.k_min = o.sweep.k_range.k_min;
    s.k_max = o.sweep.k_range.k_max;
    const auto& best = o.sweep.best();
    s.optimal_k = best.k;
    s.best_dunn = best.dunn->value;
    s.best_seed = best.result->seed;
    s.converged = best.result->converged;
    return s;
}

}  // namespace detail

/// Best-of-runs clustering at a single k for each selected quadrant. Writes
/// `<Q>_k<k>.geojson`, `<Q>_k<k>_sites.csv` and `cluster_manifest.json`.
inline std::vector<QuadrantOutcome> run_cluster(const RunConfig& config, std::size_t k, std::ostream& log) {
    check_common(config);
    const LoadedInput input = load_input(config, log);
    const auto& responses = input.parsed.responses;
    std::filesystem::create_directories(config.output_dir);

    RunManifest manifest = base_manifest(config, input, "cluster");
    manifest.k_min = k;
    manifest.k_max = k;
    std::vector<QuadrantOutcome> outcomes;
    for (Quadrant q : selected_quadrants(config, responses)) {
        const std::size_t n = quadrant_data(responses, q).points.size();
        if (k < 2 || k > n) {
            std::ostringstream os;
            os << "quadrant " << quadrant_letter(q) << ": k must be in [2, " << n << "], got " << k;
            throw ConfigError(os.str());
        }
        auto o = detail::cluster_quadrant(config, responses, q, KRange{k, k}, log);
        const std::string stem = std::string(1, quadrant_letter(q)) + "_k" + std::to_string(k);
        write_file(config.output_dir / (stem + ".geojson"),
                   export_geojson(o.data.weighted, responses, *o.sweep.best().result, o.sites));
        write_file(config.output_dir / (stem + "_sites.csv"), export_site_table(o.sites));
        manifest.quadrants.push_back(detail::summarize(o));
        log << "quadrant " << quadrant_letter(q) << ": k=" << k << " best Dunn=" << format_fixed(o.sweep.best().dunn->value, 6)
            << "\n";
        outcomes.push_back(std::move(o));
    }
    write_file(config.output_dir / "cluster_manifest.json", manifest_to_json(manifest));
    return outcomes;
}

/// Dunn-index sweep over [k_min, k_max] for each selected quadrant, then site extraction
/// at the optimal k. Writes `<Q>_clusters.geojson`, `<Q>_sites.csv`, `<Q>_dunn_curve.csv`
/// and `sweep_manifest.json`.
inline std::vector<QuadrantOutcome> run_sweep(const RunConfig& config, std::ostream& log) {
    check_common(config);
    const LoadedInput input = load_input(config, log);
    const auto& responses = input.parsed.responses;
    std::filesystem::create_directories(config.output_dir);

    RunManifest manifest = base_manifest(config, input, "sweep");
    std::vector<QuadrantOutcome> outcomes;
    for (Quadrant q : selected_quadrants(config, responses)) {
        const std::size_t n = quadrant_data(responses, q).points.size();
        std::size_t k_max = 0;
        if (config.k_max) {
            k_max = *config.k_max;
        } else {
            if (n < 4) {
                std::ostringstream os;
                os << "quadrant " << quadrant_letter(q) << ": " << n << " points is too few for a k sweep";
                throw ConfigError(os.str());
            }
            k_max = default_k_max(n);
        }
        if (config.k_min < 2 || config.k_min > k_max || k_max > n) {
            std::ostringstream os;
            os << "quadrant " << quadrant_letter(q) << ": need 2 <= k_min <= k_max <= n, got k_min=" << config.k_min
               << " k_max=" << k_max << " n=" << n;
            throw ConfigError(os.str());
        }
        auto o = detail::cluster_quadrant(config, responses, q, KRange{config.k_min, k_max}, log);
        const std::string letter(1, quadrant_letter(q));
        write_file(config.output_dir / (letter + "_clusters.geojson"),
                   export_geojson(o.data.weighted, responses, *o.sweep.best().result, o.sites));
        write_file(config.output_dir / (letter + "_sites.csv"), export_site_table(o.sites));
        write_file(config.output_dir / (letter + "_dunn_curve.csv"), export_dunn_curve(o.sweep));
        manifest.quadrants.push_back(detail::summarize(o));
        log << "quadrant " << letter << ": n=" << n << " AUC=" << format_fixed(o.auc, 4)
            << " optimal k=" << o.sweep.optimal_k << " best Dunn=" << format_fixed(o.sweep.best().dunn->value, 6)
            << "\n";
        outcomes.push_back(std::move(o));
    }
    write_file(config.output_dir / "sweep_manifest.json", manifest_to_json(manifest));
    return outcomes;
}

}  // namespace sitesel
