// Command-line front end: weights, cluster, sweep, synth.

#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sitesel/sitesel.hpp"

namespace {

struct CliOptions {
    sitesel::RunConfig config;
    std::string input;
    std::string output_dir = ".";
    std::string column_map;
    std::size_t k_max = 0;
    std::vector<std::string> quadrants;
    std::size_t workers = 0;
    std::size_t k = 0;

    std::string synth_out;
    std::size_t blobs = 4;
    std::size_t per_blob = 25;
    double spread_km = 1.0;
    double separation_km = 20.0;
    std::string law = "spread";
    std::uint64_t synth_seed = 0;
};

sitesel::RunConfig finalize(CliOptions& o) {
    sitesel::RunConfig c = o.config;
    c.input = o.input;
    c.output_dir = o.output_dir;
    c.column_map = o.column_map;
    if (o.k_max > 0) c.k_max = o.k_max;
    for (const auto& token : o.quadrants) {
        auto q = sitesel::parse_quadrant(token);
        if (!q) throw sitesel::ConfigError("unknown quadrant '" + token + "'");
        c.quadrants.push_back(*q);
    }
    c.workers = o.workers > 0 ? o.workers : std::max(1u, std::thread::hardware_concurrency());
    if (c.input.empty()) throw sitesel::ConfigError("--input is required");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Characteristic-site selection from reliability-weighted location votes"};
    app.set_config("--config", "", "key=value file supplying any long option; flags on the command line win");
    app.fallthrough();
    app.require_subcommand(1);

    CliOptions o;
    auto& cfg = o.config;
    app.add_option("-i,--input", o.input, "Survey response CSV");
    app.add_option("-o,--output-dir", o.output_dir, "Directory for generated files")->capture_default_str();
    app.add_option("--column-map", o.column_map, "key=value file mapping canonical fields to CSV headers");
    app.add_option("--seed", cfg.base_seed, "Base seed for all clustering runs")->capture_default_str();
    app.add_option("--runs-per-k", cfg.runs_per_k, "Seeds tried per k")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--k-min", cfg.k_min, "Smallest k in a sweep")->capture_default_str();
    app.add_option("--k-max", o.k_max, "Largest k in a sweep (default floor(sqrt(n)))");
    app.add_option("--max-iterations", cfg.max_iterations, "Assignment passes per run")->capture_default_str();
    app.add_option("--earth-radius-km", cfg.earth_radius_km, "Sphere radius")->capture_default_str();
    app.add_flag("--strict", cfg.strict, "Fail on the first malformed row instead of skipping it");
    app.add_option("-q,--quadrant", o.quadrants, "Quadrant(s) to process: A-D or names (default: all present)")
        ->delimiter(',');
    app.add_option("--region-order", cfg.region_order, "Comma-separated region order for site IDs")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("-j,--workers", o.workers, "Worker threads (default: hardware concurrency)");

    auto* weights = app.add_subcommand("weights", "Reliability weights per response and AUC per quadrant");
    auto* cluster = app.add_subcommand("cluster", "Best-of-runs clustering at a fixed k");
    cluster->add_option("-k,--k", o.k, "Cluster count")->required();
    auto* sweep = app.add_subcommand("sweep", "Dunn-index sweep over k, then site extraction");
    auto* synth = app.add_subcommand("synth", "Write a synthetic survey CSV of Gaussian blobs");
    synth->add_option("--out", o.synth_out, "Output CSV path")->required();
    synth->add_option("--blobs", o.blobs, "Blob count")->capture_default_str();
    synth->add_option("--per-blob", o.per_blob, "Responses per blob")->capture_default_str();
    synth->add_option("--spread-km", o.spread_km, "Std. deviation of member offsets")->capture_default_str();
    synth->add_option("--separation-km", o.separation_km, "Grid spacing of blob centers")->capture_default_str();
    synth->add_option("--weight-law", o.law, "spread | constant | zero")->capture_default_str();
    synth->add_option("--synth-seed", o.synth_seed, "Generator seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            sitesel::SynthSpec spec;
            spec.blobs = o.blobs;
            spec.per_blob = o.per_blob;
            spec.spread_km = o.spread_km;
            spec.separation_km = o.separation_km;
            spec.seed = o.synth_seed;
            spec.earth = sitesel::EarthModel(cfg.earth_radius_km);
            auto law = sitesel::parse_weight_law(o.law);
            if (!law) throw sitesel::ConfigError("unknown weight law '" + o.law + "'");
            spec.law = *law;
            if (!o.quadrants.empty()) {
                auto q = sitesel::parse_quadrant(o.quadrants.front());
                if (!q) throw sitesel::ConfigError("unknown quadrant '" + o.quadrants.front() + "'");
                spec.quadrant = *q;
            }
            sitesel::write_file(o.synth_out, sitesel::generate_synthetic_csv(spec));
            std::cerr << "wrote " << spec.blobs * spec.per_blob << " responses to " << o.synth_out << "\n";
            return sitesel::kExitOk;
        }

        const sitesel::RunConfig config = finalize(o);
        if (weights->parsed()) {
            for (const auto& row : sitesel::run_weights(config, std::cerr))
                std::cout << row.letter << "," << row.n << "," << sitesel::format_fixed(row.auc, 6) << "\n";
        } else if (cluster->parsed()) {
            sitesel::run_cluster(config, o.k, std::cerr);
        } else if (sweep->parsed()) {
            for (const auto& outcome : sitesel::run_sweep(config, std::cerr)) {
                for (const auto& s : outcome.sites.sites)
                    std::cout << s.site_id << "," << s.region << "," << sitesel::format_fixed(s.lat_deg, 9) << ","
                              << sitesel::format_fixed(s.lon_deg, 9) << "\n";
            }
        }
        return sitesel::kExitOk;
    } catch (const sitesel::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return sitesel::kExitParse;
    } catch (const sitesel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sitesel::kExitConfig;
    } catch (const sitesel::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sitesel::kExitConfig;
    } catch (const sitesel::DegenerateClusteringError& e) {
        std::cerr << "degenerate clustering: " << e.what() << "\n";
        return sitesel::kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sitesel::kExitFailure;
    }
}
