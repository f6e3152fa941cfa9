#include "topoclust/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "topoclust/clustering.hpp"
#include "topoclust/errors.hpp"
#include "topoclust/format.hpp"
#include "topoclust/persistence.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace topoclust {

namespace {

int parse_int_token(const std::string& t, const std::string& what) {
    int v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw InvalidParameter(what + ": '" + t + "' is not an integer");
    return v;
}

double parse_double_token(const std::string& t, const std::string& what) {
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (first != last && *first == '+') ++first;
    double v = 0.0;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw InvalidParameter(what + ": '" + t + "' is not a real number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

void validate_config(const RunConfig& config) {
    const bool has_input = !config.input.empty();
    const bool has_synth = config.synth.has_value();
    if (has_input == has_synth)
        throw InvalidParameter(
            "exactly one of an input path and a synth spec is required");
    if (config.k_min < 1 || config.k_min > config.k_max)
        throw InvalidK("need 1 <= k_min <= k_max, got k_min=" +
                       std::to_string(config.k_min) + " k_max=" +
                       std::to_string(config.k_max));
    LiftingParams lifting;
    lifting.alpha = config.alpha;
    lifting.validate();
    if (config.persistence_threshold && !(*config.persistence_threshold >= 0.0))
        throw InvalidParameter("persistence threshold must be >= 0");
    if (!(config.auto_threshold_fraction >= 0.0))
        throw InvalidParameter("auto threshold fraction must be >= 0");
    if (config.dim_d && !(*config.dim_d > 0.0))
        throw InvalidParameter("effective dimension must be > 0");
    if (config.threads < 0)
        throw InvalidParameter("threads must be >= 0 (0 = auto)");
    if (config.output.empty())
        throw InvalidParameter("output directory must be non-empty");
}

Ensemble make_ensemble(const RunConfig& config) {
    Ensemble ensemble =
        config.synth ? generate_gaussians_ensemble(
                           config.synth->n_members, config.synth->n_patterns,
                           config.synth->grid, config.synth->noise_sigma,
                           config.seed)
                     : load_ensemble(config.input);
    ensemble.validate();
    const int n = int(ensemble.members.size());
    if (config.k_max >= n)
        throw InvalidK("k_max=" + std::to_string(config.k_max) +
                       " must be smaller than the ensemble size " +
                       std::to_string(n) + " (scoring needs k < n)");
    return ensemble;
}

std::vector<Family> families_of(FamilySelect select) {
    switch (select) {
    case FamilySelect::minima: return {Family::minima};
    case FamilySelect::maxima: return {Family::maxima};
    default: return {Family::minima, Family::maxima};
    }
}

int effective_threads(const RunConfig& config) {
    if (config.threads > 0) return config.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

FamilyRun family_run(const Ensemble& ensemble, Family fam,
                     const RunConfig& config, int threads) {
    FamilyRun run;
    run.family = fam;
    double total_points = 0.0;
    for (const ScalarField& field : ensemble.members) {
        run.diagrams.push_back(pipeline_diagram(
            field, fam, config.persistence_threshold,
            config.auto_threshold_fraction, config.include_global_pair));
        total_points += double(run.diagrams.back().points.size());
    }
    run.mean_point_count = total_points / double(ensemble.members.size());
    // AUTO effective dimension: two coordinates (birth, death) per diagram
    // point, floored at 2 so tiny diagrams still score.
    run.dim = config.dim_d ? *config.dim_d
                           : std::max(2.0, 2.0 * run.mean_point_count);
    LiftingParams lifting;
    lifting.alpha = config.alpha;
    run.clusterings = sweep(run.diagrams, config.k_min, config.k_max, lifting,
                            config.t_max, config.seed, threads);
    run.report = select_k(run.clusterings, run.dim);
    return run;
}

std::string centroid_relpath(Family fam, int k, int j) {
    return std::string("centroids/") + to_string(fam) + "_k" +
           std::to_string(k) + "_c" + std::to_string(j) + ".pdiag";
}

ordered_json config_json(const RunConfig& config) {
    ordered_json jc;
    if (config.input.empty())
        jc["input"] = nullptr;
    else
        jc["input"] = config.input;
    if (config.synth) {
        ordered_json js;
        js["n_members"] = config.synth->n_members;
        js["n_patterns"] = config.synth->n_patterns;
        js["grid"] = {config.synth->grid[0], config.synth->grid[1],
                      config.synth->grid[2]};
        js["noise_sigma"] = config.synth->noise_sigma;
        jc["synth"] = js;
    } else {
        jc["synth"] = nullptr;
    }
    jc["family"] = to_string(config.family);
    jc["k_min"] = config.k_min;
    jc["k_max"] = config.k_max;
    if (config.t_max.bounded())
        jc["t_max_seconds"] = config.t_max.max_seconds;
    else
        jc["t_max_seconds"] = nullptr;
    jc["alpha"] = config.alpha;
    if (config.persistence_threshold)
        jc["persistence_threshold"] = *config.persistence_threshold;
    else
        jc["persistence_threshold"] = "auto";
    jc["auto_threshold_fraction"] = config.auto_threshold_fraction;
    if (config.dim_d)
        jc["dim"] = *config.dim_d;
    else
        jc["dim"] = "auto";
    jc["include_global_pair"] = config.include_global_pair;
    jc["seed"] = config.seed;
    jc["output"] = config.output;
    // threads is intentionally not recorded: the report must not depend on it.
    return jc;
}

ordered_json report_json(const RunConfig& config, const PipelineResult& result,
                         const std::string& error) {
    ordered_json j;
    j["tool"] = "topoclust";
    j["version"] = 1;
    j["config"] = config_json(config);

    ordered_json je;
    je["n_members"] = result.ensemble.members.size();
    if (!result.ensemble.members.empty()) {
        const ScalarField& f0 = result.ensemble.members.front();
        je["dims"] = {f0.dims[0], f0.dims[1], f0.dims[2]};
        je["spacing"] = {f0.spacing.x(), f0.spacing.y(), f0.spacing.z()};
        je["origin"] = {f0.origin.x(), f0.origin.y(), f0.origin.z()};
    }
    ordered_json names = ordered_json::array();
    for (const ScalarField& f : result.ensemble.members) names.push_back(f.name);
    je["member_names"] = names;
    ordered_json meta = ordered_json::object();
    for (const auto& [key, value] : result.ensemble.metadata) meta[key] = value;
    je["metadata"] = meta;
    j["ensemble"] = je;

    ordered_json jfams = ordered_json::object();
    for (const FamilyRun& run : result.families) {
        ordered_json jf;
        jf["dim"] = run.dim;
        jf["mean_point_count"] = run.mean_point_count;
        ordered_json per_k = ordered_json::object();
        for (const ClusteringResult& clustering : run.clusterings) {
            const int k = clustering.k;
            const PerKScore& sc = run.report.per_k.at(k);
            ordered_json e;
            e["inertia"] = clustering.inertia;
            e["iterations"] = clustering.iterations;
            e["converged"] = clustering.converged;
            e["elapsed_seconds"] = clustering.elapsed_seconds;
            e["log_likelihood"] = sc.log_likelihood;
            e["sigma2"] = sc.sigma2;
            e["aic"] = sc.aic;
            e["bic"] = sc.bic;
            e["aic_normalized"] = sc.aic_normalized; // NaN dumps as null
            e["bic_normalized"] = sc.bic_normalized;
            std::vector<int> sizes(std::size_t(k), 0);
            for (int a : clustering.assignment) ++sizes[std::size_t(a)];
            e["cluster_sizes"] = sizes;
            e["assignment"] = clustering.assignment;
            e["distances"] = clustering.distances;
            ordered_json files = ordered_json::array();
            for (int c = 0; c < int(clustering.centroids.size()); ++c)
                files.push_back(centroid_relpath(run.family, k, c));
            e["centroid_files"] = files;
            per_k[std::to_string(k)] = e;
        }
        jf["per_k"] = per_k;
        jf["selected_k_aic"] = run.report.selected_k_aic;
        jf["selected_k_bic"] = run.report.selected_k_bic;
        jfams[to_string(run.family)] = jf;
    }
    j["families"] = jfams;
    if (!error.empty()) j["error"] = error;
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

void emit_outputs(const RunConfig& config, const PipelineResult& result,
                  const std::string& error) {
    const fs::path out_dir(config.output);
    for (const FamilyRun& run : result.families)
        for (const ClusteringResult& clustering : run.clusterings)
            for (int c = 0; c < int(clustering.centroids.size()); ++c)
                save_diagram(clustering.centroids[c],
                             out_dir /
                                 centroid_relpath(run.family, clustering.k, c));

    // Score curves, one "k value" line per k, normalized to k=1 when present.
    for (const FamilyRun& run : result.families) {
        for (const char* criterion : {"aic", "bic"}) {
            std::string text;
            for (const auto& [k, sc] : run.report.per_k) {
                const bool is_aic = criterion[0] == 'a';
                const double normalized =
                    is_aic ? sc.aic_normalized : sc.bic_normalized;
                const double raw = is_aic ? sc.aic : sc.bic;
                const double value = std::isnan(normalized) ? raw : normalized;
                text += std::to_string(k) + " " + format_double(value) + "\n";
            }
            write_text(out_dir / (std::string("scores_") +
                                  to_string(run.family) + "_" + criterion +
                                  ".dat"),
                       text);
        }
    }

    write_text(out_dir / "report.json",
               report_json(config, result, error).dump(2) + "\n");
}

} // namespace

SynthSpec parse_synth_spec(const std::string& spec) {
    std::string head = spec, rest;
    const std::size_t colon = spec.find(':');
    if (colon != std::string::npos) {
        head = spec.substr(0, colon);
        rest = spec.substr(colon + 1);
    }
    if (head != "gaussians")
        throw InvalidParameter("unknown generator '" + head +
                               "' (expected 'gaussians')");
    SynthSpec out;
    if (rest.empty()) return out;
    for (const std::string& kv : split(rest, ',')) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InvalidParameter("synth option '" + kv +
                                   "' is not key=value");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "n") {
            out.n_members = parse_int_token(value, "synth n");
        } else if (key == "patterns") {
            out.n_patterns = parse_int_token(value, "synth patterns");
        } else if (key == "grid") {
            const std::vector<std::string> parts = split(value, 'x');
            if (parts.size() != 2)
                throw InvalidParameter("synth grid must look like 64x64, got '" +
                                       value + "'");
            out.grid = {parse_int_token(parts[0], "synth grid"),
                        parse_int_token(parts[1], "synth grid"), 1};
        } else if (key == "noise") {
            out.noise_sigma = parse_double_token(value, "synth noise");
        } else {
            throw InvalidParameter("unknown synth option '" + key + "'");
        }
    }
    return out;
}

PersistenceDiagram pipeline_diagram(const ScalarField& field, Family family,
                                    std::optional<double> threshold,
                                    double auto_fraction,
                                    bool include_global_pair) {
    if (!threshold && !(auto_fraction >= 0.0))
        throw InvalidParameter("auto threshold fraction must be >= 0");
    PersistenceDiagram diagram = compute_diagram(field, family);
    double resolved;
    if (threshold) {
        resolved = *threshold;
    } else {
        // AUTO: a fixed fraction of this member's value range.
        const double range =
            field.values.size() > 0
                ? field.values.maxCoeff() - field.values.minCoeff()
                : 0.0;
        resolved = auto_fraction * range;
    }
    diagram = prune_by_persistence(diagram, resolved);
    if (!include_global_pair) {
        auto& pts = diagram.points;
        pts.erase(std::remove_if(pts.begin(), pts.end(),
                                 [](const DiagramPoint& p) {
                                     return p.pair_class ==
                                            PairClass::global_pair;
                                 }),
                  pts.end());
    }
    return diagram;
}

PipelineResult run_pipeline_in_memory(const RunConfig& config) {
    validate_config(config);
    PipelineResult result;
    result.ensemble = make_ensemble(config);
    const int threads = effective_threads(config);
    for (Family fam : families_of(config.family))
        result.families.push_back(
            family_run(result.ensemble, fam, config, threads));
    return result;
}

PipelineResult run_pipeline(const RunConfig& config) {
    validate_config(config);
    PipelineResult result;
    result.ensemble = make_ensemble(config);

    const fs::path out_dir(config.output);
    std::error_code ec;
    fs::create_directories(out_dir / "centroids", ec);
    if (ec)
        throw IoError("cannot create output directory " +
                      (out_dir / "centroids").string() + ": " + ec.message());

    const int threads = effective_threads(config);
    try {
        for (Family fam : families_of(config.family))
            result.families.push_back(
                family_run(result.ensemble, fam, config, threads));
    } catch (const Error& e) {
        // Flush whatever completed before the failure, then re-throw.
        try {
            emit_outputs(config, result, e.what());
        } catch (...) {
            // the original error matters more than a failed flush
        }
        throw;
    }
    emit_outputs(config, result, "");
    return result;
}

} // namespace topoclust
