// topoclust: cluster ensembles of scalar fields by the Wasserstein geometry
// of their persistence diagrams, select the cluster count k by AIC/BIC, and
// work with the individual pieces (diagrams, distances, barycenters) from the
// command line.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "topoclust/barycenter.hpp"
#include "topoclust/clustering.hpp"
#include "topoclust/ensemble_io.hpp"
#include "topoclust/errors.hpp"
#include "topoclust/format.hpp"
#include "topoclust/pipeline.hpp"
#include "topoclust/selection.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace topoclust;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

double parse_real(const std::string& token, const std::string& what) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    double v = 0.0;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw InvalidParameter(what + ": '" + token + "' is not a number");
    return v;
}

// Durations: "10s", "500ms", "2m", a bare number of seconds, or
// "inf"/"none"/"unbounded" for no limit.
TimeBudget parse_duration(const std::string& text) {
    const std::string s = lower(text);
    if (s == "inf" || s == "none" || s == "unbounded")
        return TimeBudget::unbounded();
    double scale = 1.0;
    std::string number = s;
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "ms") == 0) {
        scale = 1e-3;
        number = s.substr(0, s.size() - 2);
    } else if (s.size() > 1 && s.back() == 's') {
        number = s.substr(0, s.size() - 1);
    } else if (s.size() > 1 && s.back() == 'm') {
        scale = 60.0;
        number = s.substr(0, s.size() - 1);
    }
    return TimeBudget::seconds(parse_real(number, "duration") * scale);
}

// "auto" (case-insensitive) or a number.
std::optional<double> parse_auto_or_real(const std::string& text,
                                         const std::string& what) {
    if (lower(text) == "auto") return std::nullopt;
    return parse_real(text, what);
}

int parse_threads(const std::string& text) {
    if (lower(text) == "auto") return 0;
    const double v = parse_real(text, "threads");
    if (v < 0 || v != double(int(v)))
        throw InvalidParameter("threads must be a non-negative integer or "
                               "'auto', got '" + text + "'");
    return int(v);
}

FamilySelect parse_family_select(const std::string& text) {
    const std::string s = lower(text);
    if (s == "minima" || s == "min") return FamilySelect::minima;
    if (s == "maxima" || s == "max") return FamilySelect::maxima;
    if (s == "both") return FamilySelect::both;
    throw InvalidParameter("family must be minima, maxima, or both; got '" +
                           text + "'");
}

std::vector<fs::path> list_by_extension(const fs::path& dir,
                                        const std::string& ext) {
    if (!fs::exists(dir))
        throw MissingPath("no such directory: " + dir.string());
    if (!fs::is_directory(dir))
        throw InvalidParameter(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ext)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<PersistenceDiagram> load_diagram_dir(const fs::path& dir) {
    const std::vector<fs::path> files = list_by_extension(dir, ".pdiag");
    if (files.empty())
        throw EmptyInput("directory " + dir.string() +
                         " contains no .pdiag files");
    std::vector<PersistenceDiagram> diagrams;
    diagrams.reserve(files.size());
    for (const fs::path& f : files) diagrams.push_back(load_diagram(f));
    return diagrams;
}

void write_json_or_stdout(const ordered_json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw IoError("cannot open " + out_path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failure on " + out_path);
}

ordered_json scores_to_json(const ScoreReport& report, double dim) {
    ordered_json j;
    j["dim"] = dim;
    ordered_json per_k = ordered_json::object();
    for (const auto& [k, sc] : report.per_k) {
        ordered_json e;
        e["log_likelihood"] = sc.log_likelihood;
        e["sigma2"] = sc.sigma2;
        e["aic"] = sc.aic;
        e["bic"] = sc.bic;
        e["aic_normalized"] = sc.aic_normalized;
        e["bic_normalized"] = sc.bic_normalized;
        per_k[std::to_string(k)] = e;
    }
    j["per_k"] = per_k;
    j["selected_k_aic"] = report.selected_k_aic;
    j["selected_k_bic"] = report.selected_k_bic;
    return j;
}

// ----- run ---------------------------------------------------------------

struct RunOptions {
    std::string input;
    std::string synth;
    std::string family = "maxima";
    int k_min = 1;
    int k_max = 10;
    std::string t_max = "10s";
    double alpha = 0.0;
    std::string pthreshold = "auto";
    std::string dim = "auto";
    bool no_global_pair = false;
    std::uint64_t seed = 0;
    std::string threads = "auto";
    std::string output = ".";
};

void add_run(CLI::App& app, RunOptions& opt) {
    CLI::App* cmd = app.add_subcommand(
        "run", "full pipeline: diagrams -> k sweep -> AIC/BIC selection");
    cmd->add_option("--input", opt.input,
                    "ensemble directory or manifest file");
    cmd->add_option("--synth", opt.synth,
                    "generate instead of load, e.g. "
                    "gaussians:n=30,patterns=3,grid=64x64,noise=0.05");
    cmd->add_option("--family", opt.family,
                    "diagram family: minima, maxima, or both")
        ->capture_default_str();
    cmd->add_option("--kmin", opt.k_min, "smallest k to try")
        ->capture_default_str();
    cmd->add_option("--kmax", opt.k_max, "largest k to try")
        ->capture_default_str();
    cmd->add_option("--tmax", opt.t_max,
                    "time budget per k per family (e.g. 10s, 500ms, inf)")
        ->capture_default_str();
    cmd->add_option("--alpha", opt.alpha,
                    "weight of critical-point locations in the metric [0,1]")
        ->capture_default_str();
    cmd->add_option("--pthreshold", opt.pthreshold,
                    "persistence pruning threshold, or 'auto' (1% of each "
                    "member's value range)")
        ->capture_default_str();
    cmd->add_option("--dim", opt.dim,
                    "effective dimension for scoring, or 'auto' "
                    "(2 * mean point count, floor 2)")
        ->capture_default_str();
    cmd->add_flag("--no-global-pair", opt.no_global_pair,
                  "drop the global min/max pair from every diagram");
    cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    cmd->add_option("--threads", opt.threads,
                    "worker threads for the k sweep, or 'auto'")
        ->envname("TOPOCLUST_THREADS")
        ->capture_default_str();
    cmd->add_option("--output", opt.output, "output directory")
        ->capture_default_str();

    cmd->callback([&opt] {
        RunConfig config;
        config.input = opt.input;
        if (!opt.synth.empty()) config.synth = parse_synth_spec(opt.synth);
        config.family = parse_family_select(opt.family);
        config.k_min = opt.k_min;
        config.k_max = opt.k_max;
        config.t_max = parse_duration(opt.t_max);
        config.alpha = opt.alpha;
        config.persistence_threshold =
            parse_auto_or_real(opt.pthreshold, "pthreshold");
        config.dim_d = parse_auto_or_real(opt.dim, "dim");
        config.include_global_pair = !opt.no_global_pair;
        config.seed = opt.seed;
        config.threads = parse_threads(opt.threads);
        config.output = opt.output;

        const PipelineResult result = run_pipeline(config);
        for (const FamilyRun& run : result.families)
            std::cout << to_string(run.family)
                      << ": selected k (AIC) = " << run.report.selected_k_aic
                      << ", selected k (BIC) = " << run.report.selected_k_bic
                      << "\n";
        std::cout << "report: "
                  << (fs::path(config.output) / "report.json").string()
                  << "\n";
    });
}

// ----- diagram -----------------------------------------------------------

struct DiagramOptions {
    std::string field;
    std::string family = "minima";
    std::string pthreshold = "0";
    bool no_global_pair = false;
    std::string output;
};

void add_diagram(CLI::App& app, DiagramOptions& opt) {
    CLI::App* cmd = app.add_subcommand(
        "diagram", "compute the persistence diagram of one .sfield");
    cmd->add_option("field", opt.field, "input .sfield file")->required();
    cmd->add_option("--family", opt.family, "minima or maxima")
        ->capture_default_str();
    cmd->add_option("--pthreshold", opt.pthreshold,
                    "persistence pruning threshold, or 'auto'")
        ->capture_default_str();
    cmd->add_flag("--no-global-pair", opt.no_global_pair,
                  "drop the global min/max pair");
    cmd->add_option("-o,--output", opt.output,
                    "output .pdiag (default: <field stem>.pdiag)");

    cmd->callback([&opt] {
        const ScalarField field = load_field(opt.field);
        const Family family = family_from_string(lower(opt.family));
        const std::optional<double> threshold =
            parse_auto_or_real(opt.pthreshold, "pthreshold");
        const PersistenceDiagram diagram = pipeline_diagram(
            field, family, threshold, 0.01, !opt.no_global_pair);
        const std::string out = opt.output.empty()
                                    ? fs::path(opt.field).stem().string() +
                                          ".pdiag"
                                    : opt.output;
        save_diagram(diagram, out);
        std::cout << "wrote " << out << " (" << diagram.points.size()
                  << " points)\n";
    });
}

// ----- distance ----------------------------------------------------------

struct DistanceOptions {
    std::string a, b;
    double alpha = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 1.0;
};

void add_distance(CLI::App& app, DistanceOptions& opt) {
    CLI::App* cmd = app.add_subcommand(
        "distance", "Wasserstein distance between two .pdiag files");
    cmd->add_option("a", opt.a, "first .pdiag")->required();
    cmd->add_option("b", opt.b, "second .pdiag")->required();
    cmd->add_option("--alpha", opt.alpha, "location weight [0,1]")
        ->capture_default_str();
    cmd->add_option("--lambda-min", opt.lambda_min,
                    "location interpolation for minima diagrams [0,1]")
        ->capture_default_str();
    cmd->add_option("--lambda-max", opt.lambda_max,
                    "location interpolation for maxima diagrams [0,1]")
        ->capture_default_str();

    cmd->callback([&opt] {
        const PersistenceDiagram A = load_diagram(opt.a);
        const PersistenceDiagram B = load_diagram(opt.b);
        LiftingParams lifting;
        lifting.alpha = opt.alpha;
        lifting.lambda_min = opt.lambda_min;
        lifting.lambda_max = opt.lambda_max;
        const auto [dist, assignment] = wasserstein_distance(A, B, lifting);
        (void)assignment;
        std::cout << format_double(dist) << "\n";
    });
}

// ----- barycenter --------------------------------------------------------

struct BarycenterOptions {
    std::string dir;
    std::string t_max = "inf";
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::string output = "barycenter.pdiag";
};

void add_barycenter(CLI::App& app, BarycenterOptions& opt) {
    CLI::App* cmd = app.add_subcommand(
        "barycenter", "Wasserstein barycenter of a directory of .pdiag files");
    cmd->add_option("dir", opt.dir, "directory of .pdiag files")->required();
    cmd->add_option("--tmax", opt.t_max, "time budget (e.g. 5s, inf)")
        ->capture_default_str();
    cmd->add_option("--alpha", opt.alpha, "location weight [0,1]")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    cmd->add_option("-o,--output", opt.output, "output .pdiag")
        ->capture_default_str();

    cmd->callback([&opt] {
        const std::vector<PersistenceDiagram> diagrams =
            load_diagram_dir(opt.dir);
        LiftingParams lifting;
        lifting.alpha = opt.alpha;
        const BarycenterResult result = barycenter(
            diagrams, lifting, parse_duration(opt.t_max), opt.seed);
        save_diagram(result.centroid, opt.output);
        std::cout << "wrote " << opt.output << " ("
                  << result.centroid.points.size() << " points)\n"
                  << "energy " << format_double(result.frechet_energy)
                  << ", iterations " << result.iterations << ", converged "
                  << (result.converged ? "true" : "false") << "\n";
    });
}

// ----- cluster -----------------------------------------------------------

struct ClusterOptions {
    std::string dir;
    int k = 0;
    std::string t_max = "inf";
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::string output;
    std::string centroids_dir;
};

ordered_json clustering_to_json(const ClusteringResult& result,
                                const std::vector<PersistenceDiagram>& diagrams,
                                const std::vector<fs::path>& files) {
    ordered_json j;
    j["k"] = result.k;
    j["n"] = result.assignment.size();
    j["family"] = diagrams.empty() ? "minima" : to_string(diagrams[0].family);
    ordered_json names = ordered_json::array();
    for (const fs::path& f : files) names.push_back(f.filename().string());
    j["member_files"] = names;
    ordered_json counts = ordered_json::array();
    for (const PersistenceDiagram& d : diagrams) counts.push_back(d.points.size());
    j["member_point_counts"] = counts;
    j["assignment"] = result.assignment;
    j["distances"] = result.distances;
    j["inertia"] = result.inertia;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["elapsed_seconds"] = result.elapsed_seconds;
    return j;
}

void add_cluster(CLI::App& app, ClusterOptions& opt) {
    CLI::App* cmd = app.add_subcommand(
        "cluster", "k-means over a directory of .pdiag files");
    cmd->add_option("dir", opt.dir, "directory of .pdiag files")->required();
    cmd->add_option("--k", opt.k, "number of clusters")->required();
    cmd->add_option("--tmax", opt.t_max, "time budget (e.g. 10s, inf)")
        ->capture_default_str();
    cmd->add_option("--alpha", opt.alpha, "location weight [0,1]")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    cmd->add_option("-o,--output", opt.output,
                    "write the clustering JSON here instead of stdout");
    cmd->add_option("--centroids-dir", opt.centroids_dir,
                    "also save centroid diagrams into this directory");

    cmd->callback([&opt] {
        const std::vector<fs::path> files =
            list_by_extension(opt.dir, ".pdiag");
        const std::vector<PersistenceDiagram> diagrams =
            load_diagram_dir(opt.dir);
        LiftingParams lifting;
        lifting.alpha = opt.alpha;
        const ClusteringResult result =
            cluster(diagrams, opt.k, lifting, parse_duration(opt.t_max),
                    opt.seed);
        if (!opt.centroids_dir.empty()) {
            std::error_code ec;
            fs::create_directories(opt.centroids_dir, ec);
            if (ec)
                throw IoError("cannot create directory " + opt.centroids_dir +
                              ": " + ec.message());
            for (int c = 0; c < int(result.centroids.size()); ++c)
                save_diagram(result.centroids[c],
                             fs::path(opt.centroids_dir) /
                                 ("centroid_" + std::to_string(c) + ".pdiag"));
        }
        write_json_or_stdout(clustering_to_json(result, diagrams, files),
                             opt.output);
    });
}

// ----- select ------------------------------------------------------------

struct SelectOptions {
    std::string dir;
    int k_min = 1;
    int k_max = 10;
    std::string dim = "auto";
    std::string t_max = "inf";
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::string output;
};

ClusteringResult clustering_from_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string() + " for reading");
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
    ClusteringResult result;
    try {
        result.k = j.at("k").get<int>();
        result.assignment = j.at("assignment").get<std::vector<int>>();
        result.distances = j.at("distances").get<std::vector<double>>();
    } catch (const std::exception& e) {
        throw ParseError(file.string() +
                         ": not a clustering file: " + e.what());
    }
    result.inertia = 0.0;
    for (double d : result.distances) result.inertia += d * d;
    result.iterations = j.value("iterations", 0);
    result.converged = j.value("converged", false);
    return result;
}

void add_select(CLI::App& app, SelectOptions& opt) {
    CLI::App* cmd = app.add_subcommand(
        "select",
        "score clusterings (AIC/BIC) and pick k; reads the clustering JSON "
        "files in dir, or sweeps k over the .pdiag files found there");
    cmd->add_option("dir", opt.dir,
                    "directory of clustering .json files or of .pdiag files")
        ->required();
    cmd->add_option("--kmin", opt.k_min, "smallest k (pdiag mode)")
        ->capture_default_str();
    cmd->add_option("--kmax", opt.k_max, "largest k (pdiag mode)")
        ->capture_default_str();
    cmd->add_option("--dim", opt.dim,
                    "effective dimension, or 'auto' (from point counts)")
        ->capture_default_str();
    cmd->add_option("--tmax", opt.t_max, "time budget per k (pdiag mode)")
        ->capture_default_str();
    cmd->add_option("--alpha", opt.alpha, "location weight (pdiag mode)")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "random seed (pdiag mode)")
        ->capture_default_str();
    cmd->add_option("-o,--output", opt.output,
                    "write the score report here instead of stdout");

    cmd->callback([&opt] {
        const std::optional<double> dim_opt =
            parse_auto_or_real(opt.dim, "dim");
        const std::vector<fs::path> json_files =
            list_by_extension(opt.dir, ".json");

        if (!json_files.empty()) {
            // Precomputed clusterings: score them as-is.
            std::vector<ClusteringResult> results;
            std::vector<double> mean_counts;
            for (const fs::path& f : json_files) {
                results.push_back(clustering_from_json(f));
                std::ifstream in(f);
                ordered_json j;
                in >> j;
                if (j.contains("member_point_counts")) {
                    double total = 0.0;
                    for (const auto& c : j["member_point_counts"])
                        total += c.get<double>();
                    mean_counts.push_back(total /
                                          double(j["member_point_counts"].size()));
                }
            }
            std::sort(results.begin(), results.end(),
                      [](const ClusteringResult& a, const ClusteringResult& b) {
                          return a.k < b.k;
                      });
            double dim;
            if (dim_opt) {
                dim = *dim_opt;
            } else {
                if (mean_counts.empty())
                    throw InvalidParameter(
                        "--dim auto needs member_point_counts in the "
                        "clustering files; pass --dim explicitly");
                dim = std::max(2.0, 2.0 * mean_counts.front());
            }
            write_json_or_stdout(scores_to_json(select_k(results, dim), dim),
                                 opt.output);
            return;
        }

        // No clustering files: sweep the diagrams found in the directory.
        const std::vector<PersistenceDiagram> diagrams =
            load_diagram_dir(opt.dir);
        LiftingParams lifting;
        lifting.alpha = opt.alpha;
        const std::vector<ClusteringResult> results =
            sweep(diagrams, opt.k_min, opt.k_max, lifting,
                  parse_duration(opt.t_max), opt.seed);
        double total = 0.0;
        for (const PersistenceDiagram& d : diagrams)
            total += double(d.points.size());
        const double dim =
            dim_opt ? *dim_opt
                    : std::max(2.0, 2.0 * total / double(diagrams.size()));
        write_json_or_stdout(scores_to_json(select_k(results, dim), dim),
                             opt.output);
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluster scalar-field ensembles by persistence diagrams"};
    app.require_subcommand(1);

    RunOptions run_opt;
    DiagramOptions diagram_opt;
    DistanceOptions distance_opt;
    BarycenterOptions barycenter_opt;
    ClusterOptions cluster_opt;
    SelectOptions select_opt;
    add_run(app, run_opt);
    add_diagram(app, diagram_opt);
    add_distance(app, distance_opt);
    add_barycenter(app, barycenter_opt);
    add_cluster(app, cluster_opt);
    add_select(app, select_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
