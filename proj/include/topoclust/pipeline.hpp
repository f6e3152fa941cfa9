#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "topoclust/diagram.hpp"
#include "topoclust/ensemble_io.hpp"
#include "topoclust/selection.hpp"
#include "topoclust/time_budget.hpp"

namespace topoclust {

// Which diagram families the pipeline processes and scores.
enum class FamilySelect { minima, maxima, both };

inline const char* to_string(FamilySelect f) {
    switch (f) {
    case FamilySelect::minima: return "minima";
    case FamilySelect::maxima: return "maxima";
    default: return "both";
    }
}

// Parameters of the built-in Gaussians generator, as parsed from a
// "gaussians:n=30,patterns=3,grid=64x64,noise=0.05" spec string.
struct SynthSpec {
    int n_members = 30;
    int n_patterns = 3;
    std::array<int, 3> grid{64, 64, 1};
    double noise_sigma = 0.05;
};

SynthSpec parse_synth_spec(const std::string& spec);

// Full configuration of a pipeline run. Exactly one of `input` (path to an
// ensemble directory or manifest) and `synth` must be set.
struct RunConfig {
    std::string input;
    std::optional<SynthSpec> synth;
    FamilySelect family = FamilySelect::maxima;
    int k_min = 1;
    int k_max = 10;
    TimeBudget t_max = TimeBudget::seconds(10.0);  // per k, per family
    double alpha = 0.0;
    std::optional<double> persistence_threshold;   // nullopt = AUTO
    double auto_threshold_fraction = 0.01;         // AUTO = fraction of member range
    std::optional<double> dim_d;                   // nullopt = AUTO
    bool include_global_pair = true;
    std::uint64_t seed = 0;
    int threads = 0;                               // 0 = AUTO (hardware)
    std::string output = ".";
};

// Per-family pipeline products, exposed for tests and the CLI.
struct FamilyRun {
    Family family = Family::maxima;
    double dim = 0.0;
    double mean_point_count = 0.0;
    std::vector<PersistenceDiagram> diagrams;
    std::vector<ClusteringResult> clusterings;
    ScoreReport report;
};

struct PipelineResult {
    Ensemble ensemble;
    std::vector<FamilyRun> families;
};

// Computes diagrams for the configured families of the input ensemble, prunes
// them, sweeps k over [k_min, k_max] under the per-k budget, scores each k,
// and selects k per criterion. Throws on any error. No files are written.
PipelineResult run_pipeline_in_memory(const RunConfig& config);

// run_pipeline_in_memory plus report emission into config.output:
//   report.json                        full run report (schema in README)
//   scores_<family>_<criterion>.dat    two columns "k value", normalized to k=1
//   centroids/<family>_k<K>_c<J>.pdiag centroid diagrams
// On a module error after partial progress, the partial report is flushed
// with an "error" field before the exception propagates.
PipelineResult run_pipeline(const RunConfig& config);

// Effective pruned diagrams of one field under the config's threshold policy
// (shared by run and the single-file CLI subcommands).
PersistenceDiagram pipeline_diagram(const ScalarField& field, Family family,
                                    std::optional<double> threshold,
                                    double auto_fraction,
                                    bool include_global_pair);

} // namespace topoclust
