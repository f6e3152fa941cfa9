#pragma once
#include <cstdint>
#include <vector>

#include "topoclust/barycenter.hpp"
#include "topoclust/diagram.hpp"
#include "topoclust/metric.hpp"
#include "topoclust/time_budget.hpp"

namespace topoclust {

// Outcome of k-means over diagrams. assignment[i] is the cluster of input i;
// distances[i] is W2(D_i, centroid of that cluster); inertia is the sum of
// squared distances. The returned state is always self-consistent: distances
// are measured against the returned centroids.
struct ClusteringResult {
    int k = 0;
    std::vector<PersistenceDiagram> centroids;
    std::vector<int> assignment;
    std::vector<double> distances;
    double inertia = 0.0;
    int iterations = 0;
    bool converged = false;
    double elapsed_seconds = 0.0;
};

// k-means over persistence diagrams: alternates nearest-centroid assignment
// (under W2) with per-cluster barycenter updates until the assignment map
// stops changing, the iteration cap is hit, or the budget expires (best
// consistent state so far is returned, converged=false).
//
// Centroids are seeded k-means++-style from the input set: the first is the
// diagram of median total persistence, each next is drawn with probability
// proportional to its squared distance to the nearest chosen centroid, using
// a generator seeded from `seed`. Empty clusters are re-seeded with the
// globally worst-fit diagram. The per-call budget is split roughly 20%
// assignment / 80% updates, with the whole-call deadline taking precedence.
ClusteringResult cluster(const std::vector<PersistenceDiagram>& diagrams,
                         int k, const LiftingParams& lifting = {},
                         const TimeBudget& budget = {}, std::uint64_t seed = 0);

// Runs cluster() once per k in [k_min, k_max], each with its own budget and
// the same seed. With threads > 1 the per-k runs execute concurrently; the
// results are bit-identical to sequential execution.
std::vector<ClusteringResult>
sweep(const std::vector<PersistenceDiagram>& diagrams, int k_min, int k_max,
      const LiftingParams& lifting = {}, const TimeBudget& budget_per_k = {},
      std::uint64_t seed = 0, int threads = 1);

} // namespace topoclust
