#pragma once
#include <cstdint>
#include <vector>

#include "topoclust/diagram.hpp"
#include "topoclust/metric.hpp"
#include "topoclust/time_budget.hpp"

namespace topoclust {

// Outcome of a barycenter computation. frechet_energy is
// sum_i W2(centroid, D_i)^2 for the returned centroid. energy_trace records
// the energy after every completed assignment round and is non-increasing.
struct BarycenterResult {
    PersistenceDiagram centroid;
    double frechet_energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double elapsed_seconds = 0.0;
    std::vector<double> energy_trace;
};

// Computes the Wasserstein barycenter (Frechet mean) of the given diagrams by
// alternating optimal assignment against every input with an arithmetic mean
// update of the centroid points, starting from the input diagram of median
// total persistence. Under a bounded budget the best state reached so far is
// returned (converged=false); the first assignment round always completes, so
// the call overshoots the budget by at most one round. seed is reserved for
// tie-breaking and does not influence the converged centroid.
BarycenterResult barycenter(const std::vector<PersistenceDiagram>& diagrams,
                            const LiftingParams& lifting = {},
                            const TimeBudget& budget = {},
                            std::uint64_t seed = 0);

namespace detail {

// Same iteration as barycenter() but starting from an explicit initial
// centroid; used by the clustering update step to warm-start each cluster's
// barycenter at its current centroid (which guarantees the cluster energy
// cannot increase).
BarycenterResult
barycenter_from(PersistenceDiagram init,
                const std::vector<PersistenceDiagram>& diagrams,
                const LiftingParams& lifting, const TimeBudget& budget);

// Index of the diagram whose total persistence is the (lower) median of the
// input set; ties are broken by diagram content, so the choice does not
// depend on input order. Used to seed barycenter() and cluster().
int median_total_persistence_index(
    const std::vector<PersistenceDiagram>& diagrams);

} // namespace detail

} // namespace topoclust
