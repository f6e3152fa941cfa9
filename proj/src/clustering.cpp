#include "topoclust/clustering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "topoclust/errors.hpp"
#include "topoclust/metric.hpp"

namespace topoclust {

namespace {

constexpr int kMaxIterations = 100;
// Fraction of the remaining budget reserved for the update (barycenter) work
// of one iteration; the rest covers the assignment phase that follows.
constexpr double kUpdateBudgetShare = 0.8;
constexpr double kMinSliceSeconds = 1e-6;

double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

std::string centroid_name(int j) { return "centroid_" + std::to_string(j); }

} // namespace

ClusteringResult cluster(const std::vector<PersistenceDiagram>& diagrams,
                         int k, const LiftingParams& lifting,
                         const TimeBudget& budget, std::uint64_t seed) {
    lifting.validate();
    const int n = int(diagrams.size());
    if (n == 0) throw EmptyInput("cluster needs at least one diagram");
    for (int i = 1; i < n; ++i)
        if (diagrams[i].family != diagrams[0].family)
            throw FamilyMismatch("clustering inputs mix minima and maxima");
    if (k < 1 || k > n)
        throw InvalidK("k must be in 1.." + std::to_string(n) + ", got " +
                       std::to_string(k));

    const Deadline deadline(budget);
    ClusteringResult res;
    res.k = k;

    if (k == n) {
        // Every diagram is its own cluster; the optimum is immediate.
        res.centroids = diagrams;
        res.assignment.resize(n);
        std::iota(res.assignment.begin(), res.assignment.end(), 0);
        res.distances.assign(n, 0.0);
        res.inertia = 0.0;
        res.iterations = 0;
        res.converged = true;
        res.elapsed_seconds = deadline.elapsed_seconds();
        return res;
    }

    // k-means++ seeding: deterministic first pick, then squared-distance
    // sampling for the rest.
    std::vector<int> chosen;
    chosen.reserve(k);
    std::vector<char> is_chosen(n, 0);
    const int first = detail::median_total_persistence_index(diagrams);
    chosen.push_back(first);
    is_chosen[first] = 1;
    std::vector<double> d2(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (i == first) continue;
        const double d = wasserstein_distance(diagrams[i], diagrams[first],
                                              lifting).first;
        d2[i] = d * d;
    }
    std::mt19937_64 rng(seed);
    while (int(chosen.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            if (!is_chosen[i]) total += d2[i];
        int next = -1;
        if (total > 0.0) {
            const double r = uniform01(rng) * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                if (is_chosen[i]) continue;
                acc += d2[i];
                if (acc > r) {
                    next = i;
                    break;
                }
            }
            if (next == -1) {
                // Rounding pushed r to the top of the prefix sums; take the
                // last index that still has mass.
                for (int i = n - 1; i >= 0; --i)
                    if (!is_chosen[i] && d2[i] > 0.0) {
                        next = i;
                        break;
                    }
            }
        }
        if (next == -1) {
            // All remaining diagrams coincide with a chosen centroid.
            for (int i = 0; i < n; ++i)
                if (!is_chosen[i]) {
                    next = i;
                    break;
                }
        }
        chosen.push_back(next);
        is_chosen[next] = 1;
        for (int i = 0; i < n; ++i) {
            if (is_chosen[i]) continue;
            const double d = wasserstein_distance(diagrams[i], diagrams[next],
                                                  lifting).first;
            d2[i] = std::min(d2[i], d * d);
        }
    }
    std::vector<PersistenceDiagram> centroids;
    centroids.reserve(k);
    for (int j = 0; j < k; ++j) {
        centroids.push_back(diagrams[chosen[j]]);
        centroids.back().source_name = centroid_name(j);
    }

    // Main loop. Phases run to completion once started; the deadline is only
    // consulted between phases, so the returned snapshot is always internally
    // consistent (distances measured against the returned centroids).
    std::vector<int> prev_assignment;
    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        std::vector<int> assignment(n);
        std::vector<double> dists(n);
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < k; ++j) {
                const double d =
                    wasserstein_distance(diagrams[i], centroids[j], lifting)
                        .first;
                if (d < best_d) { // strict: ties keep the smaller index
                    best_d = d;
                    best = j;
                }
            }
            assignment[i] = best;
            dists[i] = best_d;
        }

        // Re-seed empty clusters with the worst-fitting diagram (never one
        // that is alone in its cluster, which would just move the hole).
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) ++counts[assignment[i]];
        for (int j = 0; j < k; ++j) {
            if (counts[j] > 0) continue;
            int worst = -1;
            for (int i = 0; i < n; ++i) {
                if (counts[assignment[i]] <= 1) continue;
                if (worst == -1 || dists[i] > dists[worst]) worst = i;
            }
            --counts[assignment[worst]];
            assignment[worst] = j;
            counts[j] = 1;
            centroids[j] = diagrams[worst];
            centroids[j].source_name = centroid_name(j);
            dists[worst] = 0.0;
        }

        double inertia = 0.0;
        for (int i = 0; i < n; ++i) inertia += dists[i] * dists[i];
        res.centroids = centroids;
        res.assignment = assignment;
        res.distances = dists;
        res.inertia = inertia;
        res.iterations = iter;

        if (assignment == prev_assignment) {
            res.converged = true;
            break;
        }
        if (iter == kMaxIterations) break;
        if (deadline.expired()) break;

        // Update phase: warm-started barycenter per cluster. Each cluster
        // gets an equal slice of the reserved share of the remaining budget;
        // the overall deadline still caps every slice.
        const bool bounded = budget.bounded();
        const double slice =
            bounded ? std::max(kMinSliceSeconds,
                               kUpdateBudgetShare *
                                   deadline.remaining_seconds() / k)
                    : 0.0;
        for (int j = 0; j < k; ++j) {
            std::vector<PersistenceDiagram> members;
            for (int i = 0; i < n; ++i)
                if (assignment[i] == j) members.push_back(diagrams[i]);
            TimeBudget sub; // unbounded unless the whole call is bounded
            if (bounded)
                sub = TimeBudget::seconds(
                    std::max(kMinSliceSeconds,
                             std::min(slice, deadline.remaining_seconds())));
            centroids[j] = detail::barycenter_from(std::move(centroids[j]),
                                                   members, lifting, sub)
                               .centroid;
            centroids[j].source_name = centroid_name(j);
        }
        prev_assignment = std::move(assignment);
    }

    res.elapsed_seconds = deadline.elapsed_seconds();
    return res;
}

std::vector<ClusteringResult>
sweep(const std::vector<PersistenceDiagram>& diagrams, int k_min, int k_max,
      const LiftingParams& lifting, const TimeBudget& budget_per_k,
      std::uint64_t seed, int threads) {
    if (diagrams.empty()) throw EmptyInput("sweep needs at least one diagram");
    if (k_min < 1 || k_min > k_max)
        throw InvalidK("need 1 <= k_min <= k_max, got k_min=" +
                       std::to_string(k_min) + " k_max=" +
                       std::to_string(k_max));
    if (k_max > int(diagrams.size()))
        throw InvalidK("k_max=" + std::to_string(k_max) +
                       " exceeds the number of diagrams (" +
                       std::to_string(diagrams.size()) + ")");

    const int count = k_max - k_min + 1;
    std::vector<ClusteringResult> results(count);
    const int workers = std::min(std::max(threads, 1), count);
    if (workers <= 1) {
        for (int t = 0; t < count; ++t)
            results[t] = cluster(diagrams, k_min + t, lifting, budget_per_k, seed);
        return results;
    }

    // Each k is an independent job; results land in fixed slots, so the
    // output order (and content) matches the sequential run.
    std::atomic<int> next_job{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const int t = next_job.fetch_add(1);
                if (t >= count) return;
                try {
                    results[t] =
                        cluster(diagrams, k_min + t, lifting, budget_per_k, seed);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

} // namespace topoclust
