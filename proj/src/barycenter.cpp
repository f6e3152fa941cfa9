#include "topoclust/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "topoclust/errors.hpp"
#include "topoclust/metric.hpp"

namespace topoclust {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kRelativeEnergyTol = 1e-8;

bool same_pairs(const std::vector<DiagramAssignment>& a,
                const std::vector<DiagramAssignment>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].pairs != b[i].pairs) return false;
    return true;
}

// If an update produced several global pairs (possible only for adversarial
// inputs where a global matches a regular point), keep the most persistent
// one and demote the rest to the family's regular class so the centroid stays
// a valid diagram. Ties pick the point_less-smallest.
void normalize_globals(PersistenceDiagram& d) {
    int best = -1;
    for (int i = 0; i < int(d.points.size()); ++i) {
        if (d.points[i].pair_class != PairClass::global_pair) continue;
        if (best == -1 ||
            d.points[i].persistence() > d.points[best].persistence() ||
            (d.points[i].persistence() == d.points[best].persistence() &&
             point_less(d.points[i], d.points[best])))
            best = i;
    }
    if (best == -1) return;
    const PairClass regular = d.family == Family::minima
                                  ? PairClass::min_saddle
                                  : PairClass::saddle_max;
    for (int i = 0; i < int(d.points.size()); ++i)
        if (i != best && d.points[i].pair_class == PairClass::global_pair)
            d.points[i].pair_class = regular;
}

} // namespace

namespace detail {

int median_total_persistence_index(
    const std::vector<PersistenceDiagram>& diagrams) {
    const int n = int(diagrams.size());
    std::vector<double> tp(n);
    for (int i = 0; i < n; ++i) tp[i] = diagrams[i].total_persistence();
    std::vector<double> sorted = tp;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[(n - 1) / 2];
    int best = -1;
    for (int i = 0; i < n; ++i) {
        if (tp[i] != median) continue;
        if (best == -1 || diagram_content_less(diagrams[i], diagrams[best]))
            best = i;
    }
    return best;
}

BarycenterResult
barycenter_from(PersistenceDiagram init,
                const std::vector<PersistenceDiagram>& diagrams,
                const LiftingParams& lifting, const TimeBudget& budget) {
    const Deadline deadline(budget);
    const int n = int(diagrams.size());
    BarycenterResult result;
    PersistenceDiagram centroid = std::move(init);

    std::vector<DiagramAssignment> prev_assignments;
    double prev_energy = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        // Assignment round: one optimal matching per input diagram. The
        // budget is checked between matchings only once a first full round
        // has produced a consistent snapshot, so that snapshot always exists.
        std::vector<DiagramAssignment> assignments(n);
        double energy = 0.0;
        bool out_of_time = false;
        for (int i = 0; i < n; ++i) {
            if (result.iterations > 0 && deadline.expired()) {
                out_of_time = true;
                break;
            }
            auto [dist, match] =
                wasserstein_distance(centroid, diagrams[i], lifting);
            energy += dist * dist;
            assignments[i] = std::move(match);
        }
        if (out_of_time) break; // keep the previous round's snapshot

        result.iterations = iter;
        result.centroid = centroid;
        result.frechet_energy = energy;
        result.energy_trace.push_back(energy);

        if (energy == 0.0) {
            result.converged = true;
            break;
        }
        const bool stable =
            !prev_assignments.empty() && same_pairs(prev_assignments, assignments);
        // prev_energy is +inf on the first round, which correctly fails this.
        const bool settled = prev_energy - energy <= kRelativeEnergyTol * prev_energy;
        if (stable && settled) {
            result.converged = true;
            break;
        }
        if (iter == kMaxIterations) break;
        if (deadline.expired()) break;

        // Update step: each centroid point moves to the arithmetic mean of
        // its matched partners (unmatched occurrences contribute the point's
        // own diagonal projection); input points matched to the diagonal
        // spawn a new centroid point pulled 1/n of the way off the diagonal.
        const int nc = int(centroid.points.size());
        std::vector<double> sum_birth(nc, 0.0), sum_death(nc, 0.0);
        std::vector<Eigen::Vector3d> sum_bloc(nc, Eigen::Vector3d::Zero());
        std::vector<Eigen::Vector3d> sum_dloc(nc, Eigen::Vector3d::Zero());
        PersistenceDiagram next;
        next.family = centroid.family;
        next.source_name = centroid.source_name;

        for (int i = 0; i < n; ++i) {
            for (const auto& [c, j] : assignments[i].pairs) {
                if (c == kDiagonal) continue;
                const DiagramPoint partner =
                    j == kDiagonal ? diagonal_projection(centroid.points[c])
                                   : diagrams[i].points[j];
                sum_birth[c] += partner.birth;
                sum_death[c] += partner.death;
                sum_bloc[c] += partner.birth_location;
                sum_dloc[c] += partner.death_location;
            }
        }
        for (int c = 0; c < nc; ++c) {
            DiagramPoint p;
            p.birth = sum_birth[c] / n;
            p.death = sum_death[c] / n;
            if (!(p.death - p.birth > 0.0)) continue; // collapsed onto diagonal
            p.birth_location = sum_bloc[c] / n;
            p.death_location = sum_dloc[c] / n;
            p.pair_class = centroid.points[c].pair_class;
            next.points.push_back(std::move(p));
        }
        for (int i = 0; i < n; ++i) {
            for (const auto& [c, j] : assignments[i].pairs) {
                if (c != kDiagonal) continue;
                const DiagramPoint& q = diagrams[i].points[j];
                const double mid = 0.5 * (q.birth + q.death);
                DiagramPoint p;
                p.birth = (q.birth + (n - 1) * mid) / n;
                p.death = (q.death + (n - 1) * mid) / n;
                if (!(p.death - p.birth > 0.0)) continue;
                p.birth_location = q.birth_location;
                p.death_location = q.death_location;
                p.pair_class = q.pair_class;
                next.points.push_back(std::move(p));
            }
        }
        normalize_globals(next);

        centroid = std::move(next);
        prev_assignments = std::move(assignments);
        prev_energy = energy;
    }

    result.elapsed_seconds = deadline.elapsed_seconds();
    return result;
}

} // namespace detail

BarycenterResult barycenter(const std::vector<PersistenceDiagram>& diagrams,
                            const LiftingParams& lifting,
                            const TimeBudget& budget, std::uint64_t seed) {
    (void)seed; // reserved; the deterministic median seed needs no randomness
    lifting.validate();
    if (diagrams.empty())
        throw EmptyInput("barycenter needs at least one diagram");
    for (std::size_t i = 1; i < diagrams.size(); ++i)
        if (diagrams[i].family != diagrams[0].family)
            throw FamilyMismatch("barycenter inputs mix minima and maxima");

    PersistenceDiagram init =
        diagrams[detail::median_total_persistence_index(diagrams)];
    init.source_name = "barycenter";
    return detail::barycenter_from(std::move(init), diagrams, lifting, budget);
}

} // namespace topoclust
