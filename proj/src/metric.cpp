#include "topoclust/metric.hpp"

#include <cmath>
#include <utility>

#include "topoclust/assignment.hpp"
#include "topoclust/errors.hpp"

namespace topoclust {

namespace {

// Interpolated representative location of a pair: lambda = 0 picks the birth
// location, lambda = 1 the death location.
Eigen::Vector3d lifted_location(const DiagramPoint& p, double lambda) {
    return lambda * p.death_location + (1.0 - lambda) * p.birth_location;
}

} // namespace

double pointwise_distance(const DiagramPoint& a, const DiagramPoint& b,
                          const LiftingParams& lifting, Family family) {
    // Two points that both sit exactly on the diagonal are indistinguishable
    // regardless of their locations.
    if (a.death == a.birth && b.death == b.birth) return 0.0;
    const double db = a.birth - b.birth;
    const double dd = a.death - b.death;
    const double d2sq = db * db + dd * dd;
    if (lifting.alpha == 0.0) return std::sqrt(d2sq);
    const double lambda = lifting.lambda_for(family);
    const double geosq =
        (lifted_location(a, lambda) - lifted_location(b, lambda)).squaredNorm();
    return std::sqrt((1.0 - lifting.alpha) * d2sq + lifting.alpha * geosq);
}

DiagramPoint diagonal_projection(const DiagramPoint& a) {
    DiagramPoint p = a;
    const double mid = 0.5 * (a.birth + a.death);
    p.birth = mid;
    p.death = mid;
    return p;
}

std::pair<double, DiagramAssignment>
wasserstein_distance(const PersistenceDiagram& A, const PersistenceDiagram& B,
                     const LiftingParams& lifting) {
    lifting.validate();
    if (A.family != B.family)
        throw FamilyMismatch(std::string("cannot compare a ") +
                             to_string(A.family) + " diagram with a " +
                             to_string(B.family) + " diagram");
    const Family fam = A.family;
    const int na = int(A.points.size());
    const int nb = int(B.points.size());
    const int n = na + nb;

    DiagramAssignment assignment;
    if (n == 0) return {0.0, std::move(assignment)};

    // Augmented square problem: every point of A may match a point of B or its
    // own diagonal projection, and symmetrically for B. Diagonal slots pair
    // with each other at zero cost. Entries are squared pointwise distances so
    // that the optimal assignment minimises the squared transport cost.
    Eigen::MatrixXd C(n, n);
    std::vector<double> diag_a(na), diag_b(nb);
    for (int i = 0; i < na; ++i) {
        const double d = pointwise_distance(
            A.points[i], diagonal_projection(A.points[i]), lifting, fam);
        diag_a[i] = d * d;
    }
    for (int j = 0; j < nb; ++j) {
        const double d = pointwise_distance(
            B.points[j], diagonal_projection(B.points[j]), lifting, fam);
        diag_b[j] = d * d;
    }
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            const double d =
                pointwise_distance(A.points[i], B.points[j], lifting, fam);
            C(i, j) = d * d;
        }
        for (int j = nb; j < n; ++j) C(i, j) = diag_a[i];
    }
    for (int r = 0; r < nb; ++r) {
        const int row = na + r;
        for (int j = 0; j < nb; ++j) C(row, j) = diag_b[j];
        for (int j = nb; j < n; ++j) C(row, j) = 0.0;
    }

    const std::vector<int> rowsol = solve_assignment(C);

    double total = 0.0;
    for (int i = 0; i < na; ++i) {
        const int j = rowsol[i];
        if (j < nb) {
            assignment.pairs.emplace_back(i, j);
        } else {
            assignment.pairs.emplace_back(i, kDiagonal);
        }
        total += C(i, j);
    }
    for (int r = 0; r < nb; ++r) {
        const int j = rowsol[na + r];
        if (j < nb) {
            assignment.pairs.emplace_back(kDiagonal, j);
            total += C(na + r, j);
        }
        // Diagonal-to-diagonal matches carry no cost and are not reported.
    }
    const double dist = std::sqrt(total);
    assignment.cost = dist;
    return {dist, std::move(assignment)};
}

} // namespace topoclust
