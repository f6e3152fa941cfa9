#pragma once
#include <utility>
#include <vector>

#include "topoclust/diagram.hpp"
#include "topoclust/errors.hpp"

namespace topoclust {

// Parameters of the geometrically lifted metric. alpha blends the birth/death
// distance (weight 1-alpha) with the Euclidean distance between interpolated
// critical-point locations (weight alpha). The interpolation parameter lambda
// picks a point between the birth location (lambda=0) and the death location
// (lambda=1); it is resolved per family: lambda_min for minima diagrams,
// lambda_max for maxima diagrams.
struct LiftingParams {
    double alpha = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 1.0;

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw InvalidParameter("alpha must be in [0,1]");
        if (!(lambda_min >= 0.0 && lambda_min <= 1.0) ||
            !(lambda_max >= 0.0 && lambda_max <= 1.0))
            throw InvalidParameter("lambda must be in [0,1]");
    }

    double lambda_for(Family f) const {
        return f == Family::minima ? lambda_min : lambda_max;
    }
};

// Index value marking "matched to the diagonal" in an assignment pair.
inline constexpr int kDiagonal = -1;

// An optimal matching between two diagrams. Each pair is (index into A or
// kDiagonal, index into B or kDiagonal); every off-diagonal point of A and of
// B appears exactly once. cost is the square root of the summed squared
// pointwise distances over all pairs.
struct DiagramAssignment {
    std::vector<std::pair<int, int>> pairs;
    double cost = 0.0;
};

// Distance between two diagram points: sqrt((1-alpha)*d2^2 + alpha*geo^2)
// where d2 is the Euclidean distance in (birth, death) space and geo is the
// Euclidean distance between the lambda-interpolated critical-point locations.
// Returns 0 when both points lie exactly on the diagonal. family selects the
// lambda used for the location interpolation.
double pointwise_distance(const DiagramPoint& a, const DiagramPoint& b,
                          const LiftingParams& lifting, Family family);

// Orthogonal projection of a point onto the diagonal; locations are inherited
// from the source point, so projecting a point and matching it against itself
// never incurs a geometric cost.
DiagramPoint diagonal_projection(const DiagramPoint& a);

// Exact 2-Wasserstein distance between two diagrams of the same family,
// where every point may alternatively match its own diagonal projection.
// Returns the distance together with the achieving assignment.
std::pair<double, DiagramAssignment>
wasserstein_distance(const PersistenceDiagram& A, const PersistenceDiagram& B,
                     const LiftingParams& lifting = {});

} // namespace topoclust
