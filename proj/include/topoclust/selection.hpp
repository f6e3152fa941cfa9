#pragma once
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "topoclust/clustering.hpp"

namespace topoclust {

// Scores for one clustering under the shared-variance spherical Gaussian
// model. Normalized values divide by the k=1 value and are NaN when k=1 was
// not part of the scored range.
struct PerKScore {
    double log_likelihood = 0.0;
    double sigma2 = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double aic_normalized = std::numeric_limits<double>::quiet_NaN();
    double bic_normalized = std::numeric_limits<double>::quiet_NaN();
};

struct ScoreReport {
    std::map<int, PerKScore> per_k;
    int selected_k_aic = 0;
    int selected_k_bic = 0;
};

// Log-likelihood of a clustering with n diagrams in k clusters of sizes n_j,
// in a diagram space of effective dimension d:
//   sigma2 = (1 / (d (n - k))) * sum_i distances[i]^2
//   L = sum_j n_j log n_j - n log n - (n d / 2) log(2 pi sigma2) - (d/2)(n - k)
// Returns (L, sigma2). Throws KEqualsN when n == k and DegenerateVariance
// when sigma2 == 0 (all diagrams coincide with their centroids).
std::pair<double, double> log_likelihood(const ClusteringResult& result,
                                         double d);

struct Scores {
    double aic = 0.0;
    double bic = 0.0;
};

// aic = -2L + 2kd; bic = -2L + kd log n.
Scores score(const ClusteringResult& result, double d);

// Scores every clustering of a consecutive k range over one diagram set and
// selects the argmin of each criterion (ties broken toward smaller k).
// Normalized curves are filled in when k=1 is present. Throws
// InconsistentInputs when results disagree on n or ks are not consecutive.
ScoreReport select_k(const std::vector<ClusteringResult>& results, double d);

} // namespace topoclust
