#include "topoclust/selection.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "topoclust/errors.hpp"

namespace topoclust {

std::pair<double, double> log_likelihood(const ClusteringResult& result,
                                         double d) {
    const int n = int(result.assignment.size());
    if (n == 0) throw EmptyInput("clustering has no assignments to score");
    if (!(d > 0.0)) throw InvalidParameter("effective dimension d must be > 0");
    const int k = result.k;
    if (k == n)
        throw KEqualsN("k == n leaves zero degrees of freedom for the "
                       "variance estimate");
    if (k < 1 || k > n)
        throw InvalidK("k must be in 1.." + std::to_string(n) + ", got " +
                       std::to_string(k));
    if (int(result.distances.size()) != n)
        throw InconsistentInputs("distances size " +
                                 std::to_string(result.distances.size()) +
                                 " does not match assignment size " +
                                 std::to_string(n));

    std::vector<std::int64_t> counts(k, 0);
    for (int i = 0; i < n; ++i) {
        const int j = result.assignment[i];
        if (j < 0 || j >= k)
            throw InconsistentInputs("assignment value " + std::to_string(j) +
                                     " outside 0.." + std::to_string(k - 1));
        ++counts[j];
    }

    double sum_sq = 0.0;
    for (double dist : result.distances) sum_sq += dist * dist;
    const double sigma2 = sum_sq / (d * double(n - k));
    if (sigma2 == 0.0)
        throw DegenerateVariance("every diagram coincides with its centroid; "
                                 "the variance estimate is zero");

    double L = 0.0;
    for (std::int64_t nj : counts)
        if (nj > 0) L += double(nj) * std::log(double(nj)); // 0 log 0 := 0
    L -= double(n) * std::log(double(n));
    L -= 0.5 * double(n) * d * std::log(2.0 * std::numbers::pi_v<double> * sigma2);
    L -= 0.5 * d * double(n - k);
    return {L, sigma2};
}

Scores score(const ClusteringResult& result, double d) {
    const auto [L, sigma2] = log_likelihood(result, d);
    (void)sigma2;
    const double n = double(result.assignment.size());
    const double kd = double(result.k) * d;
    Scores s;
    s.aic = -2.0 * L + 2.0 * kd;
    s.bic = -2.0 * L + kd * std::log(n);
    return s;
}

ScoreReport select_k(const std::vector<ClusteringResult>& results, double d) {
    if (results.empty()) throw EmptyInput("no clusterings to select from");
    const int n = int(results[0].assignment.size());
    const int k_min = results[0].k;
    for (std::size_t t = 0; t < results.size(); ++t) {
        if (int(results[t].assignment.size()) != n)
            throw InconsistentInputs(
                "clusterings disagree on the number of diagrams (" +
                std::to_string(results[t].assignment.size()) + " vs " +
                std::to_string(n) + ")");
        if (results[t].k != k_min + int(t))
            throw InconsistentInputs(
                "clusterings must cover consecutive ascending k; expected " +
                std::to_string(k_min + int(t)) + ", got " +
                std::to_string(results[t].k));
    }

    ScoreReport report;
    for (const ClusteringResult& result : results) {
        const auto [L, sigma2] = log_likelihood(result, d);
        const Scores s = score(result, d);
        PerKScore entry;
        entry.log_likelihood = L;
        entry.sigma2 = sigma2;
        entry.aic = s.aic;
        entry.bic = s.bic;
        report.per_k[result.k] = entry;
    }

    report.selected_k_aic = k_min;
    report.selected_k_bic = k_min;
    for (const auto& [k, entry] : report.per_k) {
        if (entry.aic < report.per_k.at(report.selected_k_aic).aic)
            report.selected_k_aic = k; // strict: ties keep the smaller k
        if (entry.bic < report.per_k.at(report.selected_k_bic).bic)
            report.selected_k_bic = k;
    }

    const auto base = report.per_k.find(1);
    if (base != report.per_k.end()) {
        for (auto& [k, entry] : report.per_k) {
            entry.aic_normalized = entry.aic / base->second.aic;
            entry.bic_normalized = entry.bic / base->second.bic;
        }
    }
    return report;
}

} // namespace topoclust
