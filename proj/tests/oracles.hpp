// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from the definitions, in the most
// direct (and slow) way possible, sharing no code with the library internals.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "topoclust/diagram.hpp"
#include "topoclust/field.hpp"
#include "topoclust/metric.hpp"

namespace oracles {

using topoclust::DiagramPoint;
using topoclust::Family;
using topoclust::LiftingParams;
using topoclust::PairClass;
using topoclust::PersistenceDiagram;
using topoclust::ScalarField;

// ----- lifted pointwise distance, straight from the formula ---------------

inline double pointwise(const DiagramPoint& a, const DiagramPoint& b,
                        const LiftingParams& l, Family family) {
    if (a.birth == a.death && b.birth == b.death) return 0.0;
    const double lambda = family == Family::minima ? l.lambda_min : l.lambda_max;
    const Eigen::Vector3d pa =
        lambda * a.death_location + (1.0 - lambda) * a.birth_location;
    const Eigen::Vector3d pb =
        lambda * b.death_location + (1.0 - lambda) * b.birth_location;
    const double d2sq = (a.birth - b.birth) * (a.birth - b.birth) +
                        (a.death - b.death) * (a.death - b.death);
    return std::sqrt((1.0 - l.alpha) * d2sq +
                     l.alpha * (pa - pb).squaredNorm());
}

inline DiagramPoint project(const DiagramPoint& a) {
    DiagramPoint p = a;
    p.birth = p.death = 0.5 * (a.birth + a.death);
    return p;
}

// ----- brute-force Wasserstein over all augmented matchings ---------------
// Every point of A matches a point of B or its own diagonal projection;
// B points left over go to their projections. Exponential; fine for <= ~7+7.

inline double wasserstein(const PersistenceDiagram& A,
                          const PersistenceDiagram& B,
                          const LiftingParams& lifting) {
    const Family fam = A.family;
    const int na = int(A.points.size());
    const int nb = int(B.points.size());
    std::vector<char> used(nb, 0);
    double best = std::numeric_limits<double>::infinity();

    auto sq = [](double x) { return x * x; };
    std::vector<double> diag_a(na), diag_b(nb);
    for (int i = 0; i < na; ++i)
        diag_a[i] = sq(pointwise(A.points[i], project(A.points[i]), lifting, fam));
    for (int j = 0; j < nb; ++j)
        diag_b[j] = sq(pointwise(B.points[j], project(B.points[j]), lifting, fam));

    auto rec = [&](auto&& self, int i, double acc) -> void {
        if (acc >= best) return;
        if (i == na) {
            double total = acc;
            for (int j = 0; j < nb; ++j)
                if (!used[j]) total += diag_b[j];
            best = std::min(best, total);
            return;
        }
        self(self, i + 1, acc + diag_a[i]);
        for (int j = 0; j < nb; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            self(self, i + 1,
                 acc + sq(pointwise(A.points[i], B.points[j], lifting, fam)));
            used[j] = 0;
        }
    };
    rec(rec, 0, 0.0);
    return std::sqrt(best);
}

// ----- threshold-set tracking persistence oracle --------------------------
// Inserts vertices in ascending (value, index) order and recomputes component
// membership by explicit relabeling after every merge. Neighborhood: all
// offsets in {-1,0,1}^3 whose nonzero components share one sign (the
// Freudenthal stencil), bounds-checked.

inline PersistenceDiagram minima_diagram(const ScalarField& f) {
    const std::int64_t n = f.size();
    const int nx = f.nx(), ny = f.ny(), nz = f.nz();

    std::vector<std::int64_t> order(n);
    for (std::int64_t v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&f](std::int64_t a, std::int64_t b) {
                  if (f.values[a] != f.values[b])
                      return f.values[a] < f.values[b];
                  return a < b;
              });
    auto older = [&f](std::int64_t a, std::int64_t b) {
        if (f.values[a] != f.values[b]) return f.values[a] < f.values[b];
        return a < b;
    };

    std::vector<std::int64_t> comp(n, -1);     // -1 = not inserted yet
    std::map<std::int64_t, std::int64_t> comp_min; // label -> minimum vertex

    PersistenceDiagram out;
    out.family = Family::minima;
    out.source_name = f.name;

    for (std::int64_t v : order) {
        const std::int64_t plane = std::int64_t(nx) * ny;
        const int k = int(v / plane);
        const int j = int((v % plane) / nx);
        const int i = int(v % nx);

        std::vector<std::int64_t> labels;
        for (int dk = -1; dk <= 1; ++dk)
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0 && dk == 0) continue;
                    const bool nonneg = di >= 0 && dj >= 0 && dk >= 0;
                    const bool nonpos = di <= 0 && dj <= 0 && dk <= 0;
                    if (!nonneg && !nonpos) continue;
                    const int ii = i + di, jj = j + dj, kk = k + dk;
                    if (ii < 0 || ii >= nx || jj < 0 || jj >= ny || kk < 0 ||
                        kk >= nz)
                        continue;
                    const std::int64_t u = f.index(ii, jj, kk);
                    if (comp[u] < 0) continue;
                    if (std::find(labels.begin(), labels.end(), comp[u]) ==
                        labels.end())
                        labels.push_back(comp[u]);
                }

        if (labels.empty()) {
            comp[v] = v;
            comp_min[v] = v;
            continue;
        }
        std::sort(labels.begin(), labels.end(),
                  [&](std::int64_t a, std::int64_t b) {
                      return older(comp_min.at(a), comp_min.at(b));
                  });
        const std::int64_t survivor = labels.front();
        for (std::size_t t = 1; t < labels.size(); ++t) {
            const std::int64_t dying = labels[t];
            const std::int64_t bv = comp_min.at(dying);
            if (f.values[v] > f.values[bv]) {
                DiagramPoint p;
                p.birth = f.values[bv];
                p.death = f.values[v];
                p.birth_location = f.position(bv);
                p.death_location = f.position(v);
                p.pair_class = PairClass::min_saddle;
                out.points.push_back(p);
            }
            comp_min.erase(dying);
            for (std::int64_t u = 0; u < n; ++u)
                if (comp[u] == dying) comp[u] = survivor;
        }
        comp[v] = survivor;
    }

    const std::int64_t vmin = order.front();
    const std::int64_t vmax = order.back();
    if (f.values[vmax] > f.values[vmin]) {
        DiagramPoint g;
        g.birth = f.values[vmin];
        g.death = f.values[vmax];
        g.birth_location = f.position(vmin);
        g.death_location = f.position(vmax);
        g.pair_class = PairClass::global_pair;
        out.points.push_back(g);
    }
    return out;
}

inline PersistenceDiagram diagram(const ScalarField& f, Family family) {
    if (family == Family::minima) return minima_diagram(f);
    ScalarField g = f;
    g.values = -f.values;
    const PersistenceDiagram neg = minima_diagram(g);
    PersistenceDiagram out;
    out.family = Family::maxima;
    out.source_name = f.name;
    for (const DiagramPoint& q : neg.points) {
        DiagramPoint p;
        p.birth = -q.death;
        p.death = -q.birth;
        p.birth_location = q.death_location;
        p.death_location = q.birth_location;
        p.pair_class = q.pair_class == PairClass::global_pair
                           ? PairClass::global_pair
                           : PairClass::saddle_max;
        out.points.push_back(p);
    }
    return out;
}

// ----- long-double clustering score oracle --------------------------------

struct Scores {
    double log_likelihood;
    double sigma2;
    double aic;
    double bic;
};

inline Scores scores(const std::vector<int>& assignment,
                     const std::vector<double>& distances, int k, double d) {
    const long double n = (long double)(assignment.size());
    std::vector<long double> counts(std::size_t(k), 0.0L);
    for (int a : assignment) counts[std::size_t(a)] += 1.0L;
    long double sum_sq = 0.0L;
    for (double dist : distances) sum_sq += (long double)(dist) * dist;
    const long double dl = (long double)(d);
    const long double sigma2 = sum_sq / (dl * (n - (long double)(k)));
    long double L = 0.0L;
    for (long double nj : counts)
        if (nj > 0.0L) L += nj * std::log(nj);
    L -= n * std::log(n);
    L -= 0.5L * n * dl *
         std::log(2.0L * std::numbers::pi_v<long double> * sigma2);
    L -= 0.5L * dl * (n - (long double)(k));
    Scores s;
    s.log_likelihood = double(L);
    s.sigma2 = double(sigma2);
    s.aic = double(-2.0L * L + 2.0L * (long double)(k) * dl);
    s.bic = double(-2.0L * L + (long double)(k) * dl * std::log(n));
    return s;
}

// ----- random inputs ------------------------------------------------------

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
}

inline PersistenceDiagram random_diagram(std::mt19937_64& rng, int max_points,
                                         Family family = Family::minima) {
    PersistenceDiagram d;
    d.family = family;
    const int count = int(rng() % std::uint64_t(max_points + 1));
    for (int i = 0; i < count; ++i) {
        DiagramPoint p;
        p.birth = uniform(rng, -5.0, 5.0);
        p.death = p.birth + uniform(rng, 0.01, 5.0);
        p.birth_location = Eigen::Vector3d(uniform(rng, 0, 1),
                                           uniform(rng, 0, 1), 0.0);
        p.death_location = Eigen::Vector3d(uniform(rng, 0, 1),
                                           uniform(rng, 0, 1), 0.0);
        p.pair_class = family == Family::minima ? PairClass::min_saddle
                                                : PairClass::saddle_max;
        d.points.push_back(p);
    }
    return d;
}

// With quantize > 0 the values are drawn from {0, 1, ..., quantize-1} so that
// plateaus and value ties are common.
inline ScalarField random_field(std::mt19937_64& rng, int nx, int ny,
                                int quantize = 0) {
    ScalarField f;
    f.dims = {nx, ny, 1};
    f.values.resize(f.size());
    for (std::int64_t v = 0; v < f.size(); ++v)
        f.values[v] = quantize > 0
                          ? double(rng() % std::uint64_t(quantize))
                          : uniform(rng, 0.0, 1.0);
    f.name = "random";
    return f;
}

} // namespace oracles
