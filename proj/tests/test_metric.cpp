#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "topoclust/errors.hpp"
#include "topoclust/metric.hpp"

using namespace topoclust;

namespace {

DiagramPoint pt(double birth, double death,
                const Eigen::Vector3d& loc = Eigen::Vector3d::Zero()) {
    DiagramPoint p;
    p.birth = birth;
    p.death = death;
    p.birth_location = loc;
    p.death_location = loc;
    return p;
}

PersistenceDiagram diag(std::initializer_list<DiagramPoint> points,
                        Family family = Family::minima) {
    PersistenceDiagram d;
    d.family = family;
    d.points = points;
    return d;
}

} // namespace

TEST_CASE("pointwise distance: plain birth/death metric") {
    const LiftingParams l;
    const DiagramPoint a = pt(0, 4);
    CHECK(pointwise_distance(a, a, l, Family::minima) == 0.0);
    CHECK(pointwise_distance(pt(0, 4), pt(1, 3), l, Family::minima) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("pointwise distance: both points on the diagonal") {
    LiftingParams l;
    l.alpha = 0.5;
    // Locations differ wildly, but two diagonal points are indistinguishable.
    CHECK(pointwise_distance(pt(3, 3, {0, 0, 0}), pt(7, 7, {100, 100, 0}), l,
                             Family::minima) == 0.0);
}

TEST_CASE("pointwise distance: geometric lifting") {
    LiftingParams l;
    l.alpha = 0.5;
    const DiagramPoint a = pt(0, 4, {0, 0, 0});
    const DiagramPoint b = pt(0, 4, {3, 4, 0});
    // d2 = 0, location gap 5: sqrt(0.5 * 25)
    CHECK(pointwise_distance(a, b, l, Family::minima) == std::sqrt(12.5));
    // alpha = 0 ignores locations entirely
    CHECK(pointwise_distance(a, b, LiftingParams{}, Family::minima) == 0.0);
}

TEST_CASE("pointwise distance: lambda interpolation per family") {
    LiftingParams l;
    l.alpha = 1.0;
    l.lambda_min = 0.0; // minima use birth locations
    l.lambda_max = 1.0; // maxima use death locations
    DiagramPoint a = pt(0, 1);
    a.birth_location = {0, 0, 0};
    a.death_location = {2, 0, 0};
    DiagramPoint b = pt(0, 1);
    b.birth_location = {1, 0, 0};
    b.death_location = {5, 0, 0};
    CHECK(pointwise_distance(a, b, l, Family::minima) == doctest::Approx(1.0));
    CHECK(pointwise_distance(a, b, l, Family::maxima) == doctest::Approx(3.0));
    l.lambda_min = 0.5; // midpoints (1,0,0) and (3,0,0)
    CHECK(pointwise_distance(a, b, l, Family::minima) ==
          doctest::Approx(2.0));
}

TEST_CASE("diagonal projection") {
    const DiagramPoint p = diagonal_projection(pt(0, 2, {3, 4, 0}));
    CHECK(p.birth == 1.0);
    CHECK(p.death == 1.0);
    CHECK(p.birth_location == Eigen::Vector3d(3, 4, 0));

    const DiagramPoint fixed = diagonal_projection(pt(3, 3));
    CHECK(fixed.birth == 3.0);
    CHECK(fixed.death == 3.0);

    // Removing (0,4) costs its distance to (2,2): 2*sqrt(2).
    CHECK(pointwise_distance(pt(0, 4), diagonal_projection(pt(0, 4)),
                             LiftingParams{}, Family::minima) ==
          std::sqrt(8.0));
}

TEST_CASE("wasserstein distance: worked examples") {
    const auto [d1, a1] =
        wasserstein_distance(diag({pt(0, 4), pt(1, 2)}), diag({pt(0, 3)}));
    // (0,4)-(0,3) costs 1, (1,2) goes to the diagonal for 1/2
    CHECK(d1 == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    CHECK(a1.cost == d1);

    const auto [d2, a2] = wasserstein_distance(diag({pt(0, 4)}), diag({}));
    CHECK(d2 == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
    CHECK(a2.pairs.size() == 1);
    CHECK(a2.pairs[0] == std::pair<int, int>(0, kDiagonal));

    const auto [d3, a3] = wasserstein_distance(diag({}), diag({}));
    CHECK(d3 == 0.0);
    CHECK(a3.pairs.empty());

    const PersistenceDiagram big = diag({pt(0, 4), pt(1, 2), pt(-1, 7)});
    CHECK(wasserstein_distance(big, big).first == 0.0);
}

TEST_CASE("wasserstein distance: assignment is a certificate") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        LiftingParams l;
        l.alpha = (trial % 3) * 0.4;
        const PersistenceDiagram A = oracles::random_diagram(rng, 6);
        const PersistenceDiagram B = oracles::random_diagram(rng, 6);
        const auto [dist, assignment] = wasserstein_distance(A, B, l);

        // Every off-diagonal point appears exactly once on each side.
        std::set<int> seen_a, seen_b;
        double total = 0.0;
        for (const auto& [i, j] : assignment.pairs) {
            REQUIRE((i != kDiagonal || j != kDiagonal));
            const DiagramPoint pa =
                i == kDiagonal ? diagonal_projection(B.points[j]) : A.points[i];
            const DiagramPoint pb =
                j == kDiagonal ? diagonal_projection(A.points[i]) : B.points[j];
            const double c = pointwise_distance(pa, pb, l, A.family);
            total += c * c;
            if (i != kDiagonal) CHECK(seen_a.insert(i).second);
            if (j != kDiagonal) CHECK(seen_b.insert(j).second);
        }
        CHECK(seen_a.size() == A.points.size());
        CHECK(seen_b.size() == B.points.size());
        CHECK(std::sqrt(total) == doctest::Approx(dist).epsilon(1e-12));
        CHECK(assignment.cost == dist);
    }
}

TEST_CASE("wasserstein distance: matches brute force on random pairs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        LiftingParams l;
        l.alpha = oracles::uniform(rng, 0.0, 1.0);
        l.lambda_min = oracles::uniform(rng, 0.0, 1.0);
        const PersistenceDiagram A = oracles::random_diagram(rng, 5);
        const PersistenceDiagram B = oracles::random_diagram(rng, 5);
        const double got = wasserstein_distance(A, B, l).first;
        const double want = oracles::wasserstein(A, B, l);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("wasserstein distance: symmetry") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        LiftingParams l;
        l.alpha = 0.25;
        const PersistenceDiagram A = oracles::random_diagram(rng, 8);
        const PersistenceDiagram B = oracles::random_diagram(rng, 8);
        const double ab = wasserstein_distance(A, B, l).first;
        const double ba = wasserstein_distance(B, A, l).first;
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    }
}

TEST_CASE("wasserstein distance: input validation") {
    CHECK_THROWS_AS(wasserstein_distance(diag({pt(0, 1)}, Family::minima),
                                         diag({pt(0, 1)}, Family::maxima)),
                    FamilyMismatch);
    LiftingParams bad;
    bad.alpha = 1.5;
    CHECK_THROWS_AS(wasserstein_distance(diag({}), diag({}), bad),
                    InvalidParameter);
    bad.alpha = 0.5;
    bad.lambda_min = -0.1;
    CHECK_THROWS_AS(wasserstein_distance(diag({}), diag({}), bad),
                    InvalidParameter);
}
