#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topoclust/errors.hpp"
#include "topoclust/persistence.hpp"

using namespace topoclust;

namespace {

ScalarField field_1d(std::initializer_list<double> values) {
    ScalarField f;
    f.dims = {int(values.size()), 1, 1};
    f.values.resize(f.size());
    std::int64_t v = 0;
    for (double x : values) f.values[v++] = x;
    f.name = "line";
    return f;
}

ScalarField field_2d(int nx, int ny, std::initializer_list<double> values) {
    ScalarField f;
    f.dims = {nx, ny, 1};
    f.values.resize(f.size());
    std::int64_t v = 0;
    for (double x : values) f.values[v++] = x;
    f.name = "plane";
    return f;
}

DiagramPoint pt(double birth, double death, const Eigen::Vector3d& birth_loc,
                const Eigen::Vector3d& death_loc, PairClass c) {
    DiagramPoint p;
    p.birth = birth;
    p.death = death;
    p.birth_location = birth_loc;
    p.death_location = death_loc;
    p.pair_class = c;
    return p;
}

} // namespace

TEST_CASE("1D minima diagram of a two-valley profile") {
    const ScalarField f = field_1d({2, 0, 4, 1, 5});
    const PersistenceDiagram d = compute_diagram(f, Family::minima);

    PersistenceDiagram want;
    want.family = Family::minima;
    // The valley at x=3 (value 1) dies when the x=2 barrier (value 4) falls.
    want.points = {
        pt(1, 4, {3, 0, 0}, {2, 0, 0}, PairClass::min_saddle),
        pt(0, 5, {1, 0, 0}, {4, 0, 0}, PairClass::global_pair),
    };
    CHECK(d == want);
    CHECK(d.source_name == "line");
}

TEST_CASE("1D maxima diagram via negation duality") {
    const ScalarField f = field_1d({2, 0, 4, 1, 5});
    const PersistenceDiagram d = compute_diagram(f, Family::maxima);

    PersistenceDiagram want;
    want.family = Family::maxima;
    want.points = {
        // peak at x=2 (value 4) merges at the x=3 saddle (value 1)
        pt(1, 4, {3, 0, 0}, {2, 0, 0}, PairClass::saddle_max),
        // peak at x=0 (value 2) merges at the x=1 saddle (value 0)
        pt(0, 2, {1, 0, 0}, {0, 0, 0}, PairClass::saddle_max),
        // global pair: overall min value 0 at x=1, overall max value 5 at x=4
        pt(0, 5, {1, 0, 0}, {4, 0, 0}, PairClass::global_pair),
    };
    CHECK(d == want);
}

TEST_CASE("constant field has an empty diagram") {
    ScalarField f;
    f.dims = {4, 4, 1};
    f.values = Eigen::ArrayXd::Constant(16, 3.25);
    CHECK(compute_diagram(f, Family::minima).points.empty());
    CHECK(compute_diagram(f, Family::maxima).points.empty());
}

TEST_CASE("plateaus break ties by vertex index") {
    // Valleys at values {0,0} and {1,1} merge with zero persistence for the
    // shallow one; only the global pair survives.
    const ScalarField f = field_1d({1, 1, 0, 0, 2, 2});
    const PersistenceDiagram d = compute_diagram(f, Family::minima);
    PersistenceDiagram want;
    want.family = Family::minima;
    // Global min: first index with value 0 (x=2); global max: last index with
    // value 2 under (value, index) order (x=5).
    want.points = {pt(0, 2, {2, 0, 0}, {5, 0, 0}, PairClass::global_pair)};
    CHECK(d == want);
}

TEST_CASE("2D four-corner merge order") {
    // Four corner valleys (1,2,3,4) in a ridge of 9s. They merge into the
    // oldest valley one by one at distinct saddles of the 6-neighborhood.
    const ScalarField f = field_2d(3, 3,
                                   {1, 9, 2,
                                    9, 9, 9,
                                    3, 9, 4});
    const PersistenceDiagram d = compute_diagram(f, Family::minima);
    PersistenceDiagram want;
    want.family = Family::minima;
    want.points = {
        pt(2, 9, {2, 0, 0}, {1, 0, 0}, PairClass::min_saddle),
        pt(3, 9, {0, 2, 0}, {0, 1, 0}, PairClass::min_saddle),
        pt(4, 9, {2, 2, 0}, {1, 1, 0}, PairClass::min_saddle),
        pt(1, 9, {0, 0, 0}, {1, 2, 0}, PairClass::global_pair),
    };
    CHECK(d == want);
}

TEST_CASE("positions honor spacing and origin") {
    ScalarField f = field_1d({2, 0, 4, 1, 5});
    f.spacing = {0.5, 1, 1};
    f.origin = {10, 0, 0};
    const PersistenceDiagram d = compute_diagram(f, Family::minima);
    PersistenceDiagram want;
    want.family = Family::minima;
    want.points = {
        pt(1, 4, {11.5, 0, 0}, {11, 0, 0}, PairClass::min_saddle),
        pt(0, 5, {10.5, 0, 0}, {12, 0, 0}, PairClass::global_pair),
    };
    CHECK(d == want);
}

TEST_CASE("maxima equal mapped minima of the negated field") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField f = oracles::random_field(rng, 9, 7);
        const PersistenceDiagram maxima = compute_diagram(f, Family::maxima);

        ScalarField neg = f;
        neg.values = -f.values;
        const PersistenceDiagram of_neg = compute_diagram(neg, Family::minima);
        PersistenceDiagram mapped;
        mapped.family = Family::maxima;
        for (const DiagramPoint& q : of_neg.points) {
            DiagramPoint p;
            p.birth = -q.death;
            p.death = -q.birth;
            p.birth_location = q.death_location;
            p.death_location = q.birth_location;
            p.pair_class = q.pair_class == PairClass::global_pair
                               ? PairClass::global_pair
                               : PairClass::saddle_max;
            mapped.points.push_back(p);
        }
        CHECK(maxima == mapped);
    }
}

TEST_CASE("agrees with the tracking oracle on random fields") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        // Alternate smooth and heavily tied integer-valued fields.
        const ScalarField f =
            oracles::random_field(rng, 8, 8, trial % 2 ? 4 : 0);
        for (Family fam : {Family::minima, Family::maxima}) {
            const PersistenceDiagram got = compute_diagram(f, fam);
            const PersistenceDiagram want = oracles::diagram(f, fam);
            CHECK(got == want);
        }
    }
}

TEST_CASE("diagram invariants on random fields") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 8; ++trial) {
        const ScalarField f = oracles::random_field(rng, 12, 12);
        const PersistenceDiagram d = compute_diagram(f, Family::minima);
        d.validate();
        int globals = 0;
        for (const DiagramPoint& p : d.points) {
            CHECK(p.death > p.birth); // zero-persistence points are dropped
            if (p.pair_class == PairClass::global_pair) ++globals;
        }
        CHECK(globals == 1);
    }
}

TEST_CASE("pruning keeps the global pair and strong points") {
    const ScalarField f = field_1d({2, 0, 4, 1, 5});
    const PersistenceDiagram d = compute_diagram(f, Family::minima);

    const PersistenceDiagram kept = prune_by_persistence(d, 3.0);
    REQUIRE(kept.points.size() == 1); // persistence 3 is NOT above 3
    CHECK(kept.points[0].pair_class == PairClass::global_pair);

    const PersistenceDiagram all = prune_by_persistence(d, 0.0);
    CHECK(all == d);

    CHECK_THROWS_AS(prune_by_persistence(d, -1.0), InvalidParameter);
}

TEST_CASE("invalid fields are rejected") {
    ScalarField f = field_1d({1, 2, 3});
    f.values[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(compute_diagram(f, Family::minima), NonFiniteValue);

    ScalarField wrong = field_1d({1, 2, 3});
    wrong.dims = {4, 1, 1}; // claims 4 values, has 3
    CHECK_THROWS_AS(compute_diagram(wrong, Family::minima), DimensionMismatch);
}
