#pragma once
#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topoclust/errors.hpp"

namespace topoclust {

// Which extremum family a diagram tracks: minimum-saddle pairs from the
// sublevel filtration, or maximum-saddle pairs from the superlevel one.
enum class Family { minima, maxima };

// min_saddle / saddle_max are ordinary extremum pairs; global_pair is the
// single (global minimum value, global maximum value) pair.
enum class PairClass { min_saddle, saddle_max, global_pair };

inline const char* to_string(Family f) {
    return f == Family::minima ? "minima" : "maxima";
}

inline const char* to_string(PairClass c) {
    switch (c) {
    case PairClass::min_saddle: return "min_saddle";
    case PairClass::saddle_max: return "saddle_max";
    default: return "global";
    }
}

inline Family family_from_string(const std::string& s) {
    if (s == "minima" || s == "min") return Family::minima;
    if (s == "maxima" || s == "max") return Family::maxima;
    throw InvalidParameter("unknown family '" + s + "'");
}

inline PairClass pair_class_from_string(const std::string& s) {
    if (s == "min_saddle") return PairClass::min_saddle;
    if (s == "saddle_max") return PairClass::saddle_max;
    if (s == "global") return PairClass::global_pair;
    throw InvalidParameter("unknown pair class '" + s + "'");
}

// One feature of the filtration: born at value `birth` (critical point at
// birth_location), dead at value `death` (critical point at death_location).
struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    Eigen::Vector3d birth_location{0.0, 0.0, 0.0};
    Eigen::Vector3d death_location{0.0, 0.0, 0.0};
    PairClass pair_class = PairClass::min_saddle;

    double persistence() const { return death - birth; }
};

inline bool operator==(const DiagramPoint& a, const DiagramPoint& b) {
    return a.birth == b.birth && a.death == b.death &&
           (a.birth_location.array() == b.birth_location.array()).all() &&
           (a.death_location.array() == b.death_location.array()).all() &&
           a.pair_class == b.pair_class;
}
inline bool operator!=(const DiagramPoint& a, const DiagramPoint& b) {
    return !(a == b);
}

// Strict ordering over every field; used to canonicalize point multisets.
inline bool point_less(const DiagramPoint& a, const DiagramPoint& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.death != b.death) return a.death < b.death;
    if (a.pair_class != b.pair_class) return a.pair_class < b.pair_class;
    for (int c = 0; c < 3; ++c) {
        if (a.birth_location[c] != b.birth_location[c])
            return a.birth_location[c] < b.birth_location[c];
        if (a.death_location[c] != b.death_location[c])
            return a.death_location[c] < b.death_location[c];
    }
    return false;
}

// A multiset of birth/death points for one field and one extremum family.
struct PersistenceDiagram {
    std::vector<DiagramPoint> points;
    Family family = Family::minima;
    std::string source_name;

    double total_persistence() const {
        double t = 0.0;
        for (const DiagramPoint& p : points) t += p.persistence();
        return t;
    }

    // Throws unless death >= birth everywhere and at most one global pair.
    void validate() const {
        int globals = 0;
        for (const DiagramPoint& p : points) {
            if (!(p.death >= p.birth))
                throw InvalidParameter("diagram '" + source_name +
                                       "': death < birth");
            if (p.pair_class == PairClass::global_pair) ++globals;
        }
        if (globals > 1)
            throw InvalidParameter("diagram '" + source_name +
                                   "': more than one global pair");
    }
};

// Equality compares the point multiset (order-insensitively) and the family.
// source_name is identification metadata and intentionally not compared.
inline bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    if (a.family != b.family || a.points.size() != b.points.size())
        return false;
    std::vector<DiagramPoint> pa = a.points, pb = b.points;
    std::sort(pa.begin(), pa.end(), point_less);
    std::sort(pb.begin(), pb.end(), point_less);
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (pa[i] != pb[i]) return false;
    return true;
}
inline bool operator!=(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    return !(a == b);
}

// Lexicographic content order on (family, sorted points); a deterministic,
// input-order-independent way to break ties between diagrams.
inline bool diagram_content_less(const PersistenceDiagram& a,
                                 const PersistenceDiagram& b) {
    if (a.family != b.family) return a.family < b.family;
    std::vector<DiagramPoint> pa = a.points, pb = b.points;
    std::sort(pa.begin(), pa.end(), point_less);
    std::sort(pb.begin(), pb.end(), point_less);
    for (std::size_t i = 0; i < pa.size() && i < pb.size(); ++i) {
        if (point_less(pa[i], pb[i])) return true;
        if (point_less(pb[i], pa[i])) return false;
    }
    return pa.size() < pb.size();
}

} // namespace topoclust
