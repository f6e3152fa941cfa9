#pragma once
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topoclust/errors.hpp"

namespace topoclust {

// A scalar field sampled on a regular grid. Values are stored in row-major
// order with x fastest: values[(k*ny + j)*nx + i] is the sample at grid
// vertex (i, j, k). 2D fields use nz == 1; 1D fields use ny == nz == 1.
struct ScalarField {
    std::array<int, 3> dims{1, 1, 1};            // nx, ny, nz
    Eigen::Vector3d spacing{1.0, 1.0, 1.0};      // world units per cell
    Eigen::Vector3d origin{0.0, 0.0, 0.0};
    Eigen::ArrayXd values;
    std::string name;

    int nx() const { return dims[0]; }
    int ny() const { return dims[1]; }
    int nz() const { return dims[2]; }
    std::int64_t size() const {
        return std::int64_t(dims[0]) * dims[1] * dims[2];
    }

    std::int64_t index(int i, int j, int k) const {
        return (std::int64_t(k) * dims[1] + j) * dims[0] + i;
    }

    double at(int i, int j, int k) const { return values[index(i, j, k)]; }
    double& at(int i, int j, int k) { return values[index(i, j, k)]; }

    // World coordinates of grid vertex (i, j, k).
    Eigen::Vector3d position(int i, int j, int k) const {
        return origin + Eigen::Vector3d(i * spacing.x(), j * spacing.y(),
                                        k * spacing.z());
    }
    Eigen::Vector3d position(std::int64_t v) const {
        const int i = int(v % dims[0]);
        const int j = int((v / dims[0]) % dims[1]);
        const int k = int(v / (std::int64_t(dims[0]) * dims[1]));
        return position(i, j, k);
    }

    // Throws if the field violates its invariants: positive dims with at
    // least one dim >= 2, positive spacing, matching value count, all finite.
    void validate() const {
        for (int d : dims)
            if (d < 1)
                throw DimensionMismatch("field '" + name +
                                        "': all dims must be >= 1");
        if (dims[0] < 2 && dims[1] < 2 && dims[2] < 2)
            throw DimensionMismatch("field '" + name +
                                    "': at least one dim must be >= 2");
        for (int a = 0; a < 3; ++a)
            if (!(spacing[a] > 0.0))
                throw InvalidParameter("field '" + name +
                                       "': spacing must be positive");
        if (values.size() != size())
            throw DimensionMismatch(
                "field '" + name + "': value count " +
                std::to_string(values.size()) + " does not match dims product " +
                std::to_string(size()));
        for (std::int64_t v = 0; v < values.size(); ++v)
            if (!std::isfinite(values[v]))
                throw NonFiniteValue("field '" + name +
                                     "': non-finite value at index " +
                                     std::to_string(v));
    }
};

inline bool operator==(const ScalarField& a, const ScalarField& b) {
    return a.dims == b.dims &&
           (a.spacing.array() == b.spacing.array()).all() &&
           (a.origin.array() == b.origin.array()).all() &&
           a.name == b.name && a.values.size() == b.values.size() &&
           (a.values == b.values).all();
}
inline bool operator!=(const ScalarField& a, const ScalarField& b) {
    return !(a == b);
}

// An ordered collection of scalar fields sharing one grid.
struct Ensemble {
    std::vector<ScalarField> members;
    std::map<std::string, std::string> metadata;

    // Throws unless every member is valid and shares dims/spacing/origin.
    void validate() const {
        if (members.empty())
            throw EmptyInput("ensemble has no members");
        members.front().validate();
        for (std::size_t m = 1; m < members.size(); ++m) {
            const ScalarField& f = members[m];
            f.validate();
            if (f.dims != members.front().dims ||
                !(f.spacing.array() == members.front().spacing.array()).all() ||
                !(f.origin.array() == members.front().origin.array()).all())
                throw DimensionMismatch(
                    "member '" + f.name +
                    "' disagrees with '" + members.front().name +
                    "' on dims/spacing/origin");
        }
    }
};

inline bool operator==(const Ensemble& a, const Ensemble& b) {
    return a.members == b.members && a.metadata == b.metadata;
}
inline bool operator!=(const Ensemble& a, const Ensemble& b) {
    return !(a == b);
}

} // namespace topoclust
