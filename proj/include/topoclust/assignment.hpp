#pragma once
#include <vector>

#include <Eigen/Core>

namespace topoclust {

// Solves the square linear assignment problem min_sigma sum_i cost(i, sigma(i))
// exactly, via the Jonker-Volgenant shortest-augmenting-path formulation of
// the Hungarian method (O(n^3)). Returns the row-to-column permutation; the
// optimal total is the sum of the selected entries. An empty matrix yields an
// empty permutation.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

} // namespace topoclust
