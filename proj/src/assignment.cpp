#include "topoclust/assignment.hpp"

#include <limits>

#include "topoclust/errors.hpp"

namespace topoclust {

// Shortest-augmenting-path Hungarian method (Jonker-Volgenant style) with
// dual potentials u, v. Internally 1-indexed with column 0 as the virtual
// root of each augmenting search.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = int(cost.rows());
    if (cost.cols() != n)
        throw InvalidParameter("assignment cost matrix must be square");
    std::vector<int> rowsol(n, -1);
    if (n == 0) return rowsol;

    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    for (int j = 1; j <= n; ++j)
        if (p[j]) rowsol[p[j] - 1] = j - 1;
    return rowsol;
}

} // namespace topoclust
