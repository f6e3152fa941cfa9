#include "topoclust/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "topoclust/errors.hpp"

namespace topoclust {

namespace {

// Freudenthal neighborhood: axis steps plus the diagonals whose offset
// components share a sign. On 2D grids (nz == 1) the out-of-plane entries are
// rejected by the bounds check and the stencil degenerates to the standard
// 6-neighborhood of the triangulated plane; in 1D it degenerates to the path
// graph.
constexpr int kNeighborOffsets[14][3] = {
    {1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0},  {0, 0, 1},  {0, 0, -1},
    {1, 1, 0},  {-1, -1, 0}, {0, 1, 1}, {0, -1, -1}, {1, 0, 1},  {-1, 0, -1},
    {1, 1, 1},  {-1, -1, -1}};

struct UnionFind {
    std::vector<std::int64_t> parent;

    explicit UnionFind(std::int64_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::int64_t{0});
    }

    std::int64_t find(std::int64_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]]; // path halving
            v = parent[v];
        }
        return v;
    }
};

// Sublevel-set sweep producing the minima family of `f`. Vertices enter in
// ascending (value, index) order; equal values are broken by vertex index, so
// the result is deterministic even on flat regions. When components merge at a
// vertex, every component except the one with the oldest minimum dies and
// yields one (component minimum value, merge value) pair.
PersistenceDiagram minima_diagram(const ScalarField& f) {
    const std::int64_t n = f.size();
    const int nx = f.nx(), ny = f.ny(), nz = f.nz();

    std::vector<std::int64_t> order(n);
    std::iota(order.begin(), order.end(), std::int64_t{0});
    std::sort(order.begin(), order.end(),
              [&f](std::int64_t a, std::int64_t b) {
                  if (f.values[a] != f.values[b])
                      return f.values[a] < f.values[b];
                  return a < b;
              });
    std::vector<std::int64_t> rank(n);
    for (std::int64_t p = 0; p < n; ++p) rank[order[p]] = p;

    UnionFind uf(n);
    std::vector<std::int64_t> comp_min(n); // root -> vertex of component minimum
    std::vector<char> inserted(n, 0);

    PersistenceDiagram diagram;
    diagram.family = Family::minima;
    diagram.source_name = f.name;

    std::int64_t roots[14];
    for (std::int64_t pos = 0; pos < n; ++pos) {
        const std::int64_t v = order[pos];
        const std::int64_t plane = std::int64_t(nx) * ny;
        const int k = int(v / plane);
        const std::int64_t rem = v % plane;
        const int j = int(rem / nx);
        const int i = int(rem % nx);

        int n_roots = 0;
        for (const auto& off : kNeighborOffsets) {
            const int ii = i + off[0];
            const int jj = j + off[1];
            const int kk = k + off[2];
            if (ii < 0 || ii >= nx || jj < 0 || jj >= ny || kk < 0 || kk >= nz)
                continue;
            const std::int64_t u = f.index(ii, jj, kk);
            if (!inserted[u]) continue;
            const std::int64_t r = uf.find(u);
            bool seen = false;
            for (int t = 0; t < n_roots; ++t)
                if (roots[t] == r) { seen = true; break; }
            if (!seen) roots[n_roots++] = r;
        }

        inserted[v] = 1;
        if (n_roots == 0) {
            comp_min[v] = v; // v starts a new component and is its minimum
            continue;
        }

        // Oldest minimum (smallest insertion rank) survives; merge the rest in
        // age order so the emitted point order is deterministic.
        std::sort(roots, roots + n_roots,
                  [&](std::int64_t a, std::int64_t b) {
                      return rank[comp_min[a]] < rank[comp_min[b]];
                  });
        const std::int64_t survivor = roots[0];
        for (int t = 1; t < n_roots; ++t) {
            const std::int64_t dying = roots[t];
            const std::int64_t birth_vertex = comp_min[dying];
            const double birth = f.values[birth_vertex];
            const double death = f.values[v];
            if (death > birth) {
                DiagramPoint p;
                p.birth = birth;
                p.death = death;
                p.birth_location = f.position(birth_vertex);
                p.death_location = f.position(v);
                p.pair_class = PairClass::min_saddle;
                diagram.points.push_back(std::move(p));
            }
            uf.parent[dying] = survivor;
        }
        uf.parent[v] = survivor;
    }

    // The component of the global minimum never dies during the sweep; close
    // it against the global maximum.
    const std::int64_t vmin = order[0];
    const std::int64_t vmax = order[n - 1];
    if (f.values[vmax] > f.values[vmin]) {
        DiagramPoint g;
        g.birth = f.values[vmin];
        g.death = f.values[vmax];
        g.birth_location = f.position(vmin);
        g.death_location = f.position(vmax);
        g.pair_class = PairClass::global_pair;
        diagram.points.push_back(std::move(g));
    }
    return diagram;
}

} // namespace

PersistenceDiagram compute_diagram(const ScalarField& field, Family family) {
    field.validate();
    if (family == Family::minima) return minima_diagram(field);

    // Maxima of f are minima of -f. Map each pair (b, d) of -f back through
    // value negation: births and deaths swap roles, as do their locations.
    ScalarField negated = field;
    negated.values = -field.values;
    PersistenceDiagram neg = minima_diagram(negated);

    PersistenceDiagram diagram;
    diagram.family = Family::maxima;
    diagram.source_name = field.name;
    diagram.points.reserve(neg.points.size());
    for (const DiagramPoint& q : neg.points) {
        DiagramPoint p;
        p.birth = -q.death;
        p.death = -q.birth;
        p.birth_location = q.death_location;
        p.death_location = q.birth_location;
        p.pair_class = q.pair_class == PairClass::global_pair
                           ? PairClass::global_pair
                           : PairClass::saddle_max;
        diagram.points.push_back(std::move(p));
    }
    return diagram;
}

PersistenceDiagram prune_by_persistence(const PersistenceDiagram& diagram,
                                        double threshold) {
    if (threshold < 0.0)
        throw InvalidParameter("persistence threshold must be >= 0");
    PersistenceDiagram pruned;
    pruned.family = diagram.family;
    pruned.source_name = diagram.source_name;
    for (const DiagramPoint& p : diagram.points) {
        // The global pair carries the field's overall range and is always kept.
        if (p.pair_class == PairClass::global_pair ||
            p.persistence() > threshold)
            pruned.points.push_back(p);
    }
    return pruned;
}

} // namespace topoclust
