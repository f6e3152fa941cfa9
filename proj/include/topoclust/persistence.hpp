#pragma once
#include "topoclust/diagram.hpp"
#include "topoclust/field.hpp"

namespace topoclust {

// Computes the extremum persistence diagram of a scalar field over the
// Freudenthal triangulation of its grid (6-neighborhood in 2D, 14 in 3D,
// path adjacency in 1D). Ties in vertex values are broken by vertex index
// (symbolic perturbation).
//
// family = minima: sweep vertices in increasing order; every sublevel-set
// component is born at a local minimum; when two components merge at a saddle
// the component with the higher (younger) minimum dies, emitting
// (min value, saddle value) with class min_saddle (Elder rule). The global
// minimum pairs with the global maximum value, class global.
//
// family = maxima: same procedure on the negated field; each resulting point
// (b, d) is reported as (-d, -b) with birth/death locations swapped, so that
// birth = saddle value, death = maximum value, and death >= birth holds in
// the same convention as minima diagrams.
//
// Zero-persistence points (possible only under exact value ties) are dropped;
// a constant field therefore yields an empty diagram.
PersistenceDiagram compute_diagram(const ScalarField& field, Family family);

// Returns the diagram restricted to points with persistence strictly greater
// than threshold; the global pair is always retained.
PersistenceDiagram prune_by_persistence(const PersistenceDiagram& diagram,
                                        double threshold);

} // namespace topoclust
