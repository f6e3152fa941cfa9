#pragma once
#include <array>
#include <cstdint>
#include <filesystem>

#include "topoclust/diagram.hpp"
#include "topoclust/field.hpp"

namespace topoclust {

// ----- scalar fields (.sfield) -----------------------------------------
// ASCII format:
//   SFIELD 1
//   dims nx ny nz
//   spacing sx sy sz
//   origin ox oy oz
//   <nx*ny*nz whitespace-separated reals, row-major, x fastest>
// Numbers are written with shortest round-trip precision, so a save/load
// cycle reproduces every double bit-exactly.

ScalarField load_field(const std::filesystem::path& path);
void save_field(const ScalarField& field, const std::filesystem::path& path);

// Loads an ensemble from a directory or a manifest file. A directory is
// scanned for an `ensemble.txt` manifest; without one, every *.sfield file is
// loaded in lexicographic filename order. Manifest lines name member files
// (in order); `# key=value` lines carry ensemble metadata; other `#` lines
// are comments. Member names are the file stems.
Ensemble load_ensemble(const std::filesystem::path& path);

// Writes one .sfield per member plus an ensemble.txt manifest into dir
// (created if needed). load_ensemble(save_ensemble(E)) == E bit-exactly.
void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& dir);

// ----- persistence diagrams (.pdiag) ------------------------------------
// CSV with the exact header
//   birth,death,btype,b_x,b_y,b_z,d_x,d_y,d_z,pair_class
// one row per point; btype is the diagram family tag ("min" or "max");
// pair_class is min_saddle, saddle_max, or global. A header-only file is an
// empty diagram (family defaults to minima since no row carries the tag).
// The diagram's source_name is the file stem.

PersistenceDiagram load_diagram(const std::filesystem::path& path);
void save_diagram(const PersistenceDiagram& diagram,
                  const std::filesystem::path& path);

// ----- synthetic ensembles ----------------------------------------------
// Generates a 2D ensemble of Gaussian-bump fields on grid (nx, ny, 1) over
// the unit square: member i uses the fixed bump layout of pattern
// i % n_patterns (n_patterns in 1..5; the layouts have pairwise distinct bump
// counts and positions), plus i.i.d. additive uniform noise in
// [-noise_sigma, +noise_sigma] per vertex. Deterministic given seed;
// independent of thread count.
Ensemble generate_gaussians_ensemble(int n_members, int n_patterns,
                                     std::array<int, 3> grid,
                                     double noise_sigma, std::uint64_t seed);

} // namespace topoclust
