#pragma once
#include <cstdint>
#include <vector>

#include "kdesorb/state.hpp"

namespace kdesorb {

// Uniform cell partition of the periodic domain with width >= 2h, so a
// particle's reaction partners within twice the bandwidth always sit in its
// own cell or a directly adjacent one. Sites never move, so for a given cell
// count the site-side structures are static; only the A binning tracks the
// current positions.
struct CellIndex {
  int n_cells = 0;
  double width = 0.0;
  double omega = 0.0;

  // Sites are position-sorted, so each cell owns a contiguous index range
  // [site_begin[c], site_begin[c + 1]).
  std::vector<std::int32_t> site_begin;

  // Per-cell site indices ordered by descending k_f (ties by ascending site
  // index). The envelope walk of the forward sweep depends on this order.
  std::vector<std::vector<std::int32_t>> sites_by_kf;

  // Per-cell live A indices, ascending. Filled by build_cells; the engine's
  // production sweep does not need them and skips the binning.
  std::vector<std::vector<std::int32_t>> a_in_cell;

  int cell_of(double pos) const {
    int c = static_cast<int>(pos / width);
    if (c >= n_cells) c = n_cells - 1;  // pos just under omega can round up
    if (c < 0) c = 0;
    return c;
  }

  // The candidate cells around `cell`: itself and both neighbors, wrapped,
  // deduplicated, in scan order (left, self, right). With one or two cells
  // total this degrades to the distinct cells.
  int neighborhood(int cell, int out[3]) const;
};

// n_cells = max(1, floor(omega / (2 h))). A bandwidth of omega/2 or more
// collapses the partition to a single cell.
int cell_count(double omega, double h);

// Builds the full index, including the A binning. Throws
// std::invalid_argument if h <= 0 or omega <= 0.
CellIndex build_cells(const ParticleState& st, double h, double omega);

// Site-side structures only (ranges and k_f ordering), leaving a_in_cell
// empty. This is what the engine caches across steps while n_cells is
// unchanged.
CellIndex build_site_cells(const SiteArray& sites, int n_cells, double omega);

// Copy of `full` whose per-cell lists keep only unoccupied sites, order
// preserved. Occupied sites cannot react, and under a heavy-tailed k_f law
// the largest rate constants spend nearly all their time occupied; dropping
// them keeps the envelope walk's geometric gaps long. Rebuilt every step
// into the same object to reuse its allocations.
void filter_free_sites(const SiteArray& sites, const CellIndex& full,
                       CellIndex& out);

// All candidate pairs (a_index, site_index) with the site free, i.e. every
// A against every free site in its cell neighborhood, in canonical order:
// ascending A index, then neighborhood scan order, then ascending site
// position. Reference path for the direct sweep and the coverage tests.
std::vector<std::pair<std::int32_t, std::int32_t>> candidate_pairs(
    const ParticleState& st, const CellIndex& cells);

}  // namespace kdesorb
