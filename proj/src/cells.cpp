#include "kdesorb/cells.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kdesorb {

int cell_count(double omega, double h) {
  if (!(omega > 0)) throw std::invalid_argument("cells: omega must be positive");
  if (!(h > 0)) throw std::invalid_argument("cells: bandwidth must be positive");
  const double n = std::floor(omega / (2.0 * h));
  if (n < 1) return 1;
  return static_cast<int>(n);
}

int CellIndex::neighborhood(int cell, int out[3]) const {
  const int left = (cell + n_cells - 1) % n_cells;
  const int right = (cell + 1) % n_cells;
  const int cand[3] = {left, cell, right};
  int k = 0;
  for (int c : cand) {
    bool seen = false;
    for (int i = 0; i < k; ++i) seen = seen || out[i] == c;
    if (!seen) out[k++] = c;
  }
  return k;
}

CellIndex build_site_cells(const SiteArray& sites, int n_cells, double omega) {
  CellIndex ci;
  ci.n_cells = n_cells;
  ci.width = omega / n_cells;
  ci.omega = omega;
  ci.site_begin.assign(n_cells + 1, 0);

  // Sites are position-sorted, so per-cell ranges are contiguous; one
  // counting pass gives the boundaries.
  for (double p : sites.pos) ++ci.site_begin[ci.cell_of(p) + 1];
  for (int c = 0; c < n_cells; ++c) ci.site_begin[c + 1] += ci.site_begin[c];

  ci.sites_by_kf.assign(n_cells, {});
  for (int c = 0; c < n_cells; ++c) {
    auto& list = ci.sites_by_kf[c];
    list.resize(ci.site_begin[c + 1] - ci.site_begin[c]);
    std::int32_t id = ci.site_begin[c];
    for (auto& s : list) s = id++;
    std::sort(list.begin(), list.end(), [&](std::int32_t a, std::int32_t b) {
      if (sites.kf[a] != sites.kf[b]) return sites.kf[a] > sites.kf[b];
      return a < b;
    });
  }
  return ci;
}

void filter_free_sites(const SiteArray& sites, const CellIndex& full,
                       CellIndex& out) {
  out.n_cells = full.n_cells;
  out.width = full.width;
  out.omega = full.omega;
  out.site_begin = full.site_begin;
  out.a_in_cell.clear();
  out.sites_by_kf.resize(full.n_cells);
  for (int c = 0; c < full.n_cells; ++c) {
    auto& list = out.sites_by_kf[c];
    list.clear();
    for (std::int32_t s : full.sites_by_kf[c])
      if (!sites.occupied[s]) list.push_back(s);
  }
}

CellIndex build_cells(const ParticleState& st, double h, double omega) {
  CellIndex ci = build_site_cells(st.sites, cell_count(omega, h), omega);
  ci.a_in_cell.assign(ci.n_cells, {});
  for (std::size_t i = 0; i < st.a_pos.size(); ++i)
    ci.a_in_cell[ci.cell_of(st.a_pos[i])].push_back(
        static_cast<std::int32_t>(i));
  return ci;
}

std::vector<std::pair<std::int32_t, std::int32_t>> candidate_pairs(
    const ParticleState& st, const CellIndex& cells) {
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  int nb[3];
  for (std::size_t a = 0; a < st.a_pos.size(); ++a) {
    const int cell = cells.cell_of(st.a_pos[a]);
    const int k = cells.neighborhood(cell, nb);
    for (int i = 0; i < k; ++i) {
      for (std::int32_t s = cells.site_begin[nb[i]];
           s < cells.site_begin[nb[i] + 1]; ++s) {
        if (!st.sites.occupied[s])
          out.emplace_back(static_cast<std::int32_t>(a), s);
      }
    }
  }
  return out;
}

}  // namespace kdesorb
