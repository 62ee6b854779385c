#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/grid_index.hpp"
#include "asclt/point_set.hpp"
#include "asclt/polygon.hpp"
#include "asclt/region.hpp"

namespace asclt {

/// Convex Voronoi cell clipped to the window, vertices counterclockwise.
struct CellPolygon {
  std::vector<Pt2> vertices;
  std::uint32_t nucleus{0};

  [[nodiscard]] double area() const { return polygon_area(vertices); }
};

namespace detail {

inline std::vector<Pt2> window_ring(const Region& window) {
  if (!window.is_box()) throw method_error("voronoi: window must be a box");
  if (window.dimension() != 2) throw method_error("voronoi: exact cells require d = 2");
  const Box& b = std::get<Box>(window.shape());
  return {Pt2{b.lower[0], b.lower[1]}, Pt2{b.upper[0], b.lower[1]}, Pt2{b.upper[0], b.upper[1]},
          Pt2{b.lower[0], b.upper[1]}};
}

/// Clip the window by the bisectors of (nucleus, candidate) for candidates in
/// the given order. When `max_candidates` ends early the remaining bisectors
/// must be guaranteed no-ops by the caller.
inline std::vector<Pt2> clip_cell(const PointConfiguration& cfg, std::uint32_t i,
                                  const std::vector<Pt2>& window_poly,
                                  const std::vector<std::uint32_t>& order, bool early_stop) {
  const PointView pi = cfg.point(i);
  std::vector<Pt2> poly = window_poly;
  for (const std::uint32_t j : order) {
    if (early_stop) {
      // All later candidates are at least as far; once even the doubled cell
      // radius falls short of the candidate distance no further bisector can
      // cut. Small safety factor keeps the skipped passes exact no-ops.
      double rmax2 = 0.0;
      for (const Pt2& v : poly) {
        const double dx = v[0] - pi[0], dy = v[1] - pi[1];
        rmax2 = std::max(rmax2, dx * dx + dy * dy);
      }
      const PointView pj = cfg.point(j);
      const double dj2 = squared_distance(pi, pj);
      if (dj2 > 4.0 * rmax2 * (1.0 + 1e-6)) break;
    }
    const PointView pj = cfg.point(j);
    const Pt2 n{pj[0] - pi[0], pj[1] - pi[1]};
    const double c = 0.5 * (n[0] * (pi[0] + pj[0]) + n[1] * (pi[1] + pj[1]));
    poly = clip_halfplane(poly, n, c);
    if (poly.empty()) break;
  }
  return poly;
}

inline std::vector<std::uint32_t> sorted_others(const PointConfiguration& cfg, std::uint32_t i) {
  std::vector<std::uint32_t> order;
  order.reserve(cfg.size() - 1);
  for (std::uint32_t j = 0; j < cfg.size(); ++j)
    if (j != i) order.push_back(j);
  const PointView pi = cfg.point(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return neighbor_less(NeighborKey{squared_distance(pi, cfg.point(a)), a},
                         NeighborKey{squared_distance(pi, cfg.point(b)), b}, cfg);
  });
  return order;
}

}  // namespace detail

/// Voronoi cell of nucleus i inside a box window, computed by clipping with
/// the bisector of every other point in ascending-distance order.
inline CellPolygon voronoi_cell_2d(const PointConfiguration& config, std::uint32_t i,
                                   const Region& window) {
  const std::vector<Pt2> wring = detail::window_ring(window);
  if (i >= config.size()) throw domain_error("voronoi_cell_2d: nucleus index out of range");
  std::vector<Pt2> poly = detail::clip_cell(config, i, wring, detail::sorted_others(config, i),
                                            /*early_stop=*/false);
  dedupe_ring(poly);
  if (poly.size() < 3)
    throw error("voronoi_cell_2d: cell clipped empty for an interior nucleus (geometry bug)");
  return CellPolygon{std::move(poly), i};
}

/// Same polygon, bit-identical, but candidates come from expanding grid rings
/// and clipping stops once no remaining bisector can cut. The skipped passes
/// would have been exact vertex copies.
inline CellPolygon voronoi_cell_2d_prefiltered(const GridIndex& index, std::uint32_t i,
                                               const Region& window) {
  const PointConfiguration& cfg = index.config();
  const std::vector<Pt2> wring = detail::window_ring(window);
  const PointView pi = cfg.point(i);

  // Phase 1: gather candidates ring by ring, shrinking a scratch cell as we
  // go, until the untouched rings are provably irrelevant.
  std::vector<std::uint32_t> cand;
  std::vector<Pt2> scratch = wring;
  const std::int64_t limit = index.ring_limit(pi);
  for (std::int64_t ring = 0; ring <= limit; ++ring) {
    if (ring > 0) {
      double rmax2 = 0.0;
      for (const Pt2& v : scratch) {
        const double dx = v[0] - pi[0], dy = v[1] - pi[1];
        rmax2 = std::max(rmax2, dx * dx + dy * dy);
      }
      const double bound = index.ring_lower_bound(ring);
      if (bound * bound > 4.0 * rmax2 * (1.0 + 1e-6)) break;
    }
    index.for_each_in_ring(pi, ring, [&](std::uint32_t j) {
      if (j == i) return;
      cand.push_back(j);
      const PointView pj = cfg.point(j);
      const Pt2 n{pj[0] - pi[0], pj[1] - pi[1]};
      const double c = 0.5 * (n[0] * (pi[0] + pj[0]) + n[1] * (pi[1] + pj[1]));
      scratch = clip_halfplane(scratch, n, c);
    });
  }

  // Phase 2: replay the clip in the global candidate order with early stop,
  // matching the naive path clip for clip.
  std::sort(cand.begin(), cand.end(), [&](std::uint32_t a, std::uint32_t b) {
    return detail::neighbor_less(detail::NeighborKey{squared_distance(pi, cfg.point(a)), a},
                                 detail::NeighborKey{squared_distance(pi, cfg.point(b)), b}, cfg);
  });
  std::vector<Pt2> poly = detail::clip_cell(cfg, i, wring, cand, /*early_stop=*/true);
  dedupe_ring(poly);
  if (poly.size() < 3)
    throw error("voronoi_cell_2d: cell clipped empty for an interior nucleus (geometry bug)");
  return CellPolygon{std::move(poly), i};
}

/// CSV vertex list (one x,y row per vertex) for plotting.
inline std::string cell_csv(const CellPolygon& cell) {
  std::string out = "x,y\n";
  char buf[80];
  for (const Pt2& v : cell.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", v[0], v[1]);
    out += buf;
  }
  return out;
}

/// All cells of the tessellation; partitions the window.
inline std::vector<CellPolygon> voronoi_tessellation_2d(const GridIndex& index,
                                                        const Region& window) {
  const std::size_t n = index.config().size();
  std::vector<CellPolygon> cells;
  cells.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i)
    cells.push_back(voronoi_cell_2d_prefiltered(index, i, window));
  return cells;
}

}  // namespace asclt
