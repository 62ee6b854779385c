#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/grid_index.hpp"
#include "asclt/point_set.hpp"
#include "asclt/rng.hpp"
#include "asclt/score_model.hpp"
#include "asclt/voronoi.hpp"

namespace asclt {

/// Raw statistic (L^{(m)}, clique count or ell_d(A_n)) together with the
/// standardized total H_n carrying the model's prefactor.
struct FunctionalValue {
  double raw{0.0};
  double standardized{0.0};
  bool degenerate{false};
};

namespace detail {

inline double knn_weight(double dist, double m) { return m == 0.0 ? 1.0 : std::pow(dist, m); }

/// k-nearest-neighbor lists for every point, full key order.
inline std::vector<std::vector<std::uint32_t>> knn_lists(const PointConfiguration& cfg, int k,
                                                         const GridIndex& index) {
  std::vector<std::vector<std::uint32_t>> lists(cfg.size());
  for (std::uint32_t i = 0; i < cfg.size(); ++i)
    lists[i] = index.knn(cfg.point(i), static_cast<std::size_t>(k), /*exclude_self=*/true);
  return lists;
}

inline bool list_contains(const std::vector<std::uint32_t>& v, std::uint32_t x) {
  for (std::uint32_t e : v)
    if (e == x) return true;
  return false;
}

/// Count of k-cliques among `neighbors` (all of which are adjacent to the
/// anchor point) in the geometric graph with squared radius r2.
inline std::int64_t count_cliques_among(const PointConfiguration& cfg,
                                        const std::vector<std::uint32_t>& neighbors, int k,
                                        double r2) {
  if (k == 0) return 1;
  if (static_cast<int>(neighbors.size()) < k) return 0;
  std::int64_t total = 0;
  std::vector<std::uint32_t> chosen;
  chosen.reserve(k);
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(chosen.size()) == k) {
      ++total;
      return;
    }
    for (std::size_t c = start; c < neighbors.size(); ++c) {
      const PointView pc = cfg.point(neighbors[c]);
      bool ok = true;
      for (std::uint32_t ch : chosen)
        if (squared_distance(pc, cfg.point(ch)) > r2) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(neighbors[c]);
      self(self, c + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return total;
}

}  // namespace detail

/// Sum over the k nearest neighbors of rho^{(m)}: a mutual edge contributes
/// half its weight from each endpoint, a one-sided edge full weight. With
/// fewer than k other points every available neighbor is used (degenerate,
/// see evaluate_total); a single-point configuration cannot be scored.
inline double knn_score(const PointConfiguration& config, std::uint32_t i, int k, double m,
                        const GridIndex* index = nullptr) {
  if (config.size() < 2) throw degenerate_error("knn_score: single-point configuration");
  if (k < 1) throw domain_error("knn_score: k must be >= 1");
  std::optional<GridIndex> own;
  if (!index) own.emplace(config);
  const GridIndex& ix = index ? *index : *own;
  const PointView xi = config.point(i);
  const auto mine = ix.knn(xi, static_cast<std::size_t>(k), true);
  double s = 0.0;
  for (std::uint32_t j : mine) {
    const auto theirs = ix.knn(config.point(j), static_cast<std::size_t>(k), true);
    const double w = detail::knn_weight(distance(xi, config.point(j)), m);
    s += detail::list_contains(theirs, i) ? 0.5 * w : w;
  }
  return s;
}

/// Number of (k+1)-cliques of G(config, r) containing point i, divided by
/// k+1 so the scores sum exactly to the clique count.
inline double clique_score(const PointConfiguration& config, std::uint32_t i, int k, double r,
                           const GridIndex* index = nullptr) {
  if (!(r > 0.0)) throw domain_error("clique_score: r must be positive");
  std::optional<GridIndex> own;
  if (!index) own.emplace(config);
  const GridIndex& ix = index ? *index : *own;
  auto nb = ix.range(config.point(i), r);
  nb.erase(std::remove(nb.begin(), nb.end(), i), nb.end());
  const std::int64_t cnt = detail::count_cliques_among(config, nb, k, r * r);
  return static_cast<double>(cnt) / static_cast<double>(k + 1);
}

namespace detail {

inline double voronoi_cell_score(const Region& a, PointView nucleus,
                                 const std::vector<Pt2>& cell_verts) {
  const bool in_a = a.contains(nucleus);
  if (a.is_ball()) {
    const auto& b = std::get<Ball>(a.shape());
    const Pt2 c{b.center[0], b.center[1]};
    // Shift before the shoelace so that a cell fully inside the disk cancels
    // exactly against the overlap term.
    std::vector<Pt2> shifted(cell_verts.size());
    for (std::size_t v = 0; v < cell_verts.size(); ++v)
      shifted[v] = Pt2{cell_verts[v][0] - c[0], cell_verts[v][1] - c[1]};
    const double cell_area = polygon_area(shifted);
    const double overlap = disk_overlap_area(cell_verts, c, b.radius);
    return in_a ? cell_area - overlap : -overlap;
  }
  if (a.is_box()) {
    const auto& b = std::get<Box>(a.shape());
    std::vector<Pt2> clipped = clip_box(cell_verts, b.lower[0], b.lower[1], b.upper[0], b.upper[1]);
    const double overlap = polygon_area(clipped);
    return in_a ? polygon_area(cell_verts) - overlap : -overlap;
  }
  throw method_error("voronoi exact geometry supports A = box or ball only");
}

inline RngStream quadrature_stream(const PointConfiguration& cfg) {
  return RngStream{cfg.master_seed(), 0}.derive(stream_purpose::quadrature,
                                                static_cast<std::uint64_t>(cfg.scale_index().value_or(0)));
}

/// Classify quadrature points by nearest nucleus; returns per-nucleus counts
/// of quadrature points total and inside A.
struct QuadratureTally {
  std::vector<std::int64_t> total;
  std::vector<std::int64_t> in_a;
  std::int64_t q{0};
};

inline QuadratureTally classify_quadrature(const PointConfiguration& cfg, const Region& a,
                                           std::int64_t q, const GridIndex& index) {
  QuadratureTally t;
  t.total.assign(cfg.size(), 0);
  t.in_a.assign(cfg.size(), 0);
  t.q = q;
  auto eng = quadrature_stream(cfg).engine();
  const Box bb = cfg.window().bounding_box();
  const int d = cfg.dim();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec x(d);
  for (std::int64_t s = 0; s < q; ++s) {
    for (;;) {
      for (int c = 0; c < d; ++c) x[c] = bb.lower[c] + u01(eng) * (bb.upper[c] - bb.lower[c]);
      if (cfg.window().contains(x)) break;
    }
    const auto nearest = index.knn(x, 1, false);
    if (nearest.empty()) continue;
    ++t.total[nearest[0]];
    if (a.contains(x)) ++t.in_a[nearest[0]];
  }
  return t;
}

}  // namespace detail

/// Poisson-Voronoi approximation score: +vol(C cap A^c) for nuclei in A,
/// -vol(C cap A) for nuclei outside.
inline double voronoi_score(const PointConfiguration& config, std::uint32_t i, const Region& a,
                            const VolumeMethod& method, const GridIndex* index = nullptr) {
  if (config.size() == 0) throw domain_error("voronoi_score: empty configuration");
  std::optional<GridIndex> own;
  if (!index) own.emplace(config);
  const GridIndex& ix = index ? *index : *own;
  if (std::holds_alternative<Exact2D>(method)) {
    if (config.dim() != 2) throw method_error("Exact2D volume requires d = 2");
    const CellPolygon cell = voronoi_cell_2d_prefiltered(ix, i, config.window());
    return detail::voronoi_cell_score(a, config.point(i), cell.vertices);
  }
  const auto& mc = std::get<MonteCarloVolume>(method);
  const auto tally = detail::classify_quadrature(config, a, mc.quadrature_count, ix);
  const double cell_w = config.window().volume() / static_cast<double>(tally.q);
  const double in_a = static_cast<double>(tally.in_a[i]) * cell_w;
  const double total = static_cast<double>(tally.total[i]) * cell_w;
  return a.contains(config.point(i)) ? total - in_a : -in_a;
}

/// H_n for the model on a configuration at its scale index n. Standardized
/// totals: n^{m/d} L^{(m)} for kNN length, the clique count itself (radius
/// r n^{-1/d} applied here), n (ell(A_n) - ell(A)) for Voronoi, N for count.
inline FunctionalValue evaluate_total(const ScoreModel& model, const PointConfiguration& config) {
  if (!config.scale_index())
    throw domain_error("evaluate_total: configuration has no scale index");
  const std::int64_t n = *config.scale_index();
  const int d = config.dim();
  const std::size_t npts = config.size();

  if (std::holds_alternative<CountSpec>(model.kind)) {
    const double c = static_cast<double>(npts);
    return FunctionalValue{c, c, false};
  }

  if (std::holds_alternative<KnnSpec>(model.kind)) {
    const auto& spec = std::get<KnnSpec>(model.kind);
    if (npts < 2) {
      return FunctionalValue{0.0, 0.0, true};
    }
    const GridIndex index(config);
    const auto lists = detail::knn_lists(config, spec.k, index);
    double raw = 0.0;
    bool degenerate = npts <= static_cast<std::size_t>(spec.k);
    for (std::uint32_t i = 0; i < npts; ++i) {
      if (lists[i].size() < static_cast<std::size_t>(spec.k)) degenerate = true;
      const PointView xi = config.point(i);
      for (std::uint32_t j : lists[i]) {
        const double w = detail::knn_weight(distance(xi, config.point(j)), spec.m);
        raw += detail::list_contains(lists[j], i) ? 0.5 * w : w;
      }
    }
    const double pref = std::pow(static_cast<double>(n), spec.m / static_cast<double>(d));
    return FunctionalValue{raw, pref * raw, degenerate};
  }

  if (std::holds_alternative<CliqueSpec>(model.kind)) {
    const auto& spec = std::get<CliqueSpec>(model.kind);
    const double r_eff = spec.r * std::pow(static_cast<double>(n), -1.0 / d);
    std::int64_t sum = 0;
    if (npts > 0) {
      const GridIndex index(config);
      const double r2 = r_eff * r_eff;
      for (std::uint32_t i = 0; i < npts; ++i) {
        auto nb = index.range(config.point(i), r_eff);
        nb.erase(std::remove(nb.begin(), nb.end(), i), nb.end());
        sum += detail::count_cliques_among(config, nb, spec.k, r2);
      }
    }
    // Each clique of order k+1 was counted once per member.
    const std::int64_t cliques = sum / (spec.k + 1);
    const double raw = static_cast<double>(cliques);
    return FunctionalValue{raw, raw, false};
  }

  const auto& spec = std::get<VoronoiSpec>(model.kind);
  const double ell_a = spec.target.volume();
  if (npts == 0) {
    // Empty union convention: ell(A_n) = 0.
    return FunctionalValue{0.0, static_cast<double>(n) * (0.0 - ell_a), true};
  }
  const GridIndex index(config);
  double raw = 0.0;
  if (std::holds_alternative<Exact2D>(spec.method)) {
    if (d != 2) throw method_error("Exact2D volume requires d = 2");
    for (std::uint32_t i = 0; i < npts; ++i) {
      if (!spec.target.contains(config.point(i))) continue;
      raw += voronoi_cell_2d_prefiltered(index, i, config.window()).area();
    }
  } else {
    const auto& mc = std::get<MonteCarloVolume>(spec.method);
    const auto tally = detail::classify_quadrature(config, spec.target, mc.quadrature_count, index);
    std::int64_t hits = 0;
    for (std::uint32_t i = 0; i < npts; ++i)
      if (spec.target.contains(config.point(i))) hits += tally.total[i];
    raw = config.window().volume() * static_cast<double>(hits) / static_cast<double>(tally.q);
  }
  return FunctionalValue{raw, static_cast<double>(n) * (raw - ell_a), false};
}

/// Per-point score of the model at point i (the xi_n of the functional,
/// including the standardizing prefactor). Independent code path from
/// evaluate_total; the difference-operator cross checks rely on that.
inline double standardized_point_score(const ScoreModel& model, const PointConfiguration& config,
                                       std::uint32_t i, const GridIndex* index = nullptr) {
  if (!config.scale_index())
    throw domain_error("standardized_point_score: configuration has no scale index");
  const std::int64_t n = *config.scale_index();
  const int d = config.dim();
  if (std::holds_alternative<CountSpec>(model.kind)) return 1.0;
  if (std::holds_alternative<KnnSpec>(model.kind)) {
    const auto& spec = std::get<KnnSpec>(model.kind);
    if (config.size() < 2) return 0.0;  // no neighbors available
    return std::pow(static_cast<double>(n), spec.m / static_cast<double>(d)) *
           knn_score(config, i, spec.k, spec.m, index);
  }
  if (std::holds_alternative<CliqueSpec>(model.kind)) {
    const auto& spec = std::get<CliqueSpec>(model.kind);
    const double r_eff = spec.r * std::pow(static_cast<double>(n), -1.0 / d);
    return clique_score(config, i, spec.k, r_eff, index);
  }
  const auto& spec = std::get<VoronoiSpec>(model.kind);
  return static_cast<double>(n) * voronoi_score(config, i, spec.target, spec.method, index);
}

/// Sum of per-point scores: the "score route" to the standardized H_n. For
/// the Voronoi model the scores sum to n (ell(A_n) - ell(A)) identically.
inline double sum_of_scores(const ScoreModel& model, const PointConfiguration& config) {
  if (config.size() == 0) return 0.0;
  const GridIndex index(config);
  double s = 0.0;
  for (std::uint32_t i = 0; i < config.size(); ++i)
    s += standardized_point_score(model, config, i, &index);
  return s;
}

}  // namespace asclt
