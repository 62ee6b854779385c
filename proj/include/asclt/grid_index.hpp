#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/point_set.hpp"
#include "asclt/vecmath.hpp"

namespace asclt {

namespace detail {

/// Full deterministic ordering key for neighbor queries: squared distance,
/// then lexicographic coordinates, then index. Squared distances are compared
/// exactly; Poisson samples have measure-zero ties but the rule keeps hand
/// built test data stable.
struct NeighborKey {
  double d2;
  std::uint32_t index;
};

inline bool neighbor_less(const NeighborKey& a, const NeighborKey& b,
                          const PointConfiguration& cfg) {
  if (a.d2 != b.d2) return a.d2 < b.d2;
  const PointView pa = cfg.point(a.index);
  const PointView pb = cfg.point(b.index);
  if (lex_less(pa, pb)) return true;
  if (lex_less(pb, pa)) return false;
  return a.index < b.index;
}

}  // namespace detail

/// Uniform bucket grid over a point configuration. Immutable after build;
/// concurrent read-only queries allowed. Queries return exactly what a linear
/// scan with the same ordering key returns.
class GridIndex {
 public:
  /// Default cell edge is (volume(window)/max(1,N))^{1/d}.
  explicit GridIndex(const PointConfiguration& config, double cell_edge = 0.0)
      : config_(&config), dim_(config.dim()) {
    const Box bb = config.window().bounding_box();
    lo_ = bb.lower;
    if (cell_edge <= 0.0) {
      const double n = static_cast<double>(std::max<std::size_t>(1, config.size()));
      cell_edge = std::pow(config.window().volume() / n, 1.0 / dim_);
    }
    if (!(cell_edge > 0.0)) throw domain_error("grid index: cell edge must be positive");
    h_ = cell_edge;
    dims_.resize(dim_);
    std::size_t cells = 1;
    for (int i = 0; i < dim_; ++i) {
      const double extent = bb.upper[i] - bb.lower[i];
      std::int64_t m = static_cast<std::int64_t>(std::ceil(extent / h_));
      m = std::clamp<std::int64_t>(m, 1, 2048);
      dims_[i] = m;
      cells *= static_cast<std::size_t>(m);
    }
    offsets_.assign(cells + 1, 0);
    const std::size_t n = config.size();
    std::vector<std::size_t> cell_of(n);
    for (std::size_t p = 0; p < n; ++p) {
      cell_of[p] = cell_id(cell_coords(config.point(p)));
      ++offsets_[cell_of[p] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) offsets_[c + 1] += offsets_[c];
    ids_.resize(n);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t p = 0; p < n; ++p) ids_[cursor[cell_of[p]]++] = static_cast<std::uint32_t>(p);
  }

  GridIndex(const GridIndex&) = delete;
  GridIndex& operator=(const GridIndex&) = delete;

  [[nodiscard]] const PointConfiguration& config() const { return *config_; }
  [[nodiscard]] double cell_edge() const { return h_; }
  [[nodiscard]] std::size_t occupied_buckets() const {
    std::size_t k = 0;
    for (std::size_t c = 0; c + 1 < offsets_.size(); ++c)
      if (offsets_[c + 1] > offsets_[c]) ++k;
    return k;
  }

  /// Rings beyond this Chebyshev radius around x cover no grid cells.
  [[nodiscard]] std::int64_t ring_limit(PointView x) const {
    const auto home = cell_coords(x);
    std::int64_t m = 0;
    for (int i = 0; i < dim_; ++i) m = std::max({m, home[i] + 1, dims_[i] - home[i]});
    return m;
  }

  /// Any point in a cell at Chebyshev ring >= `ring` of x lies at Euclidean
  /// distance >= (ring-1)*h from x.
  [[nodiscard]] double ring_lower_bound(std::int64_t ring) const {
    return static_cast<double>(std::max<std::int64_t>(0, ring - 1)) * h_;
  }

  /// Apply f(point_id) over every point stored in cells at Chebyshev distance
  /// exactly `ring` from x's cell.
  template <typename F>
  void for_each_in_ring(PointView x, std::int64_t ring, const F& f) const {
    const auto home = cell_coords(x);
    std::vector<std::int64_t> cc(dim_);
    visit_ring(home, ring, cc, 0, false, f);
  }

  /// k nearest points to x in ascending distance (full key order). Fewer than
  /// k results signal a configuration smaller than the request.
  [[nodiscard]] std::vector<std::uint32_t> knn(PointView x, std::size_t k,
                                               bool exclude_self) const {
    std::vector<detail::NeighborKey> best;
    if (k == 0 || config_->size() == 0) return {};
    best.reserve(k + 1);

    auto consider = [&](std::uint32_t id) {
      const double d2 = squared_distance(x, config_->point(id));
      if (exclude_self && d2 == 0.0) return;
      const detail::NeighborKey key{d2, id};
      if (best.size() == k && !detail::neighbor_less(key, best.back(), *config_)) return;
      auto pos = std::upper_bound(best.begin(), best.end(), key,
                                  [&](const detail::NeighborKey& a, const detail::NeighborKey& b) {
                                    return detail::neighbor_less(a, b, *config_);
                                  });
      best.insert(pos, key);
      if (best.size() > k) best.pop_back();
    };

    const std::int64_t max_ring = ring_limit(x);
    for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
      // Unvisited cells sit at rings >= ring, hence at distance >=
      // (ring-1)*h. Strict comparison: an exact distance tie could still be
      // beaten on the lexicographic key.
      if (best.size() == k) {
        const double bound = ring_lower_bound(ring);
        if (best.back().d2 < bound * bound) break;
      }
      for_each_in_ring(x, ring, consider);
    }
    std::vector<std::uint32_t> out(best.size());
    for (std::size_t i = 0; i < best.size(); ++i) out[i] = best[i].index;
    return out;
  }

  /// Indices of all points with ||p - x|| <= r (closed ball), ascending index.
  [[nodiscard]] std::vector<std::uint32_t> range(PointView x, double r) const {
    if (r < 0.0) throw domain_error("range query: radius must be >= 0");
    std::vector<std::uint32_t> out;
    if (config_->size() == 0) return out;
    const double r2 = r * r;
    std::vector<std::int64_t> lo(dim_), hi(dim_);
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(std::floor((x[i] - r - lo_[i]) / h_)), 0, dims_[i] - 1);
      hi[i] = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(std::floor((x[i] + r - lo_[i]) / h_)), 0, dims_[i] - 1);
    }
    std::vector<std::int64_t> cc(lo);
    for (;;) {
      const std::size_t cell = cell_id(cc);
      for (std::size_t j = offsets_[cell]; j < offsets_[cell + 1]; ++j) {
        const std::uint32_t id = ids_[j];
        if (squared_distance(x, config_->point(id)) <= r2) out.push_back(id);
      }
      int axis = 0;
      while (axis < dim_ && cc[axis] == hi[axis]) {
        cc[axis] = lo[axis];
        ++axis;
      }
      if (axis == dim_) break;
      ++cc[axis];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<std::int64_t> cell_coords(PointView x) const {
    std::vector<std::int64_t> cc(dim_);
    for (int i = 0; i < dim_; ++i) {
      const std::int64_t c = static_cast<std::int64_t>(std::floor((x[i] - lo_[i]) / h_));
      cc[i] = std::clamp<std::int64_t>(c, 0, dims_[i] - 1);
    }
    return cc;
  }

  std::size_t cell_id(const std::vector<std::int64_t>& cc) const {
    std::size_t id = 0;
    for (int i = dim_ - 1; i >= 0; --i) id = id * static_cast<std::size_t>(dims_[i]) + cc[i];
    return id;
  }

  template <typename F>
  void visit_ring(const std::vector<std::int64_t>& home, std::int64_t ring,
                  std::vector<std::int64_t>& cc, int axis, bool pinned, const F& f) const {
    if (axis == dim_) {
      if (pinned || ring == 0)
        for (std::size_t j = offsets_[cell_id(cc)]; j < offsets_[cell_id(cc) + 1]; ++j) f(ids_[j]);
      return;
    }
    for (std::int64_t v = home[axis] - ring; v <= home[axis] + ring; ++v) {
      if (v < 0 || v >= dims_[axis]) continue;
      cc[axis] = v;
      const bool on_face = std::llabs(v - home[axis]) == ring;
      visit_ring(home, ring, cc, axis + 1, pinned || on_face, f);
    }
  }

  const PointConfiguration* config_;
  int dim_;
  Vec lo_;
  double h_{0.0};
  std::vector<std::int64_t> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> ids_;
};

inline std::vector<std::uint32_t> knn_query(const GridIndex& index, PointView x, std::size_t k,
                                            bool exclude_self) {
  return index.knn(x, k, exclude_self);
}

inline std::vector<std::uint32_t> range_query(const GridIndex& index, PointView x, double r) {
  return index.range(x, r);
}

}  // namespace asclt
