#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/region.hpp"
#include "asclt/vecmath.hpp"

namespace asclt {

/// Immutable finite simple point set with its generating window, the scale
/// index n of the coupled family (absent for an unscaled master) and the
/// digest of the stream that produced it.
class PointConfiguration {
 public:
  PointConfiguration(Region window, std::vector<double> flat_coords,
                     std::optional<std::int64_t> scale_index, std::uint64_t master_seed)
      : window_(std::move(window)),
        coords_(std::move(flat_coords)),
        scale_index_(scale_index),
        master_seed_(master_seed) {
    dim_ = window_.dimension();
    if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
      throw domain_error("point configuration: coordinate count not divisible by dimension");
    if (scale_index_ && *scale_index_ < 1)
      throw domain_error("point configuration: scale index must be positive");
    validate();
  }

  [[nodiscard]] std::size_t size() const { return coords_.size() / dim_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] PointView point(std::size_t i) const {
    return PointView(coords_.data() + i * dim_, static_cast<std::size_t>(dim_));
  }
  [[nodiscard]] const std::vector<double>& coords() const { return coords_; }
  [[nodiscard]] const Region& window() const { return window_; }
  [[nodiscard]] std::optional<std::int64_t> scale_index() const { return scale_index_; }
  [[nodiscard]] std::uint64_t master_seed() const { return master_seed_; }

  /// New configuration with extra points appended (add-one-cost plumbing).
  /// Duplicates against existing or among the added points are rejected.
  [[nodiscard]] PointConfiguration with_points(const std::vector<Vec>& extra) const {
    PointConfiguration out(*this);
    for (const auto& p : extra) {
      if (static_cast<int>(p.size()) != dim_)
        throw domain_error("with_points: dimension mismatch");
      for (std::size_t i = 0; i < out.size(); ++i)
        if (coords_equal(out.point(i), p))
          throw domain_error("with_points: duplicate point rejected (simple point process)");
      if (!window_.contains(p)) throw domain_error("with_points: point outside window");
      out.coords_.insert(out.coords_.end(), p.begin(), p.end());
    }
    return out;
  }

 private:
  void validate() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
      if (!window_.contains(point(i)))
        throw domain_error("point configuration: point outside window");
    if (n < 2) return;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return lex_less(point(a), point(b));
    });
    for (std::size_t i = 1; i < n; ++i)
      if (coords_equal(point(order[i - 1]), point(order[i])))
        throw domain_error("point configuration: duplicate points rejected (simple point process)");
  }

  Region window_;
  std::vector<double> coords_;
  std::optional<std::int64_t> scale_index_;
  std::uint64_t master_seed_{0};
  int dim_{0};
};

}  // namespace asclt
