#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "asclt/point_set.hpp"
#include "asclt/region.hpp"
#include "asclt/rng.hpp"
#include "asclt/sampling.hpp"

namespace asclt::testsupport {

/// Uniform random configuration with N points (N itself uniform on
/// [n_lo, n_hi]) on the given window.
inline PointConfiguration random_config(const Region& window, std::size_t n_lo, std::size_t n_hi,
                                        std::uint64_t seed) {
  auto eng = RngStream{seed, 0xC0FFEE}.engine();
  const std::size_t n = n_lo + eng() % (n_hi - n_lo + 1);
  const auto pts = sample_uniform(window, n, RngStream{seed, 0xFACADE});
  std::vector<double> flat;
  for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
  return PointConfiguration(window, std::move(flat), 1, seed);
}

inline PointConfiguration config_from_points(const Region& window,
                                             const std::vector<Vec>& pts,
                                             std::int64_t scale = 1) {
  std::vector<double> flat;
  for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
  return PointConfiguration(window, std::move(flat), scale, 0);
}

}  // namespace asclt::testsupport
