#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/point_set.hpp"
#include "asclt/region.hpp"
#include "asclt/rng.hpp"

namespace asclt {

namespace detail {

inline void append_uniform(const Region& region, std::size_t count, std::mt19937_64& eng,
                           std::vector<double>& out) {
  const int d = region.dimension();
  const Box bb = region.bounding_box();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec x(d);
  for (std::size_t i = 0; i < count; ++i) {
    // Rejection from the bounding box; boxes accept on the first draw.
    for (;;) {
      for (int c = 0; c < d; ++c) x[c] = bb.lower[c] + u01(eng) * (bb.upper[c] - bb.lower[c]);
      if (region.contains(x)) break;
    }
    out.insert(out.end(), x.begin(), x.end());
  }
}

}  // namespace detail

/// count i.i.d. uniform points on the region; deterministic under the stream.
inline std::vector<Vec> sample_uniform(const Region& region, std::size_t count,
                                       const RngStream& rng) {
  auto eng = rng.engine();
  std::vector<double> flat;
  flat.reserve(count * region.dimension());
  detail::append_uniform(region, count, eng, flat);
  std::vector<Vec> pts(count);
  const int d = region.dimension();
  for (std::size_t i = 0; i < count; ++i)
    pts[i].assign(flat.begin() + i * d, flat.begin() + (i + 1) * d);
  return pts;
}

/// Homogeneous Poisson sample: N ~ Poisson(intensity * volume), then N
/// i.i.d. uniform points. Regions are bounded by construction.
inline PointConfiguration sample_poisson(double intensity, const Region& region,
                                         const RngStream& rng,
                                         std::optional<std::int64_t> scale_index = std::nullopt) {
  if (!(intensity >= 0.0)) throw domain_error("sample_poisson: intensity must be >= 0");
  if (!(region.volume() > 0.0)) throw domain_error("sample_poisson: empty region");
  auto eng = rng.engine();
  const double mean = intensity * region.volume();
  std::size_t n = 0;
  if (mean > 0.0) {
    std::poisson_distribution<long long> pois(mean);
    n = static_cast<std::size_t>(pois(eng));
  }
  std::vector<double> flat;
  flat.reserve(n * region.dimension());
  detail::append_uniform(region, n, eng, flat);
  return PointConfiguration(region, std::move(flat), scale_index, rng.digest());
}

/// Sample eta_n intersected with Y directly (independent replication at a
/// single scale, no coupling): intensity n on Y, tagged with scale index n.
inline PointConfiguration sample_scaled_process(std::int64_t n, const Region& y,
                                                const RngStream& rng) {
  if (n < 1) throw domain_error("sample_scaled_process: n must be >= 1");
  return sample_poisson(static_cast<double>(n), y, rng, n);
}

/// One unit-intensity master sample on n_max^{1/d} Y; every eta_k cap Y with
/// k <= n_max is obtained from it by restrict_scaled, realizing the coupling.
inline PointConfiguration sample_master(std::int64_t n_max, const Region& y,
                                        const RngStream& rng) {
  if (n_max < 1) throw domain_error("sample_master: n_max must be >= 1");
  const double s = std::pow(static_cast<double>(n_max), 1.0 / y.dimension());
  return sample_poisson(1.0, y.scaled(s), rng, std::nullopt);
}

/// eta_n cap Y = n^{-1/d} (eta cap n^{1/d} Y) from a unit-intensity master.
/// The master window must cover n^{1/d} Y; truncation is never silent.
inline PointConfiguration restrict_scaled(const PointConfiguration& master, std::int64_t n,
                                          const Region& y) {
  if (n < 1) throw domain_error("restrict_scaled: n must be >= 1");
  if (master.scale_index())
    throw domain_error("restrict_scaled: input must be an unscaled master");
  const int d = y.dimension();
  if (master.dim() != d) throw domain_error("restrict_scaled: dimension mismatch");
  const double up = std::pow(static_cast<double>(n), 1.0 / d);
  if (!master.window().contains_region(y.scaled(up)))
    throw coverage_error("restrict_scaled: master window does not cover n^{1/d} Y");
  const double s = 1.0 / up;
  std::vector<double> flat;
  Vec x(d);
  for (std::size_t i = 0; i < master.size(); ++i) {
    const PointView p = master.point(i);
    for (int c = 0; c < d; ++c) x[c] = s * p[c];
    if (y.contains(x)) flat.insert(flat.end(), x.begin(), x.end());
  }
  return PointConfiguration(y, std::move(flat), n, master.master_seed());
}

}  // namespace asclt
