#pragma once

#include <cstdint>
#include <random>

namespace asclt {

namespace detail {

/// splitmix64 finalizer; used to mix seeds and stream identifiers.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

}  // namespace detail

/// Counter-based stream key: the same (master_seed, stream_id) pair yields an
/// identical variate sequence independent of execution order or thread count.
/// Substreams for replications and purpose tags are derived, never advanced.
struct RngStream {
  std::uint64_t master_seed{0};
  std::uint64_t stream_id{0};

  /// New stream keyed by an extra tag (replication index, purpose constant).
  [[nodiscard]] RngStream derive(std::uint64_t tag) const {
    return RngStream{master_seed, detail::mix(stream_id, tag)};
  }

  [[nodiscard]] RngStream derive(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return derive(tag_a).derive(tag_b);
  }

  /// Digest identifying this stream; stored as provenance on sampled configurations.
  [[nodiscard]] std::uint64_t digest() const { return detail::mix(master_seed, stream_id); }

  /// Freshly seeded engine. Engines are throwaway values; reproducibility
  /// comes from the stream key, not from engine state reuse.
  [[nodiscard]] std::mt19937_64 engine() const {
    const std::uint64_t s0 = detail::mix(master_seed, stream_id);
    const std::uint64_t s1 = detail::splitmix64(s0);
    const std::uint64_t s2 = detail::splitmix64(s1);
    const std::uint64_t s3 = detail::splitmix64(s2);
    std::seed_seq seq{static_cast<std::uint32_t>(s0), static_cast<std::uint32_t>(s0 >> 32),
                      static_cast<std::uint32_t>(s1), static_cast<std::uint32_t>(s1 >> 32),
                      static_cast<std::uint32_t>(s2), static_cast<std::uint32_t>(s2 >> 32),
                      static_cast<std::uint32_t>(s3), static_cast<std::uint32_t>(s3 >> 32)};
    return std::mt19937_64(seq);
  }
};

/// Well-known purpose tags so independent uses of one master seed never collide.
namespace stream_purpose {
inline constexpr std::uint64_t master_sample = 0x01;
inline constexpr std::uint64_t calibration = 0x02;
inline constexpr std::uint64_t quadrature = 0x03;
inline constexpr std::uint64_t bounds_outer = 0x04;
inline constexpr std::uint64_t bounds_inner = 0x05;
inline constexpr std::uint64_t diagnostics = 0x06;
inline constexpr std::uint64_t replication = 0x07;
}  // namespace stream_purpose

}  // namespace asclt
