#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace asclt {

using Vec = std::vector<double>;
using PointView = std::span<const double>;

inline double squared_distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(PointView a, PointView b) { return std::sqrt(squared_distance(a, b)); }

inline double norm(PointView a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

/// Strict lexicographic order on coordinates; the deterministic tie-break for
/// equal distances.
inline bool lex_less(PointView a, PointView b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

inline bool coords_equal(PointView a, PointView b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

inline Vec to_vec(PointView a) { return Vec(a.begin(), a.end()); }

}  // namespace asclt
