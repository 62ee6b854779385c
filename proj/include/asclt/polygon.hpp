#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "asclt/errors.hpp"

namespace asclt {

using Pt2 = std::array<double, 2>;

inline double cross2(const Pt2& a, const Pt2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline double dot2(const Pt2& a, const Pt2& b) { return a[0] * b[0] + a[1] * b[1]; }

/// Signed area, positive for counterclockwise rings.
inline double polygon_area(std::span<const Pt2> poly) {
  double s = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Pt2& a = poly[i];
    const Pt2& b = poly[(i + 1) % m];
    s += cross2(a, b);
  }
  return 0.5 * s;
}

/// Sutherland-Hodgman pass keeping {y : n.y <= c}. Orientation and starting
/// vertex are preserved; a polygon entirely inside comes back as an exact
/// copy, which the Voronoi prefilter relies on for bit-identical results.
inline std::vector<Pt2> clip_halfplane(const std::vector<Pt2>& poly, const Pt2& n, double c) {
  std::vector<Pt2> out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 2);
  double g_prev = dot2(n, poly[m - 1]) - c;
  for (std::size_t i = 0; i < m; ++i) {
    const double g_cur = dot2(n, poly[i]) - c;
    const bool cur_in = g_cur <= 0.0;
    const bool prev_in = g_prev <= 0.0;
    if (cur_in != prev_in) {
      const Pt2& a = poly[(i + m - 1) % m];
      const Pt2& b = poly[i];
      const double t = g_prev / (g_prev - g_cur);
      out.push_back(Pt2{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
    if (cur_in) out.push_back(poly[i]);
    g_prev = g_cur;
  }
  return out;
}

/// Drop consecutive vertices closer than tol (including the wrap-around pair).
inline void dedupe_ring(std::vector<Pt2>& poly, double tol = 1e-12) {
  if (poly.size() < 2) return;
  std::vector<Pt2> out;
  out.reserve(poly.size());
  for (const Pt2& p : poly) {
    if (out.empty() || std::abs(out.back()[0] - p[0]) > tol || std::abs(out.back()[1] - p[1]) > tol)
      out.push_back(p);
  }
  while (out.size() > 1 && std::abs(out.front()[0] - out.back()[0]) <= tol &&
         std::abs(out.front()[1] - out.back()[1]) <= tol)
    out.pop_back();
  poly = std::move(out);
}

inline std::vector<Pt2> clip_box(const std::vector<Pt2>& poly, double lx, double ly, double ux,
                                 double uy) {
  std::vector<Pt2> p = clip_halfplane(poly, Pt2{1.0, 0.0}, ux);
  p = clip_halfplane(p, Pt2{-1.0, 0.0}, -lx);
  p = clip_halfplane(p, Pt2{0.0, 1.0}, uy);
  p = clip_halfplane(p, Pt2{0.0, -1.0}, -ly);
  return p;
}

namespace detail {

inline double point_segment_dist2(const Pt2& a, const Pt2& b) {
  // distance^2 from the origin to segment [a,b]
  const Pt2 d{b[0] - a[0], b[1] - a[1]};
  const double len2 = dot2(d, d);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(-(a[0] * d[0] + a[1] * d[1]) / len2, 0.0, 1.0);
  const Pt2 q{a[0] + t * d[0], a[1] + t * d[1]};
  return dot2(q, q);
}

inline bool origin_inside(std::span<const Pt2> poly) {
  // winding test, adequate for convex rings
  bool inside = true;
  const std::size_t m = poly.size();
  double orient = polygon_area(poly) >= 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < m && inside; ++i) {
    const Pt2& a = poly[i];
    const Pt2& b = poly[(i + 1) % m];
    const Pt2 e{b[0] - a[0], b[1] - a[1]};
    inside = orient * (e[0] * (-a[1]) - e[1] * (-a[0])) >= 0.0;
  }
  return inside;
}

inline double arc_contrib(const Pt2& u, const Pt2& v, double r) {
  return 0.5 * r * r * std::atan2(cross2(u, v), dot2(u, v));
}

}  // namespace detail

/// Area of (convex CCW polygon) intersect (closed disk of radius r at c).
/// Exact early outs: a polygon inside the disk reproduces the shoelace area
/// term by term, a polygon that misses the disk returns exactly 0, a disk
/// interior to the polygon returns pi r^2. The general case uses the Green
/// decomposition into chord triangles and circular sectors.
inline double disk_overlap_area(std::span<const Pt2> poly, const Pt2& center, double r) {
  const std::size_t m = poly.size();
  if (m < 3) return 0.0;
  const double r2 = r * r;
  std::vector<Pt2> v(m);
  bool all_inside = true;
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = Pt2{poly[i][0] - center[0], poly[i][1] - center[1]};
    all_inside = all_inside && dot2(v[i], v[i]) <= r2;
  }
  if (all_inside) return polygon_area(v);

  bool any_edge_near = false;
  for (std::size_t i = 0; i < m && !any_edge_near; ++i)
    any_edge_near = detail::point_segment_dist2(v[i], v[(i + 1) % m]) <= r2;
  if (!any_edge_near) {
    if (detail::origin_inside(v)) return M_PI * r2;  // disk strictly inside
    return 0.0;                                      // disjoint
  }

  double area = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Pt2& a = v[i];
    const Pt2& b = v[(i + 1) % m];
    const double da = dot2(a, a), db = dot2(b, b);
    if (da <= r2 && db <= r2) {
      area += 0.5 * cross2(a, b);
      continue;
    }
    // intersect the segment a + t (b-a), t in [0,1], with the circle
    const Pt2 d{b[0] - a[0], b[1] - a[1]};
    const double A = dot2(d, d);
    const double B = 2.0 * (a[0] * d[0] + a[1] * d[1]);
    const double C = da - r2;
    const double disc = B * B - 4.0 * A * C;
    double t1 = 2.0, t2 = -1.0;
    if (disc > 0.0 && A > 0.0) {
      const double sq = std::sqrt(disc);
      t1 = (-B - sq) / (2.0 * A);
      t2 = (-B + sq) / (2.0 * A);
    }
    if (t2 <= 0.0 || t1 >= 1.0 || t1 >= t2) {
      area += detail::arc_contrib(a, b, r);  // chord never enters the disk
      continue;
    }
    const double s1 = std::max(t1, 0.0);
    const double s2 = std::min(t2, 1.0);
    const Pt2 p1{a[0] + s1 * d[0], a[1] + s1 * d[1]};
    const Pt2 p2{a[0] + s2 * d[0], a[1] + s2 * d[1]};
    if (da > r2) area += detail::arc_contrib(a, p1, r);
    area += 0.5 * cross2(p1, p2);
    if (db > r2) area += detail::arc_contrib(p2, b, r);
  }
  return area;
}

}  // namespace asclt
