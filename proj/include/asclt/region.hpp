#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/rng.hpp"
#include "asclt/vecmath.hpp"

namespace asclt {

struct Box {
  Vec lower;
  Vec upper;
};

struct Ball {
  Vec center;
  double radius{0.0};
};

/// Intersection of halfspaces {x : a_i . x <= b_i}. Normals are stored
/// normalized to unit length; vertices are enumerated at construction and
/// cached (the boundedness / nonemptiness check needs them anyway).
struct HalfspacePolytope {
  std::vector<double> normals;  // m x d, row-major, unit rows
  std::vector<double> offsets;  // m
  std::vector<Vec> vertices;    // enumerated at construction
};

namespace detail {

/// Solve a small square linear system in place. Returns false when singular.
inline bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-12) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= a[ri * n + c] * b[c];
    b[ri] = s / a[ri * n + ri];
  }
  return true;
}

inline constexpr double kProbeExtent = 1e6;

}  // namespace detail

/// Geometric domain descriptor for observation windows, Voronoi targets and
/// distance-target sets. Immutable; invariants are enforced at construction
/// (boxes are proper, balls have positive radius, polytopes are bounded and
/// nonempty, verified by vertex enumeration against a probe box).
class Region {
 public:
  static Region box(Vec lower, Vec upper) {
    if (lower.empty() || lower.size() != upper.size())
      throw domain_error("box: lower/upper dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (!(lower[i] < upper[i])) throw domain_error("box: requires lower[i] < upper[i]");
    Region r;
    r.dim_ = static_cast<int>(lower.size());
    r.shape_ = Box{std::move(lower), std::move(upper)};
    r.finalize();
    return r;
  }

  static Region ball(Vec center, double radius) {
    if (center.empty()) throw domain_error("ball: empty center");
    if (!(radius > 0.0)) throw domain_error("ball: radius must be positive");
    Region r;
    r.dim_ = static_cast<int>(center.size());
    r.shape_ = Ball{std::move(center), radius};
    r.finalize();
    return r;
  }

  /// normals: m x d row-major (not necessarily unit), offsets: m entries.
  static Region polytope(std::vector<double> normals, std::vector<double> offsets, int dim) {
    if (dim < 1) throw domain_error("polytope: dimension must be >= 1");
    if (offsets.empty() || normals.size() != offsets.size() * static_cast<std::size_t>(dim))
      throw domain_error("polytope: normals/offsets size mismatch");
    HalfspacePolytope p;
    const std::size_t m = offsets.size();
    for (std::size_t i = 0; i < m; ++i) {
      double len = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double v = normals[i * dim + c];
        len += v * v;
      }
      len = std::sqrt(len);
      if (!(len > 0.0)) throw domain_error("polytope: zero normal vector");
      Vec row(dim);
      for (int c = 0; c < dim; ++c) row[c] = normals[i * dim + c] / len;
      const double off = offsets[i] / len;
      bool dup = false;
      for (std::size_t j = 0; j < p.offsets.size() && !dup; ++j) {
        double diff = std::abs(p.offsets[j] - off);
        for (int c = 0; c < dim; ++c) diff += std::abs(p.normals[j * dim + c] - row[c]);
        dup = diff < 1e-12;
      }
      if (dup) continue;
      p.normals.insert(p.normals.end(), row.begin(), row.end());
      p.offsets.push_back(off);
    }
    Region r;
    r.dim_ = dim;
    r.shape_ = std::move(p);
    r.enumerate_polytope_vertices();
    r.finalize();
    return r;
  }

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] const std::variant<Box, Ball, HalfspacePolytope>& shape() const { return shape_; }
  [[nodiscard]] bool is_box() const { return std::holds_alternative<Box>(shape_); }
  [[nodiscard]] bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  [[nodiscard]] bool is_polytope() const { return std::holds_alternative<HalfspacePolytope>(shape_); }

  /// Lebesgue volume. Exact for boxes and balls; exact for polytopes with
  /// d <= 3 (vertex enumeration + simplicial decomposition), Monte Carlo with
  /// a reported standard error otherwise.
  [[nodiscard]] double volume() const { return volume_; }
  [[nodiscard]] double volume_standard_error() const { return volume_se_; }

  /// Closed containment.
  [[nodiscard]] bool contains(PointView x) const {
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      for (int i = 0; i < dim_; ++i)
        if (x[i] < b.lower[i] || x[i] > b.upper[i]) return false;
      return true;
    }
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      return squared_distance(x, b.center) <= b.radius * b.radius;
    }
    const auto& p = std::get<HalfspacePolytope>(shape_);
    for (std::size_t i = 0; i < p.offsets.size(); ++i) {
      double dot = 0.0;
      for (int c = 0; c < dim_; ++c) dot += p.normals[i * dim_ + c] * x[c];
      if (dot > p.offsets[i] + 1e-12 * (1.0 + std::abs(p.offsets[i]))) return false;
    }
    return true;
  }

  [[nodiscard]] Box bounding_box() const {
    if (std::holds_alternative<Box>(shape_)) return std::get<Box>(shape_);
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      Vec lo(b.center), hi(b.center);
      for (int i = 0; i < dim_; ++i) {
        lo[i] -= b.radius;
        hi[i] += b.radius;
      }
      return Box{std::move(lo), std::move(hi)};
    }
    const auto& p = std::get<HalfspacePolytope>(shape_);
    Vec lo(dim_, std::numeric_limits<double>::infinity());
    Vec hi(dim_, -std::numeric_limits<double>::infinity());
    for (const auto& v : p.vertices)
      for (int i = 0; i < dim_; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    return Box{std::move(lo), std::move(hi)};
  }

  /// Dilation about the coordinate origin, s > 0.
  [[nodiscard]] Region scaled(double s) const {
    if (!(s > 0.0)) throw domain_error("scaled: factor must be positive");
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      Vec lo(b.lower), hi(b.upper);
      for (int i = 0; i < dim_; ++i) {
        lo[i] *= s;
        hi[i] *= s;
      }
      return box(std::move(lo), std::move(hi));
    }
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      Vec c(b.center);
      for (auto& v : c) v *= s;
      return ball(std::move(c), b.radius * s);
    }
    const auto& p = std::get<HalfspacePolytope>(shape_);
    std::vector<double> off(p.offsets);
    for (auto& v : off) v *= s;
    return polytope(p.normals, std::move(off), dim_);
  }

  [[nodiscard]] Region translated(PointView shift) const {
    if (static_cast<int>(shift.size()) != dim_) throw domain_error("translated: dimension mismatch");
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      Vec lo(b.lower), hi(b.upper);
      for (int i = 0; i < dim_; ++i) {
        lo[i] += shift[i];
        hi[i] += shift[i];
      }
      return box(std::move(lo), std::move(hi));
    }
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      Vec c(b.center);
      for (int i = 0; i < dim_; ++i) c[i] += shift[i];
      return ball(std::move(c), b.radius);
    }
    const auto& p = std::get<HalfspacePolytope>(shape_);
    std::vector<double> off(p.offsets);
    const std::size_t m = off.size();
    for (std::size_t i = 0; i < m; ++i) {
      double dot = 0.0;
      for (int c = 0; c < dim_; ++c) dot += p.normals[i * dim_ + c] * shift[c];
      off[i] += dot;
    }
    return polytope(p.normals, std::move(off), dim_);
  }

  /// A reference point inside the region, used to anchor scaling translations.
  [[nodiscard]] Vec anchor_point() const {
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      Vec c(dim_);
      for (int i = 0; i < dim_; ++i) c[i] = 0.5 * (b.lower[i] + b.upper[i]);
      return c;
    }
    if (std::holds_alternative<Ball>(shape_)) return std::get<Ball>(shape_).center;
    const auto& p = std::get<HalfspacePolytope>(shape_);
    Vec c(dim_, 0.0);
    for (const auto& v : p.vertices)
      for (int i = 0; i < dim_; ++i) c[i] += v[i];
    for (auto& x : c) x /= static_cast<double>(p.vertices.size());
    return c;
  }

  /// True when this region contains `inner` entirely. Exact for all pairs of
  /// supported convex shapes (corner / vertex / support-function arguments).
  [[nodiscard]] bool contains_region(const Region& inner) const {
    if (inner.dim_ != dim_) return false;
    const double tol = 1e-12;
    if (std::holds_alternative<Ball>(inner.shape_)) {
      const auto& b = std::get<Ball>(inner.shape_);
      if (std::holds_alternative<Box>(shape_)) {
        const auto& o = std::get<Box>(shape_);
        for (int i = 0; i < dim_; ++i)
          if (b.center[i] - b.radius < o.lower[i] - tol || b.center[i] + b.radius > o.upper[i] + tol)
            return false;
        return true;
      }
      if (std::holds_alternative<Ball>(shape_)) {
        const auto& o = std::get<Ball>(shape_);
        return distance(b.center, o.center) + b.radius <= o.radius + tol;
      }
      const auto& o = std::get<HalfspacePolytope>(shape_);
      for (std::size_t i = 0; i < o.offsets.size(); ++i) {
        double dot = 0.0;
        for (int c = 0; c < dim_; ++c) dot += o.normals[i * dim_ + c] * b.center[c];
        if (dot + b.radius > o.offsets[i] + tol) return false;
      }
      return true;
    }
    // Box and polytope are convex hulls of their corners / vertices.
    std::vector<Vec> pts;
    if (std::holds_alternative<Box>(inner.shape_)) {
      const auto& b = std::get<Box>(inner.shape_);
      const std::size_t corners = std::size_t{1} << dim_;
      for (std::size_t mask = 0; mask < corners; ++mask) {
        Vec v(dim_);
        for (int i = 0; i < dim_; ++i) v[i] = (mask >> i) & 1 ? b.upper[i] : b.lower[i];
        pts.push_back(std::move(v));
      }
    } else {
      pts = std::get<HalfspacePolytope>(inner.shape_).vertices;
    }
    for (const auto& v : pts)
      if (!contains_with_slack(v, tol)) return false;
    return true;
  }

  /// Euclidean distance from x to this region (0 inside). Exact.
  [[nodiscard]] double distance_to(PointView x) const {
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double d = std::max({b.lower[i] - x[i], x[i] - b.upper[i], 0.0});
        s += d * d;
      }
      return std::sqrt(s);
    }
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      return std::max(0.0, distance(x, b.center) - b.radius);
    }
    if (contains(x)) return 0.0;
    return polytope_exterior_distance(x);
  }

  /// Distance from x to the region boundary. Supported for boxes and balls.
  [[nodiscard]] double boundary_distance(PointView x) const {
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      return std::abs(distance(x, b.center) - b.radius);
    }
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      if (!contains(x)) return distance_to(x);
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i < dim_; ++i) m = std::min({m, x[i] - b.lower[i], b.upper[i] - x[i]});
      return m;
    }
    throw unsupported_error("boundary distance is not supported for halfspace polytopes");
  }

  const std::vector<Vec>& polytope_vertices() const {
    return std::get<HalfspacePolytope>(shape_).vertices;
  }

 private:
  Region() = default;

  bool contains_with_slack(PointView x, double tol) const {
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      for (int i = 0; i < dim_; ++i) {
        const double span = b.upper[i] - b.lower[i];
        if (x[i] < b.lower[i] - tol * (1.0 + span) || x[i] > b.upper[i] + tol * (1.0 + span))
          return false;
      }
      return true;
    }
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      return distance(x, b.center) <= b.radius * (1.0 + tol) + tol;
    }
    const auto& p = std::get<HalfspacePolytope>(shape_);
    for (std::size_t i = 0; i < p.offsets.size(); ++i) {
      double dot = 0.0;
      for (int c = 0; c < dim_; ++c) dot += p.normals[i * dim_ + c] * x[c];
      if (dot > p.offsets[i] + tol * (1.0 + std::abs(p.offsets[i]))) return false;
    }
    return true;
  }

  void enumerate_polytope_vertices() {
    auto& p = std::get<HalfspacePolytope>(shape_);
    const int d = dim_;
    // Augment with a probe box; feasible vertices on probe planes mean the
    // polytope itself is unbounded.
    std::vector<double> nr = p.normals;
    std::vector<double> off = p.offsets;
    for (int i = 0; i < d; ++i) {
      Vec e(d, 0.0);
      e[i] = 1.0;
      nr.insert(nr.end(), e.begin(), e.end());
      off.push_back(detail::kProbeExtent);
      e[i] = -1.0;
      nr.insert(nr.end(), e.begin(), e.end());
      off.push_back(detail::kProbeExtent);
    }
    const std::size_t m = off.size();
    const std::size_t own = p.offsets.size();

    std::vector<std::size_t> idx(d);
    std::vector<Vec> verts;
    bool touches_probe = false;

    // Iterate over all d-subsets of the m halfspaces.
    std::vector<std::size_t> comb(d);
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) comb[i] = i;
    while (true) {
      std::vector<double> a(static_cast<std::size_t>(d) * d);
      std::vector<double> b(d);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) a[r * d + c] = nr[comb[r] * d + c];
        b[r] = off[comb[r]];
      }
      if (detail::solve_dense(a, b, d)) {
        bool feasible = true;
        for (std::size_t i = 0; i < m && feasible; ++i) {
          double dot = 0.0;
          for (int c = 0; c < d; ++c) dot += nr[i * d + c] * b[c];
          feasible = dot <= off[i] + 1e-7 * (1.0 + std::abs(off[i]));
        }
        if (feasible) {
          bool on_probe = false;
          for (int r = 0; r < d && !on_probe; ++r) on_probe = comb[r] >= own;
          if (on_probe) {
            touches_probe = true;
          } else {
            bool dup = false;
            for (const auto& v : verts) {
              double diff = 0.0;
              for (int c = 0; c < d; ++c) diff += std::abs(v[c] - b[c]);
              if (diff < 1e-7) {
                dup = true;
                break;
              }
            }
            if (!dup) verts.emplace_back(b.begin(), b.end());
          }
        }
      }
      // next combination
      int pos = d - 1;
      while (pos >= 0 && comb[pos] == m - static_cast<std::size_t>(d - pos)) --pos;
      if (pos < 0) break;
      ++comb[pos];
      for (int j = pos + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
    }

    if (verts.empty()) throw domain_error("polytope: empty interior");
    if (touches_probe) throw domain_error("polytope: unbounded");
    p.vertices = std::move(verts);
  }

  double polytope_exterior_distance(PointView z) const {
    const auto& p = std::get<HalfspacePolytope>(shape_);
    const int d = dim_;
    const std::size_t m = p.offsets.size();
    double best = std::numeric_limits<double>::infinity();
    // Project z onto the affine hull of every active set of size 1..d, keep
    // feasible projections. The closest point of a convex polytope lies on
    // such an affine hull.
    std::vector<std::size_t> subset;
    auto consider = [&](const std::vector<std::size_t>& s) {
      const std::size_t k = s.size();
      std::vector<double> gram(k * k), rhs(k);
      for (std::size_t r = 0; r < k; ++r) {
        double dot = 0.0;
        for (int c = 0; c < d; ++c) dot += p.normals[s[r] * d + c] * z[c];
        rhs[r] = p.offsets[s[r]] - dot;
        for (std::size_t q = 0; q < k; ++q) {
          double g = 0.0;
          for (int c = 0; c < d; ++c) g += p.normals[s[r] * d + c] * p.normals[s[q] * d + c];
          gram[r * k + q] = g;
        }
      }
      if (!detail::solve_dense(gram, rhs, k)) return;
      Vec cand(z.begin(), z.end());
      for (std::size_t r = 0; r < k; ++r)
        for (int c = 0; c < d; ++c) cand[c] += rhs[r] * p.normals[s[r] * d + c];
      if (!contains_with_slack(cand, 1e-9)) return;
      best = std::min(best, distance(cand, z));
    };
    // enumerate subsets of size 1..d
    std::vector<std::size_t> stack;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (!stack.empty()) consider(stack);
      if (stack.size() == static_cast<std::size_t>(d)) return;
      for (std::size_t i = start; i < m; ++i) {
        stack.push_back(i);
        self(self, i + 1);
        stack.pop_back();
      }
    };
    rec(rec, 0);
    return best;
  }

  void finalize() {
    if (std::holds_alternative<Box>(shape_)) {
      const auto& b = std::get<Box>(shape_);
      double v = 1.0;
      for (int i = 0; i < dim_; ++i) v *= b.upper[i] - b.lower[i];
      volume_ = v;
      return;
    }
    if (std::holds_alternative<Ball>(shape_)) {
      const auto& b = std::get<Ball>(shape_);
      const double d = static_cast<double>(dim_);
      volume_ = std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(b.radius, d);
      return;
    }
    compute_polytope_volume();
  }

  void compute_polytope_volume() {
    const auto& p = std::get<HalfspacePolytope>(shape_);
    const int d = dim_;
    if (d == 1) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& v : p.vertices) {
        lo = std::min(lo, v[0]);
        hi = std::max(hi, v[0]);
      }
      volume_ = hi - lo;
      return;
    }
    if (d == 2) {
      Vec c = anchor_point();
      std::vector<Vec> verts = p.vertices;
      std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
      });
      double area = 0.0;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const auto& a = verts[i];
        const auto& b = verts[(i + 1) % verts.size()];
        area += a[0] * b[1] - b[0] * a[1];
      }
      volume_ = 0.5 * std::abs(area);
      return;
    }
    if (d == 3) {
      volume_ = polytope_volume_3d();
      return;
    }
    // Monte Carlo fallback for d >= 4 with a fixed internal stream.
    const Box bb = bounding_box();
    double boxv = 1.0;
    for (int i = 0; i < d; ++i) boxv *= bb.upper[i] - bb.lower[i];
    const std::size_t q = 200000;
    auto eng = RngStream{0xA5C17u, 0x70D0u}.engine();
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::size_t hits = 0;
    Vec x(d);
    for (std::size_t i = 0; i < q; ++i) {
      for (int c = 0; c < d; ++c) x[c] = bb.lower[c] + u01(eng) * (bb.upper[c] - bb.lower[c]);
      if (contains(x)) ++hits;
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(q);
    volume_ = boxv * frac;
    volume_se_ = boxv * std::sqrt(frac * (1.0 - frac) / static_cast<double>(q));
  }

  double polytope_volume_3d() const {
    const auto& p = std::get<HalfspacePolytope>(shape_);
    const Vec c = anchor_point();
    double vol = 0.0;
    for (std::size_t f = 0; f < p.offsets.size(); ++f) {
      std::vector<Vec> face;
      for (const auto& v : p.vertices) {
        double dot = 0.0;
        for (int i = 0; i < 3; ++i) dot += p.normals[f * 3 + i] * v[i];
        if (std::abs(dot - p.offsets[f]) < 1e-6 * (1.0 + std::abs(p.offsets[f]))) face.push_back(v);
      }
      if (face.size() < 3) continue;
      // orthonormal basis in the face plane, vertices ordered by angle
      Vec n{p.normals[f * 3], p.normals[f * 3 + 1], p.normals[f * 3 + 2]};
      Vec u(3), w(3);
      const int least = std::abs(n[0]) < std::abs(n[1])
                            ? (std::abs(n[0]) < std::abs(n[2]) ? 0 : 2)
                            : (std::abs(n[1]) < std::abs(n[2]) ? 1 : 2);
      Vec e(3, 0.0);
      e[least] = 1.0;
      u[0] = n[1] * e[2] - n[2] * e[1];
      u[1] = n[2] * e[0] - n[0] * e[2];
      u[2] = n[0] * e[1] - n[1] * e[0];
      const double ul = norm(u);
      for (auto& v : u) v /= ul;
      w[0] = n[1] * u[2] - n[2] * u[1];
      w[1] = n[2] * u[0] - n[0] * u[2];
      w[2] = n[0] * u[1] - n[1] * u[0];
      Vec g(3, 0.0);
      for (const auto& v : face)
        for (int i = 0; i < 3; ++i) g[i] += v[i] / static_cast<double>(face.size());
      std::sort(face.begin(), face.end(), [&](const Vec& a, const Vec& b) {
        const double aa = std::atan2((a[0] - g[0]) * w[0] + (a[1] - g[1]) * w[1] + (a[2] - g[2]) * w[2],
                                     (a[0] - g[0]) * u[0] + (a[1] - g[1]) * u[1] + (a[2] - g[2]) * u[2]);
        const double bb = std::atan2((b[0] - g[0]) * w[0] + (b[1] - g[1]) * w[1] + (b[2] - g[2]) * w[2],
                                     (b[0] - g[0]) * u[0] + (b[1] - g[1]) * u[1] + (b[2] - g[2]) * u[2]);
        return aa < bb;
      });
      for (std::size_t i = 0; i < face.size(); ++i) {
        const auto& a = face[i];
        const auto& b = face[(i + 1) % face.size()];
        const double m[9] = {a[0] - c[0], a[1] - c[1], a[2] - c[2],
                             b[0] - c[0], b[1] - c[1], b[2] - c[2],
                             g[0] - c[0], g[1] - c[1], g[2] - c[2]};
        const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                           m[2] * (m[3] * m[7] - m[4] * m[6]);
        vol += std::abs(det) / 6.0;
      }
    }
    return vol;
  }

  std::variant<Box, Ball, HalfspacePolytope> shape_;
  int dim_{0};
  double volume_{0.0};
  double volume_se_{0.0};
};

/// Target set K for the exponential-decay diagnostics: either a whole region
/// (distance 0 inside) or the boundary shell of a box or ball.
struct DistanceTarget {
  enum class Kind { whole_region, boundary };
  Kind kind{Kind::whole_region};
  Region region;

  static DistanceTarget whole(Region r) { return DistanceTarget{Kind::whole_region, std::move(r)}; }
  static DistanceTarget boundary(Region r) {
    if (r.is_polytope())
      throw unsupported_error("boundary distance target is not supported for polytopes");
    return DistanceTarget{Kind::boundary, std::move(r)};
  }
};

inline double distance_to_target(PointView x, const DistanceTarget& k) {
  if (k.kind == DistanceTarget::Kind::whole_region) return k.region.distance_to(x);
  return k.region.boundary_distance(x);
}

}  // namespace asclt
