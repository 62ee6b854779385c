#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "asclt/errors.hpp"
#include "asclt/region.hpp"

namespace asclt {

/// How Voronoi cell volumes are measured: exact 2-D polygon geometry or
/// quadrature-point classification by nearest nucleus.
struct Exact2D {};
struct MonteCarloVolume {
  std::int64_t quadrature_count{100000};
};
using VolumeMethod = std::variant<Exact2D, MonteCarloVolume>;

struct CountSpec {};

struct KnnSpec {
  int k{1};
  double m{1.0};  // edge-weight power, >= 0
};

struct CliqueSpec {
  int k{1};      // cliques of order k+1
  double r{1.0};  // graph radius before the n^{-1/d} scaling
};

struct VoronoiSpec {
  Region target;  // the set A being approximated
  VolumeMethod method{Exact2D{}};
};

using ScoreKind = std::variant<CountSpec, KnnSpec, CliqueSpec, VoronoiSpec>;

/// A functional H_n: which score is evaluated, over which window Y, with its
/// theoretical variance exponent tau and decay target K.
struct ScoreModel {
  ScoreKind kind;
  Region y;
  double tau{1.0};
  DistanceTarget k_target;
};

inline Region centered_unit_box(int d) {
  return Region::box(Vec(d, -0.5), Vec(d, 0.5));
}

inline ScoreModel count_model(Region y) {
  DistanceTarget k = DistanceTarget::whole(y);
  return ScoreModel{CountSpec{}, std::move(y), 1.0, std::move(k)};
}

inline ScoreModel knn_model(Region y, int k, double m) {
  if (k < 1) throw domain_error("knn model: k must be >= 1");
  if (m < 0.0) throw domain_error("knn model: m must be >= 0");
  DistanceTarget kt = DistanceTarget::whole(y);
  return ScoreModel{KnnSpec{k, m}, std::move(y), 1.0, std::move(kt)};
}

inline ScoreModel clique_model(Region y, int k, double r) {
  if (k < 1) throw domain_error("clique model: k must be >= 1");
  if (!(r > 0.0)) throw domain_error("clique model: r must be positive");
  DistanceTarget kt = DistanceTarget::whole(y);
  return ScoreModel{CliqueSpec{k, r}, std::move(y), 1.0, std::move(kt)};
}

/// Voronoi approximation volume. The window is [-1/2,1/2]^d, the target A
/// must sit strictly inside it, d >= 2; tau = 1 - 1/d (surface order).
/// Without an explicit method, d = 2 uses exact cell geometry and higher
/// dimensions fall back to quadrature classification.
inline ScoreModel voronoi_model(Region a,
                                std::optional<VolumeMethod> method = std::nullopt) {
  const int d = a.dimension();
  if (d < 2) throw domain_error("voronoi model: requires d >= 2");
  Region y = centered_unit_box(d);
  const Box bb = a.bounding_box();
  for (int i = 0; i < d; ++i)
    if (!(bb.lower[i] > -0.5 && bb.upper[i] < 0.5))
      throw domain_error("voronoi model: A must lie strictly inside (-1/2,1/2)^d");
  VolumeMethod vm =
      method ? *method : (d == 2 ? VolumeMethod{Exact2D{}} : VolumeMethod{MonteCarloVolume{}});
  if (d != 2 && std::holds_alternative<Exact2D>(vm))
    throw method_error("voronoi model: exact cell volumes require d = 2");
  DistanceTarget kt = DistanceTarget::boundary(a);
  return ScoreModel{VoronoiSpec{std::move(a), vm}, std::move(y),
                    1.0 - 1.0 / static_cast<double>(d), std::move(kt)};
}

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string region_literal(const Region& r) {
  std::ostringstream os;
  if (r.is_box()) {
    const auto& b = std::get<Box>(r.shape());
    os << "box(";
    for (std::size_t i = 0; i < b.lower.size(); ++i) os << (i ? "," : "") << format_real(b.lower[i]);
    os << "; ";
    for (std::size_t i = 0; i < b.upper.size(); ++i) os << (i ? "," : "") << format_real(b.upper[i]);
    os << ")";
  } else if (r.is_ball()) {
    const auto& b = std::get<Ball>(r.shape());
    os << "ball(";
    for (std::size_t i = 0; i < b.center.size(); ++i)
      os << (i ? "," : "") << format_real(b.center[i]);
    os << "; " << format_real(b.radius) << ")";
  } else {
    const auto& p = std::get<HalfspacePolytope>(r.shape());
    const int d = r.dimension();
    os << "polytope(";
    for (std::size_t i = 0; i < p.offsets.size(); ++i) {
      if (i) os << "; ";
      for (int c = 0; c < d; ++c) os << format_real(p.normals[i * d + c]) << ",";
      os << format_real(p.offsets[i]);
    }
    os << ")";
  }
  return os.str();
}

}  // namespace detail

/// Canonical descriptor used in file headers and calibration matching.
inline std::string model_id(const ScoreModel& model) {
  std::ostringstream os;
  if (std::holds_alternative<CountSpec>(model.kind)) {
    os << "count";
  } else if (std::holds_alternative<KnnSpec>(model.kind)) {
    const auto& s = std::get<KnnSpec>(model.kind);
    os << "knn(k=" << s.k << ", m=" << detail::format_real(s.m) << ")";
  } else if (std::holds_alternative<CliqueSpec>(model.kind)) {
    const auto& s = std::get<CliqueSpec>(model.kind);
    os << "clique(k=" << s.k << ", r=" << detail::format_real(s.r) << ")";
  } else {
    const auto& s = std::get<VoronoiSpec>(model.kind);
    os << "voronoi(A=" << detail::region_literal(s.target) << ", method=";
    if (std::holds_alternative<Exact2D>(s.method))
      os << "exact2d";
    else
      os << "mc(" << std::get<MonteCarloVolume>(s.method).quadrature_count << ")";
    os << ")";
  }
  os << " on " << detail::region_literal(model.y);
  return os.str();
}

}  // namespace asclt
