#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/malliavin.hpp"
#include "asclt/region.hpp"
#include "asclt/rng.hpp"
#include "asclt/sampling.hpp"
#include "asclt/score_model.hpp"

namespace asclt {

/// Knobs of the quantitative bound machinery: the p'' of the decay integral,
/// the constant c_{p'} and shape alpha of the fitted profile (inputs, never
/// assumed), the moment exponents p, q, and the Monte Carlo budget.
struct BoundConfig {
  double p_dprime{0.5};
  double c_pprime{1.0};
  double alpha{1.0};
  double p{0.5};
  double q{0.5};
  std::int64_t outer_samples{200};
  std::int64_t inner_reps{100};

  void validate() const {
    if (!(p_dprime > 0.0 && p_dprime < 1.0))
      throw domain_error("bound config: p'' must lie in (0,1)");
    if (!(c_pprime > 0.0 && alpha > 0.0 && p > 0.0 && q > 0.0))
      throw domain_error("bound config: constants must be positive");
    if (outer_samples < 1 || inner_reps < 1)
      throw domain_error("bound config: sampling budget must be positive");
  }
};

/// A nonnegative Monte Carlo estimate with its standard error; plug-in power
/// estimates also carry a first-order bias bound.
struct BoundEstimate {
  double value{0.0};
  double standard_error{0.0};
  std::int64_t samples_used{0};
  double bias_bound{0.0};
};

namespace detail {

struct MeanSe {
  double mean{0.0};
  double se{0.0};
};

inline MeanSe mean_se(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  s2 = v.size() > 1 ? s2 / (n - 1.0) : 0.0;
  return MeanSe{m, std::sqrt(s2 / n)};
}

}  // namespace detail

/// I_{K,n} = n Int_Y exp(-p'' c_{p'} n^{a/d} d(x,K)^a / (2^{2a+3}(4+p''))) dx.
/// Exact (n times vol(Y), zero error) when K covers Y so the distance
/// vanishes; Monte Carlo quadrature otherwise.
inline BoundEstimate compute_ikn(const Region& y, const DistanceTarget& k, std::int64_t n,
                                 const BoundConfig& cfg, std::int64_t quad_points,
                                 const RngStream& rng) {
  cfg.validate();
  if (quad_points < 1000) throw precision_error("compute_ikn: needs quad_points >= 1000");
  const double nn = static_cast<double>(n);
  if (k.kind == DistanceTarget::Kind::whole_region && k.region.contains_region(y))
    return BoundEstimate{nn * y.volume(), 0.0, 0};

  const double a = cfg.alpha;
  const double c = cfg.p_dprime * cfg.c_pprime * std::pow(nn, a / y.dimension()) /
                   (std::pow(2.0, 2.0 * a + 3.0) * (4.0 + cfg.p_dprime));
  auto eng = rng.engine();
  const Box bb = y.bounding_box();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec x(y.dimension());
  std::vector<double> g(static_cast<std::size_t>(quad_points));
  for (std::int64_t s = 0; s < quad_points; ++s) {
    for (;;) {
      for (int i = 0; i < y.dimension(); ++i)
        x[i] = bb.lower[i] + u01(eng) * (bb.upper[i] - bb.lower[i]);
      if (y.contains(x)) break;
    }
    const double dist = distance_to_target(x, k);
    g[static_cast<std::size_t>(s)] = std::exp(-c * std::pow(dist, a));
  }
  const auto ms = detail::mean_se(g);
  return BoundEstimate{nn * y.volume() * ms.mean, nn * y.volume() * ms.se, quad_points};
}

namespace detail {

/// Plug-in p^beta with Wilson-based first-order bias note.
struct PowerTerm {
  double value{0.0};
  double bias{0.0};
};

inline PowerTerm plugin_power(const ProbabilityEstimate& p, double beta) {
  if (p.p_hat <= 0.0) return PowerTerm{0.0, 0.0};  // vanishing integrand cell
  return PowerTerm{std::pow(p.p_hat, beta),
                   beta * p.standard_error / std::pow(p.p_hat, 1.0 - beta)};
}

inline ProbabilityEstimate inner_add_one_prob(const ScoreModel& model, std::int64_t n, PointView x,
                                              std::int64_t reps, const RngStream& rng) {
  std::int64_t hits = 0;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    const PointConfiguration cfg = sample_scaled_process(n, model.y, rng.derive(rep));
    if (add_one_cost_nonzero(model, cfg, x)) ++hits;
  }
  return wilson_estimate(hits, reps);
}

inline ProbabilityEstimate inner_second_diff_prob(const ScoreModel& model, std::int64_t n,
                                                  PointView x1, PointView x2, std::int64_t reps,
                                                  const RngStream& rng) {
  std::int64_t hits = 0;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    const PointConfiguration cfg = sample_scaled_process(n, model.y, rng.derive(rep));
    if (second_difference_nonzero(model, cfg, x1, x2)) ++hits;
  }
  return wilson_estimate(hits, reps);
}

}  // namespace detail

/// psi_x(H_n, beta) = n Int_Y P(D^2_{x1,x} H_n != 0)^beta dx1, by outer Monte
/// Carlo over x1 and inner replication of the nonzero probability. The
/// ambient integral collapses to Y through the indicator reduction.
inline BoundEstimate estimate_psi(const ScoreModel& model, std::int64_t n, PointView x,
                                  double beta, const BoundConfig& cfg, const RngStream& rng) {
  cfg.validate();
  if (cfg.inner_reps < 30) throw precision_error("estimate_psi: needs inner_reps >= 30");
  if (!model.y.contains(x)) throw domain_error("estimate_psi: x must lie in Y");
  const double factor = static_cast<double>(n) * model.y.volume();
  std::vector<double> vals(static_cast<std::size_t>(cfg.outer_samples));
  double bias = 0.0;
  for (std::int64_t o = 0; o < cfg.outer_samples; ++o) {
    const RngStream os = rng.derive(stream_purpose::bounds_outer, o);
    const Vec x1 = sample_uniform(model.y, 1, os)[0];
    const auto p = detail::inner_second_diff_prob(model, n, x1, x, cfg.inner_reps,
                                                  os.derive(stream_purpose::bounds_inner));
    const auto term = detail::plugin_power(p, beta);
    vals[static_cast<std::size_t>(o)] = term.value;
    bias += term.bias;
  }
  const auto ms = detail::mean_se(vals);
  return BoundEstimate{factor * ms.mean, factor * ms.se,
                       cfg.outer_samples * cfg.inner_reps,
                       factor * bias / static_cast<double>(cfg.outer_samples)};
}

/// Gamma_2(H_n) = Var(H_n)^{-3/2} Int P(D_x H_n != 0)^{(1+p)/(4+p)} dx.
inline BoundEstimate estimate_gamma2(const ScoreModel& model, std::int64_t n, double var_h,
                                     const BoundConfig& cfg, const RngStream& rng) {
  cfg.validate();
  if (!(var_h > 0.0)) throw dependency_error("estimate_gamma2: needs calibrated Var(H_n) > 0");
  const double beta = (1.0 + cfg.p) / (4.0 + cfg.p);
  const double factor = static_cast<double>(n) * model.y.volume() / std::pow(var_h, 1.5);
  std::vector<double> vals(static_cast<std::size_t>(cfg.outer_samples));
  double bias = 0.0;
  for (std::int64_t o = 0; o < cfg.outer_samples; ++o) {
    const RngStream os = rng.derive(stream_purpose::bounds_outer, o);
    const Vec x = sample_uniform(model.y, 1, os)[0];
    const auto p = detail::inner_add_one_prob(model, n, x, cfg.inner_reps,
                                              os.derive(stream_purpose::bounds_inner));
    const auto term = detail::plugin_power(p, beta);
    vals[static_cast<std::size_t>(o)] = term.value;
    bias += term.bias;
  }
  const auto ms = detail::mean_se(vals);
  return BoundEstimate{factor * ms.mean, factor * ms.se,
                       cfg.outer_samples * cfg.inner_reps,
                       factor * bias / static_cast<double>(cfg.outer_samples)};
}

/// Gamma_1(H_n) = Var(H_n)^{-1} sqrt(Int psi_x(q/(4(4+q)))^2 dx +
/// Int psi_x(q/(2(4+q)))^2 dx). Nested Monte Carlo: cost is
/// outer * outer * inner evaluations — the heavy quantity.
inline BoundEstimate estimate_gamma1(const ScoreModel& model, std::int64_t n, double var_h,
                                     const BoundConfig& cfg, const RngStream& rng) {
  cfg.validate();
  if (!(var_h > 0.0)) throw dependency_error("estimate_gamma1: needs calibrated Var(H_n) > 0");
  if (cfg.inner_reps < 30) throw precision_error("estimate_gamma1: needs inner_reps >= 30");
  const double beta1 = cfg.q / (4.0 * (4.0 + cfg.q));
  const double beta2 = cfg.q / (2.0 * (4.0 + cfg.q));
  const double factor = static_cast<double>(n) * model.y.volume();
  std::vector<double> sq(static_cast<std::size_t>(cfg.outer_samples));
  for (std::int64_t o = 0; o < cfg.outer_samples; ++o) {
    const RngStream os = rng.derive(stream_purpose::bounds_outer, o * 2 + 1);
    const Vec x = sample_uniform(model.y, 1, os)[0];
    // One nested psi pass; both powers reuse the same inner probabilities.
    double psi1 = 0.0, psi2 = 0.0;
    for (std::int64_t o1 = 0; o1 < cfg.outer_samples; ++o1) {
      const RngStream is = os.derive(stream_purpose::bounds_outer, o1);
      const Vec x1 = sample_uniform(model.y, 1, is)[0];
      const auto p = detail::inner_second_diff_prob(model, n, x1, x, cfg.inner_reps,
                                                    is.derive(stream_purpose::bounds_inner));
      psi1 += detail::plugin_power(p, beta1).value;
      psi2 += detail::plugin_power(p, beta2).value;
    }
    psi1 *= factor / static_cast<double>(cfg.outer_samples);
    psi2 *= factor / static_cast<double>(cfg.outer_samples);
    sq[static_cast<std::size_t>(o)] = psi1 * psi1 + psi2 * psi2;
  }
  const auto ms = detail::mean_se(sq);
  const double integral = factor * ms.mean;  // Int (psi1^2 + psi2^2) dx
  const double value = std::sqrt(std::max(0.0, integral)) / var_h;
  // Delta method through sqrt.
  const double se =
      integral > 0.0 ? factor * ms.se / (2.0 * std::sqrt(integral)) / var_h : factor * ms.se / var_h;
  return BoundEstimate{value, se, cfg.outer_samples * cfg.outer_samples * cfg.inner_reps, 0.0};
}

/// Theta(H_{n1}, H_{n2}): the two nonzero-probability profiles share the
/// ambient coordinate, so the integral runs over the smaller scaled window.
inline BoundEstimate estimate_theta(const ScoreModel& model, std::int64_t n1, std::int64_t n2,
                                    double var1, double var2, const BoundConfig& cfg,
                                    const RngStream& rng) {
  cfg.validate();
  if (!(var1 > 0.0 && var2 > 0.0))
    throw dependency_error("estimate_theta: needs calibrated variances");
  const double a = cfg.p / (4.0 * (4.0 + cfg.p));
  const int d = model.y.dimension();
  const std::int64_t nmin = std::min(n1, n2);
  const double factor =
      static_cast<double>(nmin) * model.y.volume() / std::sqrt(var1 * var2);
  const double s1 = std::pow(static_cast<double>(n1), -1.0 / d);
  const double s2 = std::pow(static_cast<double>(n2), -1.0 / d);
  const double smin = std::pow(static_cast<double>(nmin), 1.0 / d);
  const Region common = model.y.scaled(smin);
  std::vector<double> vals(static_cast<std::size_t>(cfg.outer_samples));
  double bias = 0.0;
  Vec y1(d), y2(d);
  for (std::int64_t o = 0; o < cfg.outer_samples; ++o) {
    const RngStream os = rng.derive(stream_purpose::bounds_outer, o);
    const Vec x = sample_uniform(common, 1, os)[0];  // ambient coordinate
    for (int c = 0; c < d; ++c) {
      y1[c] = s1 * x[c];
      y2[c] = s2 * x[c];
    }
    const auto p1 = detail::inner_add_one_prob(model, n1, y1, cfg.inner_reps,
                                               os.derive(stream_purpose::bounds_inner, 1));
    const auto p2 = detail::inner_add_one_prob(model, n2, y2, cfg.inner_reps,
                                               os.derive(stream_purpose::bounds_inner, 2));
    const auto t1 = detail::plugin_power(p1, a);
    const auto t2 = detail::plugin_power(p2, a);
    vals[static_cast<std::size_t>(o)] = t1.value * t2.value;
    bias += t1.bias * t2.value + t2.bias * t1.value;
  }
  const auto ms = detail::mean_se(vals);
  return BoundEstimate{factor * ms.mean, factor * ms.se,
                       2 * cfg.outer_samples * cfg.inner_reps,
                       factor * bias / static_cast<double>(cfg.outer_samples)};
}

/// Generic single-tuple Lambda(H_{n1},H_{n2},H_{n3},H_{n4}): product of psi
/// profiles at the first two scales over the shared ambient coordinate,
/// normalized by all four variances.
inline BoundEstimate estimate_lambda(const ScoreModel& model, std::int64_t n1, std::int64_t n2,
                                     std::int64_t n3, std::int64_t n4,
                                     const std::array<double, 4>& vars, const BoundConfig& cfg,
                                     const RngStream& rng) {
  cfg.validate();
  // n3 and n4 enter only through their variances in the normalizer.
  (void)n3;
  (void)n4;
  for (double v : vars)
    if (!(v > 0.0)) throw dependency_error("estimate_lambda: needs calibrated variances");
  const double beta = cfg.q / (4.0 * (4.0 + cfg.q));
  const int d = model.y.dimension();
  const std::int64_t nmin = std::min(n1, n2);
  const double norm = std::sqrt(std::sqrt(vars[0] * vars[1] * vars[2] * vars[3]));
  const double factor = static_cast<double>(nmin) * model.y.volume();
  const double s1 = std::pow(static_cast<double>(n1), -1.0 / d);
  const double s2 = std::pow(static_cast<double>(n2), -1.0 / d);
  const Region common = model.y.scaled(std::pow(static_cast<double>(nmin), 1.0 / d));
  const double f1 = static_cast<double>(n1) * model.y.volume();
  const double f2 = static_cast<double>(n2) * model.y.volume();
  std::vector<double> vals(static_cast<std::size_t>(cfg.outer_samples));
  Vec y1(d), y2(d);
  for (std::int64_t o = 0; o < cfg.outer_samples; ++o) {
    const RngStream os = rng.derive(stream_purpose::bounds_outer, o);
    const Vec x = sample_uniform(common, 1, os)[0];
    for (int c = 0; c < d; ++c) {
      y1[c] = s1 * x[c];
      y2[c] = s2 * x[c];
    }
    double psi_a = 0.0, psi_b = 0.0;
    for (std::int64_t o1 = 0; o1 < cfg.outer_samples; ++o1) {
      const RngStream is = os.derive(stream_purpose::bounds_outer, o1);
      const Vec xa = sample_uniform(model.y, 1, is.derive(1))[0];
      const auto pa = detail::inner_second_diff_prob(model, n1, xa, y1, cfg.inner_reps,
                                                     is.derive(stream_purpose::bounds_inner, 1));
      psi_a += detail::plugin_power(pa, beta).value;
      const Vec xb = sample_uniform(model.y, 1, is.derive(2))[0];
      const auto pb = detail::inner_second_diff_prob(model, n2, xb, y2, cfg.inner_reps,
                                                     is.derive(stream_purpose::bounds_inner, 2));
      psi_b += detail::plugin_power(pb, beta).value;
    }
    psi_a *= f1 / static_cast<double>(cfg.outer_samples);
    psi_b *= f2 / static_cast<double>(cfg.outer_samples);
    vals[static_cast<std::size_t>(o)] = psi_a * psi_b;
  }
  const auto ms = detail::mean_se(vals);
  const double integral = factor * ms.mean;
  const double value = std::sqrt(std::max(0.0, integral)) / norm;
  const double se =
      integral > 0.0 ? factor * ms.se / (2.0 * std::sqrt(integral)) / norm : factor * ms.se / norm;
  return BoundEstimate{value, se, 2 * cfg.outer_samples * cfg.outer_samples * cfg.inner_reps, 0.0};
}

/// |E e^{itF} - e^{-t^2/2}| over replicated standardized values.
inline double cf_gap(std::span<const double> f_samples, double t) {
  if (f_samples.size() < 100) throw precision_error("cf_gap: needs >= 100 samples");
  std::complex<double> mean(0.0, 0.0);
  for (double f : f_samples) mean += std::complex<double>(std::cos(t * f), std::sin(t * f));
  mean /= static_cast<double>(f_samples.size());
  return std::abs(mean - std::complex<double>(std::exp(-t * t / 2.0), 0.0));
}

/// Standard error of the empirical characteristic function at t (combined
/// real/imaginary spread), for the one-sided inequality budget.
inline double cf_gap_standard_error(std::span<const double> f_samples, double t) {
  const double n = static_cast<double>(f_samples.size());
  double mr = 0.0, mi = 0.0;
  for (double f : f_samples) {
    mr += std::cos(t * f);
    mi += std::sin(t * f);
  }
  mr /= n;
  mi /= n;
  double vr = 0.0, vi = 0.0;
  for (double f : f_samples) {
    vr += (std::cos(t * f) - mr) * (std::cos(t * f) - mr);
    vi += (std::sin(t * f) - mi) * (std::sin(t * f) - mi);
  }
  return std::sqrt((vr + vi) / (n - 1.0) / n);
}

}  // namespace asclt
