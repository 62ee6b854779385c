#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/point_set.hpp"
#include "asclt/sampling.hpp"
#include "asclt/scores.hpp"

namespace asclt {

/// Add-one cost D_y H_n = H_n(config + y) - H_n(config) on standardized
/// totals. Points outside Y contribute exactly 0 (the indicator reduction of
/// the difference operator to the window).
inline double add_one_cost(const ScoreModel& model, const PointConfiguration& config,
                           PointView y) {
  if (!model.y.contains(y)) return 0.0;
  const PointConfiguration plus = config.with_points({to_vec(y)});
  return evaluate_total(model, plus).standardized - evaluate_total(model, config).standardized;
}

/// Same operator through the per-point score sums; an independent route used
/// to cross-check the indicator reduction.
inline double add_one_cost_scorewise(const ScoreModel& model, const PointConfiguration& config,
                                     PointView y) {
  if (!model.y.contains(y)) return 0.0;
  const PointConfiguration plus = config.with_points({to_vec(y)});
  return sum_of_scores(model, plus) - sum_of_scores(model, config);
}

/// Iterated difference D^2_{y1,y2} H_n, symmetric in (y1, y2) by definition.
/// The pair is evaluated in canonical order so the symmetry holds exactly in
/// floating point as well.
inline double second_difference(const ScoreModel& model, const PointConfiguration& config,
                                PointView y1, PointView y2) {
  if (coords_equal(y1, y2)) throw domain_error("second_difference: y1 and y2 must differ");
  if (lex_less(y2, y1)) std::swap(y1, y2);
  const bool in1 = model.y.contains(y1);
  const bool in2 = model.y.contains(y2);
  if (!in1 || !in2) return 0.0;
  const double h00 = evaluate_total(model, config).standardized;
  const double h1 = evaluate_total(model, config.with_points({to_vec(y1)})).standardized;
  const double h2 = evaluate_total(model, config.with_points({to_vec(y2)})).standardized;
  const double h12 =
      evaluate_total(model, config.with_points({to_vec(y1), to_vec(y2)})).standardized;
  return h12 - h1 - h2 + h00;
}

namespace detail {

/// Scale-aware zero test for difference operators. Totals of desk-scale
/// functionals carry O(|H| eps) summation noise, so "nonzero" means larger
/// than 1e-9 of the total magnitude. Clique and count differences are exact
/// integers and unaffected.
inline bool nonzero_vs_scale(double value, double scale) {
  return std::abs(value) > 1e-9 * std::max(1.0, scale);
}

}  // namespace detail

/// True when D_y H_n != 0 beyond numerical noise.
inline bool add_one_cost_nonzero(const ScoreModel& model, const PointConfiguration& config,
                                 PointView y) {
  if (!model.y.contains(y)) return false;
  const PointConfiguration plus = config.with_points({to_vec(y)});
  const double h0 = evaluate_total(model, config).standardized;
  const double h1 = evaluate_total(model, plus).standardized;
  return detail::nonzero_vs_scale(h1 - h0, std::max(std::abs(h0), std::abs(h1)));
}

/// True when D^2_{y1,y2} H_n != 0 beyond numerical noise.
inline bool second_difference_nonzero(const ScoreModel& model, const PointConfiguration& config,
                                      PointView y1, PointView y2) {
  if (lex_less(y2, y1)) std::swap(y1, y2);
  if (!model.y.contains(y1) || !model.y.contains(y2)) return false;
  const double h00 = evaluate_total(model, config).standardized;
  const double h1 = evaluate_total(model, config.with_points({to_vec(y1)})).standardized;
  const double h2 = evaluate_total(model, config.with_points({to_vec(y2)})).standardized;
  const double h12 =
      evaluate_total(model, config.with_points({to_vec(y1), to_vec(y2)})).standardized;
  const double scale = std::max({std::abs(h00), std::abs(h1), std::abs(h2), std::abs(h12)});
  return detail::nonzero_vs_scale(h12 - h1 - h2 + h00, scale);
}

namespace detail {

/// Per-point score of `i` evaluated on (config  extra) restricted to the
/// closed ball B(x_i, r), plus x_i itself.
inline double restricted_score(const ScoreModel& model, const PointConfiguration& config,
                               std::uint32_t i, const std::vector<Vec>& extra, double r) {
  const PointView x = config.point(i);
  std::vector<double> flat(x.begin(), x.end());
  const double r2 = r * r;
  for (std::uint32_t j = 0; j < config.size(); ++j) {
    if (j == i) continue;
    if (squared_distance(x, config.point(j)) <= r2) {
      const PointView p = config.point(j);
      flat.insert(flat.end(), p.begin(), p.end());
    }
  }
  for (const auto& e : extra)
    if (squared_distance(x, PointView(e)) <= r2) flat.insert(flat.end(), e.begin(), e.end());
  PointConfiguration sub(config.window(), std::move(flat), config.scale_index(),
                         config.master_seed());
  return standardized_point_score(model, sub, 0);
}

}  // namespace detail

/// Smallest grid radius from which the score of point i stops changing, with
/// stability persisting through every larger grid value. A lower-bound
/// certificate for one realization and one extra-point set, not a radius
/// valid for every such set; the top grid value is returned when the score
/// never settles (flagged via `stable`).
struct StabilizationProxy {
  double radius{0.0};
  bool stable{false};
};

inline StabilizationProxy stabilization_radius_proxy(const ScoreModel& model,
                                                     const PointConfiguration& config,
                                                     std::uint32_t i,
                                                     const std::vector<double>& r_grid,
                                                     const std::vector<Vec>& extra_points) {
  if (r_grid.empty()) throw domain_error("stabilization_radius_proxy: empty grid");
  for (std::size_t g = 1; g < r_grid.size(); ++g)
    if (!(r_grid[g] > r_grid[g - 1]))
      throw domain_error("stabilization_radius_proxy: grid must increase");
  const PointConfiguration full = extra_points.empty() ? config : config.with_points(extra_points);
  std::uint32_t idx = i;  // index in `full` is unchanged: extras are appended
  const double reference = standardized_point_score(model, full, idx);

  std::size_t first_stable = r_grid.size();
  for (std::size_t g = r_grid.size(); g-- > 0;) {
    const double s = detail::restricted_score(model, config, i, extra_points, r_grid[g]);
    if (s == reference)
      first_stable = g;
    else
      break;
  }
  if (first_stable == r_grid.size()) return StabilizationProxy{r_grid.back(), false};
  return StabilizationProxy{r_grid[first_stable], true};
}

/// Probability estimate with a Wilson-interval standard error.
struct ProbabilityEstimate {
  double p_hat{0.0};
  double standard_error{0.0};
  std::int64_t reps{0};
};

inline ProbabilityEstimate wilson_estimate(std::int64_t hits, std::int64_t reps) {
  const double n = static_cast<double>(reps);
  const double p = static_cast<double>(hits) / n;
  const double denom = 1.0 + 1.0 / n;
  const double half = std::sqrt(std::max(0.0, p * (1.0 - p) / n + 1.0 / (4.0 * n * n))) / denom;
  return ProbabilityEstimate{p, half, reps};
}

/// P(xi_n(x, (eta_n cap Y) u {x} u A_extra) != 0) over fresh realizations.
inline ProbabilityEstimate nonzero_score_prob(const ScoreModel& model, std::int64_t n, PointView x,
                                              const std::vector<Vec>& a_extra, std::int64_t reps,
                                              const RngStream& rng) {
  if (reps < 100) throw precision_error("nonzero_score_prob: needs reps >= 100");
  if (!model.y.contains(x)) throw domain_error("nonzero_score_prob: x must lie in Y");
  std::int64_t hits = 0;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    PointConfiguration cfg = sample_scaled_process(n, model.y, rng.derive(rep));
    std::vector<Vec> add;
    add.push_back(to_vec(x));
    for (const auto& e : a_extra) add.push_back(e);
    const PointConfiguration aug = cfg.with_points(add);
    const std::uint32_t xi_index = static_cast<std::uint32_t>(cfg.size());
    const double s = standardized_point_score(model, aug, xi_index);
    if (detail::nonzero_vs_scale(s, 1.0)) ++hits;
  }
  return wilson_estimate(hits, reps);
}

/// Fitted exponential decay profile C exp(-c (n^{1/d} dist)^alpha).
struct DecayFit {
  double c_big{1.0};     // multiplicative constant C
  double c_rate{0.0};    // rate c
  double alpha{1.0};     // shape exponent (grid-selected)
  double residual{0.0};  // max |log p - log fit|
};

/// Least-squares fit of log p against -(c)(n^{1/d} dist)^alpha over the fixed
/// shape grid alpha in {0.5, 1, 1.5, 2}. The shape grid stays fixed: alpha is
/// a constant of the model class and the diagnostics only need the profile.
inline DecayFit fit_decay(const std::vector<double>& distances,
                          const std::vector<double>& probabilities, std::int64_t n, int dim) {
  if (distances.size() != probabilities.size() || distances.size() < 4)
    throw domain_error("fit_decay: needs >= 4 (distance, probability) pairs");
  int below_half = 0;
  for (double p : probabilities) {
    if (!(p > 0.0 && p <= 1.0)) throw domain_error("fit_decay: probabilities must lie in (0,1]");
    if (p < 0.5) ++below_half;
  }
  if (below_half < 4)
    throw precision_error("fit_decay: needs at least 4 probabilities below 0.5");
  const double lo = *std::min_element(probabilities.begin(), probabilities.end());
  const double hi = *std::max_element(probabilities.begin(), probabilities.end());
  if (lo == hi) throw flat_data_error("fit_decay: constant probabilities carry no decay");

  const double scale = std::pow(static_cast<double>(n), 1.0 / dim);
  DecayFit best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    // linear regression of log p on z = (n^{1/d} dist)^alpha
    double sz = 0, szz = 0, sy = 0, szy = 0;
    const double m = static_cast<double>(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
      const double z = std::pow(scale * distances[i], alpha);
      const double yv = std::log(probabilities[i]);
      sz += z;
      szz += z * z;
      sy += yv;
      szy += z * yv;
    }
    const double denom = m * szz - sz * sz;
    if (std::abs(denom) < 1e-30) continue;
    const double slope = (m * szy - sz * sy) / denom;
    const double inter = (sy - slope * sz) / m;
    double sse = 0.0, maxdev = 0.0;
    for (std::size_t i = 0; i < distances.size(); ++i) {
      const double z = std::pow(scale * distances[i], alpha);
      const double dev = std::log(probabilities[i]) - (inter + slope * z);
      sse += dev * dev;
      maxdev = std::max(maxdev, std::abs(dev));
    }
    if (sse < best_sse) {
      best_sse = sse;
      best = DecayFit{std::exp(inter), -slope, alpha, maxdev};
    }
  }
  if (!(best.c_rate > 0.0))
    throw flat_data_error("fit_decay: no decaying profile fits the data");
  return best;
}

}  // namespace asclt
