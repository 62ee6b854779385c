#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "asclt/errors.hpp"
#include "asclt/parallel.hpp"
#include "asclt/sampling.hpp"
#include "asclt/scores.hpp"
#include "asclt/trajectory.hpp"

namespace asclt {

struct CalibrationEntry {
  std::int64_t k{0};
  double mean{0.0};
  double variance{0.0};
  std::int64_t reps{0};
  double se_mean{0.0};
  double se_var{0.0};
};

/// Empirical mean/variance of H_k on a replication grid plus the fitted
/// variance power law. Off-grid lookups: mean through piecewise-linear
/// interpolation of mean/k (the models are near-linear in the mean), variance
/// through the fitted power law; grid points always serve stored values.
struct CalibrationTable {
  std::string model;
  std::vector<CalibrationEntry> entries;  // ascending k
  double tau_hat{0.0};
  double log_multiplier{0.0};

  [[nodiscard]] bool covers(std::int64_t k_lo, std::int64_t k_hi) const {
    return !entries.empty() && entries.front().k <= k_lo && entries.back().k >= k_hi;
  }

  [[nodiscard]] const CalibrationEntry* find(std::int64_t k) const {
    for (const auto& e : entries)
      if (e.k == k) return &e;
    return nullptr;
  }

  [[nodiscard]] double mean_at(std::int64_t k) const {
    if (const auto* e = find(k)) return e->mean;
    const auto it = std::upper_bound(entries.begin(), entries.end(), k,
                                     [](std::int64_t v, const CalibrationEntry& e) { return v < e.k; });
    if (it == entries.begin() || it == entries.end())
      throw dependency_error("calibration: k outside the calibrated range");
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double rl = lo.mean / static_cast<double>(lo.k);
    const double rh = hi.mean / static_cast<double>(hi.k);
    const double t = static_cast<double>(k - lo.k) / static_cast<double>(hi.k - lo.k);
    return (rl + t * (rh - rl)) * static_cast<double>(k);
  }

  [[nodiscard]] double var_at(std::int64_t k) const {
    if (const auto* e = find(k)) return e->variance;
    if (entries.empty() || k < entries.front().k || k > entries.back().k)
      throw dependency_error("calibration: k outside the calibrated range");
    return std::exp(log_multiplier + tau_hat * std::log(static_cast<double>(k)));
  }
};

/// Independent replications of H_k on a grid of scales; jackknife standard
/// errors; least-squares power-law fit of the variance.
inline CalibrationTable calibrate(const ScoreModel& model, const std::vector<std::int64_t>& k_grid,
                                  std::int64_t reps, const RngStream& rng, int threads = 1) {
  if (reps < 200) throw precision_error("calibrate: needs reps >= 200");
  if (k_grid.size() < 4) throw domain_error("calibrate: grid needs >= 4 points");
  for (std::size_t i = 1; i < k_grid.size(); ++i)
    if (!(k_grid[i] > k_grid[i - 1])) throw domain_error("calibrate: grid must increase");
  if (k_grid.front() < 1 || k_grid.back() < 8 * k_grid.front())
    throw domain_error("calibrate: grid must span a factor >= 8");

  CalibrationTable table;
  table.model = model_id(model);
  for (const std::int64_t k : k_grid) {
    std::vector<double> h(static_cast<std::size_t>(reps));
    parallel_for_indexed(h.size(), threads, [&](std::size_t rep) {
      const RngStream rs = rng.derive(stream_purpose::calibration)
                               .derive(static_cast<std::uint64_t>(k), rep);
      h[rep] = evaluate_total(model, sample_scaled_process(k, model.y, rs)).standardized;
    });
    const double n = static_cast<double>(reps);
    double s1 = 0.0;
    for (double v : h) s1 += v;
    const double mean = s1 / n;
    double s2 = 0.0;
    for (double v : h) s2 += (v - mean) * (v - mean);
    const double variance = s2 / (n - 1.0);
    if (!(variance > 0.0))
      throw degenerate_error("calibrate: zero sample variance (degenerate model) at k=" +
                             std::to_string(k));
    // Jackknife over leave-one-out replicates.
    double jk_var_mean = 0.0;
    {
      // leave-one-out means deviate from the full mean by (mean - x_i)/(n-1)
      double acc = 0.0;
      for (double v : h) {
        const double d = (mean - v) / (n - 1.0);
        acc += d * d;
      }
      jk_var_mean = (n - 1.0) / n * acc;
    }
    double jk_var_var = 0.0;
    {
      std::vector<double> loo(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double mi = (s1 - h[i]) / (n - 1.0);
        const double s2i = s2 - (h[i] - mean) * (h[i] - mean) - (n - 1.0) * (mi - mean) * (mi - mean);
        loo[i] = s2i / (n - 2.0);
      }
      double lm = 0.0;
      for (double v : loo) lm += v;
      lm /= n;
      double acc = 0.0;
      for (double v : loo) acc += (v - lm) * (v - lm);
      jk_var_var = (n - 1.0) / n * acc;
    }
    table.entries.push_back(CalibrationEntry{k, mean, variance, reps, std::sqrt(jk_var_mean),
                                             std::sqrt(jk_var_var)});
  }

  // log Var ~ tau log k + b
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  const double m = static_cast<double>(table.entries.size());
  for (const auto& e : table.entries) {
    const double x = std::log(static_cast<double>(e.k));
    const double y = std::log(e.variance);
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  table.tau_hat = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  table.log_multiplier = (sy - table.tau_hat * sx) / m;
  return table;
}

/// Fill F_k = (H_k - mean(k)) / sqrt(var(k)) from the table.
inline Trajectory standardize(const Trajectory& traj, const CalibrationTable& table) {
  if (traj.model != table.model)
    throw dependency_error("standardize: calibration table was built for a different model");
  if (traj.ks.empty()) throw domain_error("standardize: empty trajectory");
  if (!table.covers(traj.ks.front(), traj.ks.back()))
    throw dependency_error("standardize: calibration does not cover the schedule range");
  Trajectory out = traj;
  out.f.assign(traj.h.size(), 0.0);
  for (std::size_t i = 0; i < traj.ks.size(); ++i) {
    const double var = table.var_at(traj.ks[i]);
    if (!(var > 1e-12))
      throw domain_error("standardize: interpolated variance below the positivity floor");
    out.f[i] = (traj.h[i] - table.mean_at(traj.ks[i])) / std::sqrt(var);
  }
  return out;
}

inline nlohmann::json to_json(const CalibrationTable& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"k", e.k},
                       {"mean", e.mean},
                       {"variance", e.variance},
                       {"reps", e.reps},
                       {"se_mean", e.se_mean},
                       {"se_var", e.se_var}});
  // mean interpolation knots (k, mean/k); redundant with the entries but part
  // of the fit record consumers read
  nlohmann::json knots = nlohmann::json::array();
  for (const auto& e : t.entries)
    knots.push_back({e.k, e.mean / static_cast<double>(e.k)});
  return nlohmann::json{{"model", t.model},
                        {"entries", entries},
                        {"fit",
                         {{"tau_hat", t.tau_hat},
                          {"log_multiplier", t.log_multiplier},
                          {"mean_knots", knots}}}};
}

inline CalibrationTable table_from_json(const nlohmann::json& j) {
  CalibrationTable t;
  t.model = j.at("model").get<std::string>();
  for (const auto& e : j.at("entries")) {
    t.entries.push_back(CalibrationEntry{e.at("k").get<std::int64_t>(), e.at("mean").get<double>(),
                                         e.at("variance").get<double>(),
                                         e.at("reps").get<std::int64_t>(),
                                         e.at("se_mean").get<double>(),
                                         e.at("se_var").get<double>()});
  }
  t.tau_hat = j.at("fit").at("tau_hat").get<double>();
  t.log_multiplier = j.at("fit").at("log_multiplier").get<double>();
  std::sort(t.entries.begin(), t.entries.end(),
            [](const CalibrationEntry& a, const CalibrationEntry& b) { return a.k < b.k; });
  return t;
}

/// Exact table for the count model on a unit-volume window: mean = var = k.
/// Test scaffolding for closed-form checks.
inline CalibrationTable exact_count_table(const ScoreModel& model,
                                          const std::vector<std::int64_t>& k_grid) {
  CalibrationTable t;
  t.model = model_id(model);
  const double vol = model.y.volume();
  for (std::int64_t k : k_grid)
    t.entries.push_back(CalibrationEntry{k, static_cast<double>(k) * vol,
                                         static_cast<double>(k) * vol, 0, 0.0, 0.0});
  t.tau_hat = 1.0;
  t.log_multiplier = std::log(vol);
  return t;
}

}  // namespace asclt
