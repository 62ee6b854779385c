#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "asclt/calibration.hpp"
#include "asclt/errors.hpp"
#include "asclt/normal.hpp"
#include "asclt/parallel.hpp"
#include "asclt/trajectory.hpp"

namespace asclt {

/// The pathwise log-averaged empirical measure: atoms (F_k, 1/k) for the
/// scheduled k <= n. Integrals are taken against the self-normalized weights
/// (1/k)/W_n so the measure has total mass one at finite n; the raw
/// 1/log n functional is exposed through `unnormalized_mass`.
struct LogAverageMeasure {
  std::vector<std::pair<double, double>> atoms;  // (value F_k, weight 1/k)
  double total_weight{0.0};                      // W_n
  std::int64_t n{0};

  [[nodiscard]] double unnormalized_mass() const {
    return total_weight / std::log(static_cast<double>(n));
  }

  template <typename F>
  [[nodiscard]] double integrate(const F& f) const {
    double s = 0.0;
    for (const auto& [v, w] : atoms) s += w * f(v);
    return s / total_weight;
  }
};

inline LogAverageMeasure log_average_measure(const Trajectory& traj, std::int64_t n) {
  if (n < 2) throw domain_error("log_average_measure: needs n >= 2 (log undefined below)");
  if (!traj.standardized())
    throw dependency_error("log_average_measure: trajectory must be standardized first");
  LogAverageMeasure m;
  m.n = n;
  for (std::size_t i = 0; i < traj.ks.size(); ++i) {
    if (traj.ks[i] > n) break;
    m.atoms.emplace_back(traj.f[i], 1.0 / static_cast<double>(traj.ks[i]));
    m.total_weight += 1.0 / static_cast<double>(traj.ks[i]);
  }
  if (m.atoms.empty()) throw domain_error("log_average_measure: no scheduled k <= n");
  return m;
}

/// sup |weighted ECDF - Phi| over the atom values and the midpoints between
/// consecutive atoms; the ECDF is self-normalized by W_n.
inline double ks_to_normal(const LogAverageMeasure& measure) {
  if (measure.atoms.empty()) throw domain_error("ks_to_normal: empty measure");
  std::vector<std::pair<double, double>> atoms = measure.atoms;
  std::sort(atoms.begin(), atoms.end());
  double ks = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double before = cum / measure.total_weight;
    cum += atoms[i].second;
    const double after = cum / measure.total_weight;
    const double phi = normal_cdf(atoms[i].first);
    ks = std::max({ks, std::abs(before - phi), std::abs(after - phi)});
    if (i + 1 < atoms.size()) {
      const double mid = 0.5 * (atoms[i].first + atoms[i + 1].first);
      ks = std::max(ks, std::abs(after - normal_cdf(mid)));
    }
  }
  return ks;
}

/// Delta_n(t) = (1/log n) sum_{k<=n} (1/k)(e^{i t F_k} - e^{-t^2/2}).
/// Requires the complete schedule: every k = 1..n must be present.
inline std::complex<double> delta_n(const Trajectory& traj, std::int64_t n, double t) {
  if (n < 2) throw domain_error("delta_n: needs n >= 2");
  if (!traj.standardized()) throw dependency_error("delta_n: trajectory must be standardized");
  if (!is_complete_prefix(traj.ks, n))
    throw unsupported_error("delta_n: requires a complete schedule up to n");
  const std::complex<double> target(std::exp(-t * t / 2.0), 0.0);
  std::complex<double> s(0.0, 0.0);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double f = traj.f[static_cast<std::size_t>(k - 1)];
    s += (std::complex<double>(std::cos(t * f), std::sin(t * f)) - target) /
         static_cast<double>(k);
  }
  return s / std::log(static_cast<double>(n));
}

struct IlRow {
  std::int64_t n{0};
  double t{0.0};
  double mean_sq{0.0};
  double se{0.0};
  double partial_sum{0.0};
};

/// Ibragimov-Lifshits diagnostic: R independent coupled trajectories, the
/// sample mean of |Delta_n(t)|^2 on a log-spaced n-subgrid, and trapezoidal
/// (in log n) partial sums of E|Delta_n(t)|^2 / (n log n) — an indicative
/// discretization of the criterion's series, not an exact partial sum.
inline std::vector<IlRow> il_diagnostic(const ScoreModel& model, std::int64_t n_max,
                                        const std::vector<double>& t_grid,
                                        std::int64_t trajectories, const CalibrationTable& table,
                                        const RngStream& rng, int threads = 1,
                                        std::size_t subgrid_points = 25) {
  if (trajectories < 50) throw precision_error("il_diagnostic: needs R >= 50 trajectories");
  if (n_max < 4) throw domain_error("il_diagnostic: n_max too small");

  // log-spaced subgrid of evaluation scales
  std::vector<std::int64_t> ns;
  for (std::size_t j = 0; j < subgrid_points; ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(subgrid_points - 1);
    const std::int64_t v = static_cast<std::int64_t>(
        std::llround(std::exp(std::log(4.0) + f * (std::log(static_cast<double>(n_max)) -
                                                   std::log(4.0)))));
    if (ns.empty() || v > ns.back()) ns.push_back(v);
  }

  // per-trajectory |Delta_n(t)|^2 via prefix sums over k
  std::vector<std::vector<double>> sq(ns.size() * t_grid.size(),
                                      std::vector<double>(static_cast<std::size_t>(trajectories)));
  parallel_for_indexed(static_cast<std::size_t>(trajectories), threads, [&](std::size_t r) {
    const std::uint64_t seed = rng.derive(stream_purpose::replication, r).digest();
    Trajectory traj = run_trajectory(model, n_max, CompleteSchedule{}, seed);
    traj = standardize(traj, table);
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
      const double t = t_grid[ti];
      const std::complex<double> target(std::exp(-t * t / 2.0), 0.0);
      std::complex<double> prefix(0.0, 0.0);
      std::size_t next_n = 0;
      for (std::int64_t k = 1; k <= n_max && next_n < ns.size(); ++k) {
        const double f = traj.f[static_cast<std::size_t>(k - 1)];
        prefix += (std::complex<double>(std::cos(t * f), std::sin(t * f)) - target) /
                  static_cast<double>(k);
        while (next_n < ns.size() && ns[next_n] == k) {
          const std::complex<double> d = prefix / std::log(static_cast<double>(k));
          sq[next_n * t_grid.size() + ti][r] = std::norm(d);
          ++next_n;
        }
      }
    }
  });

  std::vector<IlRow> rows;
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    double partial = 0.0;
    double prev_term = 0.0;
    double prev_logn = 0.0;
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
      const auto& v = sq[ni * t_grid.size() + ti];
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(trajectories);
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      var /= static_cast<double>(trajectories - 1);
      const double se = std::sqrt(var / static_cast<double>(trajectories));
      const double logn = std::log(static_cast<double>(ns[ni]));
      // series term E|Delta_n|^2/(n log n); trapezoid in log n since
      // d(log n) = dn / n
      const double term = mean / logn;
      if (ni > 0) partial += 0.5 * (term + prev_term) * (logn - prev_logn);
      prev_term = term;
      prev_logn = logn;
      rows.push_back(IlRow{ns[ni], t_grid[ti], mean, se, partial});
    }
  }
  return rows;
}

}  // namespace asclt
