#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "asclt/errors.hpp"
#include "asclt/parallel.hpp"
#include "asclt/sampling.hpp"
#include "asclt/scores.hpp"

namespace asclt {

/// Which scale indices a trajectory evaluates: every k up to n_max, or an
/// arithmetic subsequence for exploratory runs.
struct CompleteSchedule {};
struct StridedSchedule {
  std::int64_t base{1};
  std::int64_t stride{1};
};
using ScheduleSpec = std::variant<CompleteSchedule, StridedSchedule>;

inline std::vector<std::int64_t> schedule_indices(const ScheduleSpec& spec, std::int64_t n_max) {
  if (n_max < 1) throw domain_error("schedule: n_max must be >= 1");
  std::vector<std::int64_t> ks;
  if (std::holds_alternative<CompleteSchedule>(spec)) {
    ks.reserve(static_cast<std::size_t>(n_max));
    for (std::int64_t k = 1; k <= n_max; ++k) ks.push_back(k);
    return ks;
  }
  const auto& s = std::get<StridedSchedule>(spec);
  if (s.base < 1 || s.stride < 1) throw domain_error("schedule: base and stride must be >= 1");
  for (std::int64_t k = s.base; k <= n_max; k += s.stride) ks.push_back(k);
  if (ks.empty()) throw domain_error("schedule: empty");
  return ks;
}

inline bool is_complete_prefix(const std::vector<std::int64_t>& ks, std::int64_t n) {
  if (static_cast<std::int64_t>(ks.size()) < n) return false;
  for (std::int64_t i = 0; i < n; ++i)
    if (ks[static_cast<std::size_t>(i)] != i + 1) return false;
  return true;
}

/// One coupled realization: H_k evaluated along the schedule from a single
/// master sample, F_k filled in by standardization.
struct Trajectory {
  std::string model;
  std::uint64_t master_seed{0};
  std::vector<std::int64_t> ks;
  std::vector<double> h;
  std::vector<double> f;  // empty until standardized
  [[nodiscard]] bool standardized() const { return f.size() == h.size() && !h.empty(); }
};

/// Evaluate H_k for every scheduled k on one master realization. Per-k
/// evaluations share the immutable master and may run on several workers;
/// collection order is fixed by the schedule.
inline Trajectory run_trajectory(const ScoreModel& model, std::int64_t n_max,
                                 const ScheduleSpec& schedule, std::uint64_t master_seed,
                                 int threads = 1) {
  Trajectory traj;
  traj.model = model_id(model);
  traj.master_seed = master_seed;
  traj.ks = schedule_indices(schedule, n_max);
  traj.h.assign(traj.ks.size(), 0.0);
  const PointConfiguration master =
      sample_master(n_max, model.y, RngStream{master_seed, stream_purpose::master_sample});
  parallel_for_indexed(traj.ks.size(), threads, [&](std::size_t i) {
    const PointConfiguration cfg = restrict_scaled(master, traj.ks[i], model.y);
    traj.h[i] = evaluate_total(model, cfg).standardized;
  });
  return traj;
}

/// Recompute a trajectory from an existing master (persistence round trips).
inline Trajectory run_trajectory_from_master(const ScoreModel& model,
                                             const PointConfiguration& master,
                                             const std::vector<std::int64_t>& ks,
                                             int threads = 1) {
  Trajectory traj;
  traj.model = model_id(model);
  traj.master_seed = master.master_seed();
  traj.ks = ks;
  traj.h.assign(ks.size(), 0.0);
  parallel_for_indexed(ks.size(), threads, [&](std::size_t i) {
    const PointConfiguration cfg = restrict_scaled(master, ks[i], model.y);
    traj.h[i] = evaluate_total(model, cfg).standardized;
  });
  return traj;
}

}  // namespace asclt
