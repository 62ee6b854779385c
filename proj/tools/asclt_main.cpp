// Command-line driver: batch orchestration of calibration, coupled
// trajectories, ASCLT verification, stabilization diagnostics, bound
// estimation and report generation. All outputs carry the configuration hash
// and seed; bodies are byte-stable under reruns.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "asclt/bounds.hpp"
#include "asclt/calibration.hpp"
#include "asclt/config.hpp"
#include "asclt/csv.hpp"
#include "asclt/log_average.hpp"
#include "asclt/malliavin.hpp"
#include "asclt/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace asclt;

namespace {

struct RunContext {
  ExperimentConfig cfg;
  fs::path out;
  std::uint64_t hash{0};
};

std::string hash_hex(std::uint64_t h) {
  char hbuf[32];
  std::snprintf(hbuf, sizeof(hbuf), "%016llx", static_cast<unsigned long long>(h));
  return hbuf;
}

RunContext prepare(const std::string& config_path, const std::vector<std::string>& overrides,
                   const std::string& out_flag, std::int64_t seed_flag, int threads_flag,
                   const std::string& subcommand) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw config_error("--override expects key=value");
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (!out_flag.empty()) cfg.out = out_flag;
  if (seed_flag >= 0) cfg.seeds = {seed_flag};
  if (threads_flag > 0) cfg.threads = threads_flag;
  if (cfg.out == "out") {
    if (const char* root = std::getenv("ASCLT_OUT_ROOT")) cfg.out = std::string(root) + "/out";
  }
  cfg.finalize();

  RunContext ctx{std::move(cfg), {}, 0};
  ctx.out = fs::path(ctx.cfg.out);
  ctx.hash = ctx.cfg.hash();
  fs::create_directories(ctx.out);
  {
    std::ofstream rc(ctx.out / "resolved_config.txt");
    rc << ctx.cfg.resolved_text();
  }
  {
    json meta{{"subcommand", subcommand},
              {"config_hash", hash_hex(ctx.hash)},
              {"seeds", ctx.cfg.seeds},
              {"region_translation", ctx.cfg.region_translation},
              {"timestamp", static_cast<std::int64_t>(
                                std::chrono::duration_cast<std::chrono::seconds>(
                                    std::chrono::system_clock::now().time_since_epoch())
                                    .count())}};
    std::ofstream mf(ctx.out / ("run_meta_" + subcommand + ".json"));
    mf << meta.dump(2) << "\n";
  }
  return ctx;
}

CalibrationTable require_calibration(const RunContext& ctx, const ScoreModel& model) {
  if (ctx.cfg.calibration_path.empty())
    throw dependency_error("this subcommand needs 'calibration = <path to calibration.json>'");
  std::ifstream in(ctx.cfg.calibration_path);
  if (!in) throw dependency_error("cannot open calibration file: " + ctx.cfg.calibration_path);
  json j;
  in >> j;
  CalibrationTable table = table_from_json(j);
  if (table.model != model_id(model))
    throw dependency_error("calibration table is for model '" + table.model + "', expected '" +
                           model_id(model) + "'");
  return table;
}

void dump_master_files(const RunContext& ctx, const PointConfiguration& master,
                       std::int64_t seed) {
  const int d = master.dim();
  std::vector<std::string> header;
  for (int c = 0; c < d; ++c) header.push_back("x" + std::to_string(c + 1));
  CsvWriter w((ctx.out / ("master_" + std::to_string(seed) + ".csv")).string(), header, ctx.hash,
              static_cast<std::uint64_t>(seed));
  for (std::size_t i = 0; i < master.size(); ++i) {
    std::vector<std::string> row;
    for (int c = 0; c < d; ++c) row.push_back(format_real17(master.point(i)[c]));
    w.write_row(row);
  }
  json side{{"seed", seed},
            {"config_hash", hash_hex(ctx.hash)},
            {"intensity", 1.0},
            {"window", region_to_literal(master.window())}};
  std::ofstream sf(ctx.out / ("master_" + std::to_string(seed) + ".json"));
  sf << side.dump(2) << "\n";
}

int run_calibrate(const RunContext& ctx) {
  const ScoreModel model = ctx.cfg.model();
  const RngStream rng{static_cast<std::uint64_t>(ctx.cfg.seeds[0]), 0};
  const CalibrationTable table =
      calibrate(model, ctx.cfg.k_grid, ctx.cfg.reps, rng, ctx.cfg.threads);
  json j = to_json(table);
  j["config_hash"] = hash_hex(ctx.hash);
  j["seed"] = ctx.cfg.seeds[0];
  std::ofstream out(ctx.out / "calibration.json");
  out << j.dump(2) << "\n";
  std::printf("calibrate: %zu grid points, reps=%lld, tau_hat=%.4f\n", table.entries.size(),
              static_cast<long long>(ctx.cfg.reps), table.tau_hat);
  return 0;
}

std::vector<std::int64_t> eval_grid(std::int64_t n_max, std::int64_t points) {
  std::vector<std::int64_t> ns;
  for (std::int64_t j = 0; j < points; ++j) {
    const double f = points == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(points - 1);
    const std::int64_t v = static_cast<std::int64_t>(
        std::llround(std::exp(std::log(2.0) + f * (std::log(static_cast<double>(n_max)) -
                                                   std::log(2.0)))));
    if (ns.empty() || v > ns.back()) ns.push_back(v);
  }
  if (ns.empty() || ns.back() != n_max) ns.push_back(n_max);
  return ns;
}

void write_trajectory_csv(const RunContext& ctx, const Trajectory& traj, std::int64_t seed) {
  CsvWriter w((ctx.out / ("trajectory_" + std::to_string(seed) + ".csv")).string(),
              {"k", "H", "F"}, ctx.hash, static_cast<std::uint64_t>(seed));
  for (std::size_t i = 0; i < traj.ks.size(); ++i) {
    w.write_row({std::to_string(traj.ks[i]), format_real17(traj.h[i]),
                 traj.standardized() ? format_real17(traj.f[i]) : std::string{}});
  }
}

int run_trajectory_cmd(const RunContext& ctx) {
  const ScoreModel model = ctx.cfg.model();
  const auto ks = schedule_indices(ctx.cfg.schedule(), ctx.cfg.n_max);
  std::optional<CalibrationTable> table;
  if (!ctx.cfg.calibration_path.empty()) table = require_calibration(ctx, model);
  for (const std::int64_t seed : ctx.cfg.seeds) {
    const PointConfiguration master =
        sample_master(ctx.cfg.n_max, model.y,
                      RngStream{static_cast<std::uint64_t>(seed), stream_purpose::master_sample});
    Trajectory traj = run_trajectory_from_master(model, master, ks, ctx.cfg.threads);
    if (table) traj = standardize(traj, *table);
    write_trajectory_csv(ctx, traj, seed);
    if (ctx.cfg.dump_master) dump_master_files(ctx, master, seed);
  }
  return 0;
}

int run_asclt(const RunContext& ctx) {
  const ScoreModel model = ctx.cfg.model();
  const CalibrationTable table = require_calibration(ctx, model);
  const auto ks = schedule_indices(ctx.cfg.schedule(), ctx.cfg.n_max);
  const auto ns = eval_grid(ctx.cfg.n_max, ctx.cfg.eval_grid_points);

  CsvWriter summary((ctx.out / "asclt_summary.csv").string(), {"seed", "n", "ks_final"}, ctx.hash,
                    static_cast<std::uint64_t>(ctx.cfg.seeds[0]));
  for (const std::int64_t seed : ctx.cfg.seeds) {
    Trajectory traj = run_trajectory(model, ctx.cfg.n_max, ctx.cfg.schedule(),
                                     static_cast<std::uint64_t>(seed), ctx.cfg.threads);
    traj = standardize(traj, table);
    write_trajectory_csv(ctx, traj, seed);
    CsvWriter w((ctx.out / ("asclt_" + std::to_string(seed) + ".csv")).string(),
                {"n", "W_n", "ks", "unnormalized_mass"}, ctx.hash,
                static_cast<std::uint64_t>(seed));
    double final_ks = 0.0;
    for (const std::int64_t n : ns) {
      if (n < 2) continue;
      const LogAverageMeasure m = log_average_measure(traj, n);
      const double ks_val = ks_to_normal(m);
      final_ks = ks_val;
      w.write_row({std::to_string(n), format_real17(m.total_weight), format_real17(ks_val),
                   format_real17(m.unnormalized_mass())});
    }
    summary.write_row(
        {std::to_string(seed), std::to_string(ctx.cfg.n_max), format_real17(final_ks)});
    std::printf("asclt: seed=%lld final KS=%.4f\n", static_cast<long long>(seed), final_ks);
  }
  return 0;
}

int run_diagnose(const RunContext& ctx) {
  const ScoreModel model = ctx.cfg.model();
  const std::uint64_t seed0 = static_cast<std::uint64_t>(ctx.cfg.seeds[0]);
  const RngStream rng{seed0, stream_purpose::diagnostics};

  // Stabilization radius proxies on fresh realizations at the first scale.
  const std::int64_t n = ctx.cfg.n_list.front();
  const int d = model.y.dimension();
  {
    std::vector<std::string> header;
    for (int c = 0; c < d; ++c) header.push_back("x" + std::to_string(c + 1));
    header.insert(header.end(), {"proxy_r", "extra_count", "stable"});
    CsvWriter w((ctx.out / "radius.csv").string(), header, ctx.hash, seed0);

    const Box bb = model.y.bounding_box();
    double diam2 = 0.0;
    for (int c = 0; c < d; ++c) diam2 += (bb.upper[c] - bb.lower[c]) * (bb.upper[c] - bb.lower[c]);
    const double diam = std::sqrt(diam2);
    std::vector<double> r_grid;
    for (int j = 1; j <= 24; ++j) r_grid.push_back(diam * j / 24.0);
    if (std::holds_alternative<CliqueSpec>(model.kind)) {
      const double r_eff = std::get<CliqueSpec>(model.kind).r *
                           std::pow(static_cast<double>(n), -1.0 / d);
      r_grid.push_back(r_eff);
      std::sort(r_grid.begin(), r_grid.end());
      r_grid.erase(std::unique(r_grid.begin(), r_grid.end()), r_grid.end());
    }

    for (std::int64_t trial = 0; trial < ctx.cfg.proxy_trials; ++trial) {
      const RngStream ts = rng.derive(1, trial);
      const PointConfiguration cfg = sample_scaled_process(n, model.y, ts);
      if (cfg.size() == 0) continue;
      auto eng = ts.derive(2).engine();
      const std::uint32_t i =
          static_cast<std::uint32_t>(eng() % static_cast<std::uint64_t>(cfg.size()));
      const std::size_t extra_count = eng() % 8;  // uniform on 0..7
      const std::vector<Vec> extras = sample_uniform(model.y, extra_count, ts.derive(3));
      const auto proxy = stabilization_radius_proxy(model, cfg, i, r_grid, extras);
      std::vector<std::string> row;
      for (int c = 0; c < d; ++c) row.push_back(format_real17(cfg.point(i)[c]));
      row.push_back(format_real17(proxy.radius));
      row.push_back(std::to_string(extra_count));
      row.push_back(proxy.stable ? "1" : "0");
      w.write_row(row);
    }
  }

  // Decay of P(score != 0) with the distance to K, for boundary-type targets.
  if (model.k_target.kind == DistanceTarget::Kind::boundary) {
    CsvWriter w((ctx.out / "decay.csv").string(), {"dist", "n", "p_hat", "se", "reps"}, ctx.hash,
                seed0);
    json fits = json::array();
    for (const std::int64_t nn : ctx.cfg.n_list) {
      std::vector<double> dists, probs;
      for (const double dist : ctx.cfg.dist_grid) {
        // probe point inside A at the prescribed boundary distance
        Vec x;
        const Region& a = model.k_target.region;
        if (a.is_ball()) {
          const auto& b = std::get<Ball>(a.shape());
          if (dist >= b.radius) continue;
          x = b.center;
          x[0] += b.radius - dist;
        } else {
          const auto& b = std::get<Box>(a.shape());
          x.assign(b.lower.size(), 0.0);
          for (std::size_t c = 0; c < b.lower.size(); ++c) x[c] = 0.5 * (b.lower[c] + b.upper[c]);
          if (dist >= 0.5 * (b.upper[0] - b.lower[0])) continue;
          x[0] = b.upper[0] - dist;
        }
        const auto est = nonzero_score_prob(model, nn, x, {}, ctx.cfg.decay_reps,
                                            rng.derive(4, static_cast<std::uint64_t>(nn)));
        w.write_row({format_real17(dist), std::to_string(nn), format_real17(est.p_hat),
                     format_real17(est.standard_error), std::to_string(est.reps)});
        if (est.p_hat > 0.0) {
          dists.push_back(dist);
          probs.push_back(est.p_hat);
        }
      }
      try {
        const DecayFit fit = fit_decay(dists, probs, nn, d);
        fits.push_back({{"n", nn},
                        {"C_hat", fit.c_big},
                        {"c_hat", fit.c_rate},
                        {"alpha_hat", fit.alpha},
                        {"residual", fit.residual}});
      } catch (const error& e) {
        fits.push_back({{"n", nn}, {"error", e.what()}});
      }
    }
    json fit_doc{{"config_hash", hash_hex(ctx.hash)},
                 {"seed", ctx.cfg.seeds[0]},
                 {"fits", fits}};
    std::ofstream ff(ctx.out / "decay_fit.json");
    ff << fit_doc.dump(2) << "\n";
  } else {
    std::printf("diagnose: K is the whole window (distance identically 0); decay study skipped\n");
  }
  return 0;
}

int run_bounds(const RunContext& ctx) {
  const ScoreModel model = ctx.cfg.model();
  const std::uint64_t seed0 = static_cast<std::uint64_t>(ctx.cfg.seeds[0]);
  const RngStream rng{seed0, stream_purpose::bounds_outer};
  std::optional<CalibrationTable> table;
  auto var_of = [&](std::int64_t n) {
    if (!table) table = require_calibration(ctx, model);
    return table->var_at(n);
  };

  CsvWriter w((ctx.out / "bounds.csv").string(),
              {"quantity", "model_id", "n", "value", "se", "samples", "inner_reps", "seed"},
              ctx.hash, seed0);
  const std::string mid = model_id(model);
  auto emit = [&](const std::string& q, std::int64_t n, const BoundEstimate& est) {
    w.write_row({q, mid, std::to_string(n), format_real17(est.value),
                 format_real17(est.standard_error), std::to_string(est.samples_used),
                 std::to_string(ctx.cfg.bounds.inner_reps), std::to_string(ctx.cfg.seeds[0])});
    std::printf("bounds: %s n=%lld value=%.6g se=%.2g\n", q.c_str(), static_cast<long long>(n),
                est.value, est.standard_error);
  };

  for (const std::string& q : ctx.cfg.quantities) {
    if (q == "ikn") {
      for (const std::int64_t n : ctx.cfg.n_list)
        emit(q, n,
             compute_ikn(model.y, model.k_target, n, ctx.cfg.bounds, ctx.cfg.quad_points,
                         rng.derive(11, static_cast<std::uint64_t>(n))));
    } else if (q == "gamma2") {
      for (const std::int64_t n : ctx.cfg.n_list)
        emit(q, n,
             estimate_gamma2(model, n, var_of(n), ctx.cfg.bounds,
                             rng.derive(12, static_cast<std::uint64_t>(n))));
    } else if (q == "gamma1") {
      for (const std::int64_t n : ctx.cfg.n_list)
        emit(q, n,
             estimate_gamma1(model, n, var_of(n), ctx.cfg.bounds,
                             rng.derive(13, static_cast<std::uint64_t>(n))));
    } else if (q == "theta") {
      for (const std::int64_t n : ctx.cfg.n_list)
        emit(q, n,
             estimate_theta(model, n, ctx.cfg.n2, var_of(n), var_of(ctx.cfg.n2), ctx.cfg.bounds,
                            rng.derive(14, static_cast<std::uint64_t>(n))));
    } else if (q == "lambda") {
      for (const std::int64_t n : ctx.cfg.n_list)
        emit(q, n,
             estimate_lambda(model, n, ctx.cfg.n2, n, ctx.cfg.n2,
                             {var_of(n), var_of(ctx.cfg.n2), var_of(n), var_of(ctx.cfg.n2)},
                             ctx.cfg.bounds, rng.derive(15, static_cast<std::uint64_t>(n))));
    } else {
      throw config_error("unknown bound quantity: '" + q + "' (expected ikn, gamma1, gamma2, theta, lambda)");
    }
  }
  return 0;
}

int run_il(const RunContext& ctx) {
  const ScoreModel model = ctx.cfg.model();
  const CalibrationTable table = require_calibration(ctx, model);
  const RngStream rng{static_cast<std::uint64_t>(ctx.cfg.seeds[0]), stream_purpose::replication};
  const auto rows = il_diagnostic(model, ctx.cfg.n_max, ctx.cfg.t_grid, ctx.cfg.trajectories,
                                  table, rng, ctx.cfg.threads);
  CsvWriter w((ctx.out / "il.csv").string(), {"n", "t", "mean_sq", "se", "partial_sum"}, ctx.hash,
              static_cast<std::uint64_t>(ctx.cfg.seeds[0]));
  for (const auto& r : rows)
    w.write_row({std::to_string(r.n), format_real17(r.t), format_real17(r.mean_sq),
                 format_real17(r.se), format_real17(r.partial_sum)});
  return 0;
}

std::uint64_t csv_hash_of(const fs::path& p) { return read_csv(p.string()).config_hash; }

int run_report(const RunContext& ctx) {
  // Refuse to aggregate outputs produced under differing configurations.
  std::vector<fs::path> csvs;
  for (const auto& entry : fs::directory_iterator(ctx.out)) {
    if (entry.path().extension() == ".csv") {
      const auto name = entry.path().filename().string();
      if (name.rfind("report_", 0) == 0 || name == "ks_vs_n.csv" || name == "ecdf_vs_phi.csv" ||
          name == "decay_curves.csv")
        continue;
      csvs.push_back(entry.path());
    }
  }
  for (const auto& p : csvs) {
    const std::uint64_t h = csv_hash_of(p);
    if (h != ctx.hash)
      throw config_error("report: config hash mismatch in " + p.filename().string() +
                         " (refusing to aggregate)");
  }

  std::ofstream md(ctx.out / "report.md");
  md << "# Run report\n\n";
  md << "Configuration hash: `" << hash_hex(ctx.hash) << "`\n\n";
  md << "Model: `" << model_id(ctx.cfg.model()) << "`\n\n";

  if (fs::exists(ctx.out / "calibration.json")) {
    std::ifstream in(ctx.out / "calibration.json");
    json j;
    in >> j;
    md << "## Calibration\n\n";
    md << "Fitted variance power law: tau_hat = " << j["fit"]["tau_hat"]
       << ", log multiplier = " << j["fit"]["log_multiplier"] << "\n\n";
    md << "| k | mean | variance | reps | se_mean | se_var |\n|--:|--:|--:|--:|--:|--:|\n";
    for (const auto& e : j["entries"])
      md << "| " << e["k"] << " | " << e["mean"] << " | " << e["variance"] << " | " << e["reps"]
         << " | " << e["se_mean"] << " | " << e["se_var"] << " |\n";
    md << "\n";
  }

  // KS vs n series across seeds.
  {
    std::vector<std::pair<std::int64_t, CsvFile>> runs;
    for (const auto& p : csvs) {
      const auto name = p.filename().string();
      if (name.rfind("asclt_", 0) == 0 && name != "asclt_summary.csv")
        runs.emplace_back(std::stoll(name.substr(6, name.size() - 10)), read_csv(p.string()));
    }
    std::sort(runs.begin(), runs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (!runs.empty()) {
      CsvWriter w((ctx.out / "ks_vs_n.csv").string(), {"seed", "n", "ks"}, ctx.hash,
                  runs.front().second.seed);
      md << "## Log-averaged empirical measure vs N(0,1)\n\n";
      md << "| seed | final n | KS |\n|--:|--:|--:|\n";
      for (const auto& [seed, csv] : runs) {
        for (const auto& row : csv.rows) w.write_row({std::to_string(seed), row[0], row[2]});
        if (!csv.rows.empty())
          md << "| " << seed << " | " << csv.rows.back()[0] << " | " << csv.rows.back()[2]
             << " |\n";
      }
      md << "\n";
    }
  }

  // ECDF vs Phi for the first seed's trajectory at the final n.
  {
    std::vector<fs::path> trajs;
    for (const auto& p : csvs)
      if (p.filename().string().rfind("trajectory_", 0) == 0) trajs.push_back(p);
    std::sort(trajs.begin(), trajs.end());
    if (!trajs.empty()) {
      const CsvFile f = read_csv(trajs.front().string());
      std::vector<std::pair<double, double>> atoms;  // (F, 1/k)
      double w_n = 0.0;
      for (const auto& row : f.rows) {
        if (row.size() < 3 || row[2].empty()) continue;
        const double k = std::stod(row[0]);
        atoms.emplace_back(std::stod(row[2]), 1.0 / k);
        w_n += 1.0 / k;
      }
      if (!atoms.empty()) {
        std::sort(atoms.begin(), atoms.end());
        CsvWriter w((ctx.out / "ecdf_vs_phi.csv").string(), {"value", "ecdf", "phi"}, ctx.hash,
                    f.seed);
        double cum = 0.0;
        for (const auto& [v, wt] : atoms) {
          cum += wt;
          w.write_row({format_real17(v), format_real17(cum / w_n), format_real17(normal_cdf(v))});
        }
      }
    }
  }

  // Decay curves passthrough.
  if (fs::exists(ctx.out / "decay.csv")) {
    const CsvFile f = read_csv((ctx.out / "decay.csv").string());
    CsvWriter w((ctx.out / "decay_curves.csv").string(), f.header, ctx.hash, f.seed);
    for (const auto& row : f.rows) w.write_row(row);
    md << "## Score decay toward K\n\nSee `decay_curves.csv` and `decay_fit.json`.\n\n";
  }

  if (fs::exists(ctx.out / "bounds.csv")) {
    const CsvFile f = read_csv((ctx.out / "bounds.csv").string());
    md << "## Bound estimates\n\n| quantity | n | value | se |\n|:--|--:|--:|--:|\n";
    for (const auto& row : f.rows)
      md << "| " << row[0] << " | " << row[2] << " | " << row[3] << " | " << row[4] << " |\n";
    md << "\n";
  }

  std::printf("report: written to %s\n", (ctx.out / "report.md").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification toolkit for almost sure central limit behavior of "
               "stabilizing Poisson functionals"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  std::vector<std::string> overrides;
  std::int64_t seed_flag = -1;
  int threads_flag = 0;
  app.add_option("--config", config_path, "experiment configuration file");
  app.add_option("--override", overrides, "override a config key (key=value), repeatable");
  app.add_option("--out", out_flag, "output directory");
  app.add_option("--seed", seed_flag, "replace the seed list with a single seed");
  app.add_option("--threads", threads_flag, "worker threads (never changes results)");

  const std::map<std::string, int (*)(const RunContext&)> commands{
      {"calibrate", run_calibrate}, {"trajectory", run_trajectory_cmd}, {"asclt", run_asclt},
      {"diagnose", run_diagnose},   {"bounds", run_bounds},             {"il", run_il},
      {"report", run_report}};
  const std::map<std::string, std::string> descriptions{
      {"calibrate", "replicate H_k on a grid and fit the variance power law"},
      {"trajectory", "coupled trajectory H_k (and F_k when calibrated) per seed"},
      {"asclt", "trajectories, standardization, log-averaged measures and KS per seed"},
      {"diagnose", "stabilization radius proxies and score decay fits"},
      {"bounds", "I_{K,n} and the Gamma/Theta/Lambda bound estimates"},
      {"il", "Ibragimov-Lifshits diagnostic over replicated trajectories"},
      {"report", "aggregate run outputs into report.md and plot series"}};
  for (const auto& [name, fn] : commands)
    app.add_subcommand(name, descriptions.at(name))->fallthrough();

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const RunContext ctx = prepare(config_path, overrides, out_flag, seed_flag, threads_flag, sub);
    return commands.at(sub)(ctx);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const coverage_error& e) {
    std::cerr << "coverage error: " << e.what() << "\n";
    return 3;
  } catch (const dependency_error& e) {
    std::cerr << "dependency error: " << e.what() << "\n";
    return 4;
  } catch (const degenerate_error& e) {
    std::cerr << "degenerate model: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
