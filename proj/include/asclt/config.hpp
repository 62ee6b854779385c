#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asclt/bounds.hpp"
#include "asclt/errors.hpp"
#include "asclt/region.hpp"
#include "asclt/score_model.hpp"
#include "asclt/trajectory.hpp"

namespace asclt {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

inline double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw config_error("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw config_error("trailing characters in number: '" + s + "'");
  return v;
}

inline std::int64_t parse_int(const std::string& s) {
  std::size_t pos = 0;
  long long v;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw config_error("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw config_error("trailing characters in integer: '" + s + "'");
  return v;
}

inline Vec parse_reals(const std::string& s) {
  Vec v;
  for (const auto& p : split(s, ','))
    if (!p.empty()) v.push_back(parse_real(p));
  return v;
}

/// Extract "name(args)" -> args; empty optional when the head differs.
inline std::optional<std::string> call_args(const std::string& s, const std::string& head) {
  if (s.rfind(head + "(", 0) != 0 || s.back() != ')') return std::nullopt;
  return s.substr(head.size() + 1, s.size() - head.size() - 2);
}

}  // namespace detail

/// Region literal: box(l1,..,ld; u1,..,ud), ball(c1,..,cd; r),
/// polytope(a11,..,a1d,b1; a21,..,a2d,b2; ...).
inline Region parse_region(const std::string& text) {
  const std::string s = detail::trim(text);
  if (auto args = detail::call_args(s, "box")) {
    const auto parts = detail::split(*args, ';');
    if (parts.size() != 2) throw config_error("box literal needs 'lower; upper'");
    return Region::box(detail::parse_reals(parts[0]), detail::parse_reals(parts[1]));
  }
  if (auto args = detail::call_args(s, "ball")) {
    const auto parts = detail::split(*args, ';');
    if (parts.size() != 2) throw config_error("ball literal needs 'center; radius'");
    return Region::ball(detail::parse_reals(parts[0]), detail::parse_real(parts[1]));
  }
  if (auto args = detail::call_args(s, "polytope")) {
    const auto rows = detail::split(*args, ';');
    if (rows.empty()) throw config_error("polytope literal needs halfspace rows");
    std::vector<double> normals, offsets;
    int d = -1;
    for (const auto& row : rows) {
      const Vec vals = detail::parse_reals(row);
      if (vals.size() < 2) throw config_error("polytope row needs 'n1,..,nd,offset'");
      const int rd = static_cast<int>(vals.size()) - 1;
      if (d < 0) d = rd;
      if (rd != d) throw config_error("polytope rows have inconsistent dimension");
      normals.insert(normals.end(), vals.begin(), vals.end() - 1);
      offsets.push_back(vals.back());
    }
    return Region::polytope(std::move(normals), std::move(offsets), d);
  }
  throw config_error("unknown region literal: '" + s + "'");
}

inline std::string region_to_literal(const Region& r) { return detail::region_literal(r); }

namespace detail {

inline std::map<std::string, std::string> parse_kw_args(const std::string& args) {
  std::map<std::string, std::string> kw;
  for (const auto& part : split(args, ',')) {
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw config_error("expected key=value in '" + part + "'");
    kw[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return kw;
}

}  // namespace detail

/// Model literal: count, knn(k=,m=), clique(k=,r=), voronoi(A=,method=).
/// The window Y comes from the region key except for the Voronoi model whose
/// window is pinned to the centered unit box of A's dimension.
inline ScoreModel parse_model(const std::string& text, const Region& y) {
  const std::string s = detail::trim(text);
  if (s == "count") return count_model(y);
  if (auto args = detail::call_args(s, "knn")) {
    auto kw = detail::parse_kw_args(*args);
    if (kw.size() != 2 || !kw.count("k") || !kw.count("m"))
      throw config_error("knn literal needs (k=, m=)");
    return knn_model(y, static_cast<int>(detail::parse_int(kw["k"])), detail::parse_real(kw["m"]));
  }
  if (auto args = detail::call_args(s, "clique")) {
    auto kw = detail::parse_kw_args(*args);
    if (kw.size() != 2 || !kw.count("k") || !kw.count("r"))
      throw config_error("clique literal needs (k=, r=)");
    return clique_model(y, static_cast<int>(detail::parse_int(kw["k"])),
                        detail::parse_real(kw["r"]));
  }
  if (auto args = detail::call_args(s, "voronoi")) {
    // split on top-level commas, but A= itself contains a region literal
    auto kw = detail::parse_kw_args(*args);
    if (!kw.count("A") || !kw.count("method"))
      throw config_error("voronoi literal needs (A=, method=)");
    const Region a = parse_region(kw["A"]);
    VolumeMethod method = Exact2D{};
    const std::string m = kw["method"];
    if (m == "exact2d") {
      method = Exact2D{};
    } else if (auto qc = detail::call_args(m, "mc")) {
      method = MonteCarloVolume{detail::parse_int(*qc)};
    } else {
      throw config_error("voronoi method must be exact2d or mc(count)");
    }
    return voronoi_model(a, method);
  }
  throw config_error("unknown model literal: '" + s + "'");
}

inline std::string model_to_literal(const ScoreModel& m) {
  // the part of model_id before the window suffix
  const std::string id = model_id(m);
  return id.substr(0, id.rfind(" on "));
}

inline ScheduleSpec parse_schedule(const std::string& text) {
  const std::string s = detail::trim(text);
  if (s == "complete") return CompleteSchedule{};
  if (auto args = detail::call_args(s, "strided")) {
    const auto parts = detail::split(*args, ',');
    if (parts.size() != 2) throw config_error("strided literal needs (base, stride)");
    return StridedSchedule{detail::parse_int(parts[0]), detail::parse_int(parts[1])};
  }
  throw config_error("unknown schedule literal: '" + s + "'");
}

inline std::string schedule_to_literal(const ScheduleSpec& s) {
  if (std::holds_alternative<CompleteSchedule>(s)) return "complete";
  const auto& st = std::get<StridedSchedule>(s);
  return "strided(" + std::to_string(st.base) + ", " + std::to_string(st.stride) + ")";
}

/// Flat key=value experiment description. Unknown keys are rejected; every
/// effective parameter (defaults included) is echoed into resolved_config.
struct ExperimentConfig {
  std::string model_text{"count"};
  std::string region_text{"box(-0.5,-0.5; 0.5,0.5)"};
  std::int64_t n_max{2000};
  std::string schedule_text{"complete"};
  std::vector<std::int64_t> seeds{1};
  std::int64_t reps{500};
  std::vector<std::int64_t> k_grid{125, 250, 500, 1000, 2000};
  std::string out{"out"};
  int threads{1};
  std::string calibration_path;
  BoundConfig bounds;
  std::int64_t quad_points{100000};
  std::vector<std::string> quantities{"ikn", "gamma2"};
  std::vector<std::int64_t> n_list{100, 1000, 10000};
  std::int64_t n2{200};
  std::vector<double> t_grid{0.5, 1.0, 2.0};
  std::int64_t trajectories{100};
  std::int64_t proxy_trials{100};
  std::vector<double> dist_grid{0.025, 0.05, 0.075, 0.1, 0.15, 0.2};
  std::int64_t decay_reps{400};
  bool dump_master{false};
  std::int64_t eval_grid_points{25};
  Vec region_translation;  // applied at load when Y misses the origin

  // resolved objects
  Region region() const {
    Region y = parse_region(region_text);
    if (!region_translation.empty()) y = y.translated(region_translation);
    return y;
  }
  ScoreModel model() const { return parse_model(model_text, region()); }
  ScheduleSpec schedule() const { return parse_schedule(schedule_text); }

  void set(const std::string& key, const std::string& value);
  void finalize();
  [[nodiscard]] std::string resolved_text() const;
  [[nodiscard]] std::uint64_t hash() const;
};

inline void ExperimentConfig::set(const std::string& key, const std::string& value) {
  using detail::parse_int;
  using detail::parse_real;
  if (key == "model") {
    model_text = value;
  } else if (key == "region") {
    region_text = value;
  } else if (key == "n_max") {
    n_max = parse_int(value);
  } else if (key == "schedule") {
    schedule_text = value;
  } else if (key == "seeds") {
    seeds.clear();
    for (const auto& p : detail::split(value, ',')) seeds.push_back(parse_int(p));
  } else if (key == "reps") {
    reps = parse_int(value);
  } else if (key == "k_grid") {
    k_grid.clear();
    for (const auto& p : detail::split(value, ',')) k_grid.push_back(parse_int(p));
  } else if (key == "out") {
    out = value;
  } else if (key == "threads") {
    threads = static_cast<int>(parse_int(value));
  } else if (key == "calibration") {
    calibration_path = value;
  } else if (key == "p_dprime") {
    bounds.p_dprime = parse_real(value);
  } else if (key == "c_pprime") {
    bounds.c_pprime = parse_real(value);
  } else if (key == "alpha") {
    bounds.alpha = parse_real(value);
  } else if (key == "p") {
    bounds.p = parse_real(value);
  } else if (key == "q") {
    bounds.q = parse_real(value);
  } else if (key == "outer_samples") {
    bounds.outer_samples = parse_int(value);
  } else if (key == "inner_reps") {
    bounds.inner_reps = parse_int(value);
  } else if (key == "quad_points") {
    quad_points = parse_int(value);
  } else if (key == "quantities") {
    quantities.clear();
    for (const auto& p : detail::split(value, ',')) quantities.push_back(p);
  } else if (key == "n_list") {
    n_list.clear();
    for (const auto& p : detail::split(value, ',')) n_list.push_back(parse_int(p));
  } else if (key == "n2") {
    n2 = parse_int(value);
  } else if (key == "t_grid") {
    t_grid.clear();
    for (const auto& p : detail::split(value, ',')) t_grid.push_back(parse_real(p));
  } else if (key == "trajectories") {
    trajectories = parse_int(value);
  } else if (key == "proxy_trials") {
    proxy_trials = parse_int(value);
  } else if (key == "dist_grid") {
    dist_grid.clear();
    for (const auto& p : detail::split(value, ',')) dist_grid.push_back(parse_real(p));
  } else if (key == "decay_reps") {
    decay_reps = parse_int(value);
  } else if (key == "dump_master") {
    if (value == "true")
      dump_master = true;
    else if (value == "false")
      dump_master = false;
    else
      throw config_error("dump_master must be true or false");
  } else if (key == "eval_grid_points") {
    eval_grid_points = parse_int(value);
  } else {
    throw config_error("unknown configuration key: '" + key + "'");
  }
}

/// Anchor the window at the origin when needed (the coupled scaling dilates
/// about the origin) and validate the resolved objects.
inline void ExperimentConfig::finalize() {
  Region y = parse_region(region_text);
  const Vec origin(y.dimension(), 0.0);
  if (!y.contains(origin)) {
    const Vec c = y.anchor_point();
    region_translation.assign(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) region_translation[i] = -c[i];
  }
  bounds.validate();
  const ScoreModel m = model();
  if (std::holds_alternative<VoronoiSpec>(m.kind)) {
    // The Voronoi window is pinned; the region key must agree.
    const Region r = region();
    if (!r.is_box() || !r.contains_region(m.y) || !m.y.contains_region(r))
      throw config_error("voronoi model requires region = box(-0.5,..; 0.5,..)");
  }
  (void)schedule();
  if (n_max < 1) throw config_error("n_max must be >= 1");
  if (seeds.empty()) throw config_error("seeds must not be empty");
  if (threads < 1) throw config_error("threads must be >= 1");
}

inline std::string ExperimentConfig::resolved_text() const {
  std::ostringstream os;
  auto ints = [](const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  auto reals = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + detail::format_real(v[i]);
    return s;
  };
  os << "alpha = " << detail::format_real(bounds.alpha) << "\n";
  os << "c_pprime = " << detail::format_real(bounds.c_pprime) << "\n";
  os << "calibration = " << calibration_path << "\n";
  os << "decay_reps = " << decay_reps << "\n";
  os << "dist_grid = " << reals(dist_grid) << "\n";
  os << "dump_master = " << (dump_master ? "true" : "false") << "\n";
  os << "eval_grid_points = " << eval_grid_points << "\n";
  os << "inner_reps = " << bounds.inner_reps << "\n";
  os << "k_grid = " << ints(k_grid) << "\n";
  os << "model = " << model_to_literal(model()) << "\n";
  os << "n2 = " << n2 << "\n";
  os << "n_list = " << ints(n_list) << "\n";
  os << "n_max = " << n_max << "\n";
  os << "out = " << out << "\n";
  os << "outer_samples = " << bounds.outer_samples << "\n";
  os << "p = " << detail::format_real(bounds.p) << "\n";
  os << "p_dprime = " << detail::format_real(bounds.p_dprime) << "\n";
  os << "proxy_trials = " << proxy_trials << "\n";
  os << "quad_points = " << quad_points << "\n";
  std::string qs;
  for (std::size_t i = 0; i < quantities.size(); ++i) qs += (i ? "," : "") + quantities[i];
  os << "quantities = " << qs << "\n";
  os << "q = " << detail::format_real(bounds.q) << "\n";
  os << "region = " << region_to_literal(region()) << "\n";
  os << "reps = " << reps << "\n";
  os << "schedule = " << schedule_to_literal(schedule()) << "\n";
  os << "seeds = " << ints(seeds) << "\n";
  os << "t_grid = " << reals(t_grid) << "\n";
  os << "threads = " << threads << "\n";
  os << "trajectories = " << trajectories << "\n";
  return os.str();
}

/// FNV-1a over the resolved text minus location/worker keys, which do not
/// affect results by contract.
inline std::uint64_t ExperimentConfig::hash() const {
  std::istringstream in(resolved_text());
  std::string line;
  std::uint64_t h = 1469598103934665603ULL;
  while (std::getline(in, line)) {
    if (line.rfind("out =", 0) == 0 || line.rfind("threads =", 0) == 0) continue;
    for (char c : line) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    h ^= static_cast<unsigned char>('\n');
    h *= 1099511628211ULL;
  }
  return h;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace asclt
