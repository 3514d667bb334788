#include "nmlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#ifndef NMLAB_VERSION
#define NMLAB_VERSION "0.0.0"
#endif

namespace nmlab {

using nlohmann::json;

namespace {

json opt_to_json(const OptConfig& o) {
  return {{"coarse_theta", o.coarse_theta},
          {"coarse_phi", o.coarse_phi},
          {"refine_rounds", o.refine_rounds}};
}

void opt_from_json(const json& j, OptConfig& o) {
  o.coarse_theta = j.value("coarse_theta", o.coarse_theta);
  o.coarse_phi = j.value("coarse_phi", o.coarse_phi);
  o.refine_rounds = j.value("refine_rounds", o.refine_rounds);
}

// Settings that change numerical results. out_dir and workers are excluded.
json result_settings(const RunConfig& c) {
  return {{"p_grid", c.p_grid},
          {"inset_p_grid", c.inset_p_grid},
          {"fig4_p_values", c.fig4_p_values},
          {"heatmap_p_grid", c.heatmap_p_grid},
          {"steps_per_unit", c.steps_per_unit},
          {"heatmap_steps_per_unit", c.heatmap_steps_per_unit},
          {"blp_opt", opt_to_json(c.blp_opt)},
          {"corr_opt", opt_to_json(c.corr_opt)},
          {"rhp",
           {{"eps", c.rhp.eps},
            {"pinv_tol", c.rhp.pinv_tol},
            {"richardson_check", c.rhp.richardson_check}}},
          {"threshold_cutoff", c.threshold_cutoff},
          {"measured_side", c.measured_side == MeasuredSide::System ? "system" : "environment"}};
}

std::vector<double> grid_from_json(const json& j, const char* key) {
  if (!j.is_array()) throw std::invalid_argument(std::string("config: ") + key + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument(std::string("config: ") + key + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

DensityMatrix basis_state(int bit) { return bit == 0 ? InputState::zero().density() : InputState::one().density(); }

Table fig2(const RunConfig& cfg) {
  const auto scheme = DynamicsScheme::block();
  const TimeGrid grid = TimeGrid::for_scheme(scheme, cfg.steps_per_unit);
  Table t{figure_columns(FigureId::Fig2), {}};
  t.rows = parallel_map<std::vector<double>>(cfg.p_grid.size(), cfg.workers, [&](std::size_t i) {
    const WernerParam p(cfg.p_grid[i]);
    return std::vector<double>{p.value(), blp_measure(scheme, p, grid, cfg.blp_opt).value,
                               rhp_measure(scheme, p, grid, cfg.rhp).value,
                               lfs_measure(scheme, p, grid).value};
  });
  return t;
}

Table fig2_inset(const RunConfig& cfg) {
  const auto scheme = DynamicsScheme::gates();
  const TimeGrid grid = TimeGrid::for_scheme(scheme, cfg.steps_per_unit);
  Table t{figure_columns(FigureId::Fig2Inset), {}};
  t.rows = parallel_map<std::vector<double>>(cfg.inset_p_grid.size(), cfg.workers, [&](std::size_t i) {
    const WernerParam p(cfg.inset_p_grid[i]);
    return std::vector<double>{p.value(), blp_measure(scheme, p, grid, cfg.blp_opt).value};
  });
  return t;
}

Table fig3(const RunConfig& cfg) {
  const auto scheme = DynamicsScheme::gates();
  const TimeGrid grid(5.0, 8.0, 3 * cfg.steps_per_unit + 1);
  const auto traj = map_trajectory(scheme, WernerParam(0.0), grid);
  const auto d = distance_curve(traj, basis_state(0).mat(), basis_state(1).mat());
  Table t{figure_columns(FigureId::Fig3), {}};
  for (std::size_t k = 0; k < d.size(); ++k) t.rows.push_back({traj.times[k], d[k]});
  return t;
}

Table fig4(const RunConfig& cfg) {
  const auto scheme = DynamicsScheme::gates(CircuitVariant::OriginalBbc);
  const TimeGrid grid = TimeGrid::for_scheme(scheme, cfg.steps_per_unit);
  auto blocks = parallel_map<std::vector<std::vector<double>>>(
      cfg.fig4_p_values.size(), cfg.workers, [&](std::size_t i) {
        const WernerParam p(cfg.fig4_p_values[i]);
        const auto traj = map_trajectory(scheme, p, grid, Wire::E2);
        const auto d = distance_curve(traj, basis_state(0).mat(), basis_state(1).mat());
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < d.size(); ++k) rows.push_back({p.value(), traj.times[k], d[k]});
        return rows;
      });
  Table t{figure_columns(FigureId::Fig4), {}};
  for (auto& b : blocks) {
    for (auto& r : b) t.rows.push_back(std::move(r));
  }
  return t;
}

Table correlation_heatmap(FigureId f, const DynamicsScheme& scheme, const InputState& psi,
                          const RunConfig& cfg) {
  const TimeGrid grid = TimeGrid::for_scheme(scheme, cfg.heatmap_steps_per_unit);
  const CorrelationConfig ccfg{cfg.corr_opt, cfg.measured_side};
  const Propagator prop(scheme);
  const auto times = grid.points();
  const std::size_t nt = times.size();
  const std::size_t np = cfg.heatmap_p_grid.size();
  // Cells are p-major; each is independent.
  Table t{figure_columns(f), {}};
  t.rows = parallel_map<std::vector<double>>(np * nt, cfg.workers, [&](std::size_t cell) {
    const double tt = times[cell % nt];
    const WernerParam p(cfg.heatmap_p_grid[cell / nt]);
    const auto s = correlation_sample(joint_state(psi, p, prop.at(tt)), tt, p.value(), ccfg);
    return std::vector<double>{s.t, s.p, s.neg, s.discord, s.classical};
  });
  return t;
}

}  // namespace

std::string version() { return NMLAB_VERSION; }

std::string to_string(FigureId f) {
  switch (f) {
    case FigureId::Fig2: return "fig2";
    case FigureId::Fig2Inset: return "fig2_inset";
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
    case FigureId::Fig5: return "fig5";
    case FigureId::Fig6: return "fig6";
    case FigureId::Fig7: return "fig7";
  }
  return "?";
}

const std::vector<FigureId>& all_figures() {
  static const std::vector<FigureId> figs{FigureId::Fig2, FigureId::Fig2Inset, FigureId::Fig3,
                                          FigureId::Fig4, FigureId::Fig5,      FigureId::Fig6,
                                          FigureId::Fig7};
  return figs;
}

std::optional<FigureId> parse_figure_id(const std::string& s) {
  for (FigureId f : all_figures()) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("linspace_step: bad range");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    out[k] = std::round((lo + step * static_cast<double>(k)) * 1e12) / 1e12;
  }
  out.back() = hi;
  return out;
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.p_grid = linspace_step(0.0, 1.0, 0.01);
  c.inset_p_grid = linspace_step(0.0, 1.0, 0.05);
  c.fig4_p_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  c.heatmap_p_grid = linspace_step(0.0, 1.0, 0.05);
  return c;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  RunConfig c = defaults();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "p_grid") c.p_grid = grid_from_json(value, "p_grid");
      else if (key == "inset_p_grid") c.inset_p_grid = grid_from_json(value, "inset_p_grid");
      else if (key == "fig4_p_values") c.fig4_p_values = grid_from_json(value, "fig4_p_values");
      else if (key == "heatmap_p_grid") c.heatmap_p_grid = grid_from_json(value, "heatmap_p_grid");
      else if (key == "steps_per_unit") c.steps_per_unit = value.get<std::size_t>();
      else if (key == "heatmap_steps_per_unit") c.heatmap_steps_per_unit = value.get<std::size_t>();
      else if (key == "blp_opt") opt_from_json(value, c.blp_opt);
      else if (key == "corr_opt") opt_from_json(value, c.corr_opt);
      else if (key == "rhp") {
        c.rhp.eps = value.value("eps", c.rhp.eps);
        c.rhp.pinv_tol = value.value("pinv_tol", c.rhp.pinv_tol);
        c.rhp.richardson_check = value.value("richardson_check", c.rhp.richardson_check);
      } else if (key == "threshold_cutoff") c.threshold_cutoff = value.get<double>();
      else if (key == "measured_side") {
        const auto side = value.get<std::string>();
        if (side == "system") c.measured_side = MeasuredSide::System;
        else if (side == "environment") c.measured_side = MeasuredSide::Environment;
        else throw std::invalid_argument("config: measured_side must be system or environment");
      } else if (key == "out_dir") c.out_dir = value.get<std::string>();
      else if (key == "workers") c.workers = value.get<unsigned>();
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  json j = result_settings(*this);
  j["out_dir"] = out_dir;
  j["workers"] = workers;
  return j.dump(2);
}

std::uint64_t RunConfig::hash() const {
  // FNV-1a over the canonical dump; std::hash is not stable across toolchains.
  const std::string text = result_settings(*this).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void RunConfig::validate() const {
  const auto check_grid = [](const std::vector<double>& g, const char* name) {
    if (g.empty()) throw std::invalid_argument(std::string("config: ") + name + " is empty");
    for (double p : g) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string("config: ") + name + " values must lie in [0, 1]");
      }
    }
  };
  check_grid(p_grid, "p_grid");
  check_grid(inset_p_grid, "inset_p_grid");
  check_grid(fig4_p_values, "fig4_p_values");
  check_grid(heatmap_p_grid, "heatmap_p_grid");
  if (steps_per_unit < 1 || heatmap_steps_per_unit < 1) {
    throw std::invalid_argument("config: steps_per_unit must be positive");
  }
  for (const OptConfig* o : {&blp_opt, &corr_opt}) {
    if (o->coarse_theta < 2 || o->coarse_phi < 1 || o->refine_rounds < 0) {
      throw std::invalid_argument("config: optimizer grid must be at least 2 x 1 with rounds >= 0");
    }
  }
  if (!(rhp.eps > 0.0 && rhp.eps < 0.5)) throw std::invalid_argument("config: rhp.eps must lie in (0, 0.5)");
  if (!(rhp.pinv_tol > 0.0 && rhp.pinv_tol < 1.0)) {
    throw std::invalid_argument("config: rhp.pinv_tol must lie in (0, 1)");
  }
  if (!(threshold_cutoff >= 0.0)) throw std::invalid_argument("config: threshold_cutoff must be >= 0");
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
}

std::vector<std::string> figure_columns(FigureId f) {
  switch (f) {
    case FigureId::Fig2: return {"p", "N_blp", "N_rhp", "N_lfs"};
    case FigureId::Fig2Inset: return {"p", "N_blp"};
    case FigureId::Fig3: return {"t", "D"};
    case FigureId::Fig4: return {"p", "t", "D"};
    case FigureId::Fig5:
    case FigureId::Fig6:
    case FigureId::Fig7: return {"t", "p", "neg", "discord", "classical"};
  }
  return {};
}

Table compute_figure(FigureId f, const RunConfig& cfg) {
  cfg.validate();
  switch (f) {
    case FigureId::Fig2: return fig2(cfg);
    case FigureId::Fig2Inset: return fig2_inset(cfg);
    case FigureId::Fig3: return fig3(cfg);
    case FigureId::Fig4: return fig4(cfg);
    case FigureId::Fig5:
      return correlation_heatmap(f, DynamicsScheme::block(), InputState::zero(), cfg);
    case FigureId::Fig6:
      return correlation_heatmap(f, DynamicsScheme::gates(), InputState::zero(), cfg);
    case FigureId::Fig7:
      return correlation_heatmap(f, DynamicsScheme::gates(), InputState::plus(), cfg);
  }
  throw std::invalid_argument("compute_figure: unknown figure");
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_csv(const Table& table, FigureId f, const RunConfig& cfg) {
  std::ostringstream out;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
  out << "# nmlab " << version() << " figure=" << to_string(f) << " config=" << hash << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << "\n";
  }
  return out.str();
}

std::filesystem::path run_figure(FigureId f, const RunConfig& cfg) {
  const std::string text = format_csv(compute_figure(f, cfg), f, cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  const auto path = std::filesystem::path(cfg.out_dir) / (to_string(f) + ".csv");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path;
}

unsigned workers_from_env(unsigned fallback) {
  const char* env = std::getenv("NMLAB_WORKERS");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) return fallback;
  return static_cast<unsigned>(v);
}

}  // namespace nmlab
