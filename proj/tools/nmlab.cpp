#include <cstdlib>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmlab/experiments.hpp"
#include "nmlab/plot.hpp"
#include "nmlab/verify.hpp"

namespace {

constexpr int kUsageError = 2;

nmlab::RunConfig load_config(const std::string& path) {
  return path.empty() ? nmlab::RunConfig::defaults() : nmlab::RunConfig::from_file(path);
}

nlohmann::json report_json(const nmlab::MeasureReport& r) {
  nlohmann::json j{{"measure", nmlab::to_string(r.kind)},
                   {"p", r.p.value()},
                   {"scheme", r.scheme.name()},
                   {"value", r.value},
                   {"grid", {{"t0", r.grid.t0()}, {"t1", r.grid.t1()}, {"points", r.grid.size()}}}};
  if (r.optimal_pair) j["optimal_pair"] = {{"theta", r.optimal_pair->theta}, {"phi", r.optimal_pair->phi}};
  auto incs = nlohmann::json::array();
  for (const auto& inc : r.increments) {
    incs.push_back({{"t_begin", inc.t_begin}, {"t_end", inc.t_end}, {"gain", inc.gain}});
  }
  j["increments"] = incs;
  j["diagnostics"] = r.diagnostics;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nmlab: non-Markovianity of measurement-free teleportation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nmlab::version());

  std::string config_path;
  std::string out_dir;
  unsigned workers = 0;

  auto* figure = app.add_subcommand("figure", "Compute one figure data set and write it as CSV");
  std::string fig_name;
  figure->add_option("fig-id", fig_name, "fig2, fig2_inset, fig3, fig4, fig5, fig6, fig7 or all")
      ->required();
  figure->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  figure->add_option("--out", out_dir, "Output directory");
  figure->add_option("--workers", workers, "Worker threads (default: NMLAB_WORKERS or 1)")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Check the analytic and numerical claims");
  verify->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  bool verify_text = false;
  verify->add_flag("--text", verify_text, "Human-readable summary instead of JSON");

  auto* measure = app.add_subcommand("measure", "Evaluate one non-Markovianity measure");
  std::string measure_kind, scheme_name = "block", variant_name = "swap";
  double p = 0.0;
  measure->add_option("kind", measure_kind, "blp, rhp or lfs")
      ->required()
      ->check(CLI::IsMember({"blp", "rhp", "lfs"}));
  measure->add_option("--p", p, "Werner parameter")->required()->check(CLI::Range(0.0, 1.0));
  measure->add_option("--scheme", scheme_name, "block or gates")
      ->check(CLI::IsMember({"block", "gates"}));
  measure->add_option("--variant", variant_name, "swap or bbc")->check(CLI::IsMember({"swap", "bbc"}));
  measure->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

  auto* plot = app.add_subcommand("plot", "Render a figure CSV as SVG");
  std::string csv_path, plot_kind;
  plot->add_option("csv", csv_path, "Figure CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", plot_kind, "line or heatmap")
      ->required()
      ->check(CLI::IsMember({"line", "heatmap"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*figure) {
      auto cfg = load_config(config_path);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      cfg.workers = workers > 0 ? workers : nmlab::workers_from_env(cfg.workers);
      cfg.validate();
      std::vector<nmlab::FigureId> figs;
      if (fig_name == "all") {
        figs = nmlab::all_figures();
      } else if (auto f = nmlab::parse_figure_id(fig_name)) {
        figs.push_back(*f);
      } else {
        std::cerr << "nmlab: unknown figure id '" << fig_name << "'\n";
        return kUsageError;
      }
      for (auto f : figs) std::cout << nmlab::run_figure(f, cfg).string() << "\n";
      return 0;
    }
    if (*verify) {
      auto cfg = load_config(config_path);
      cfg.workers = nmlab::workers_from_env(cfg.workers);
      const auto report = nmlab::verify_claims(cfg);
      std::cout << (verify_text ? report.summary() : report.to_json_text() + "\n");
      return report.all_passed() ? 0 : 1;
    }
    if (*measure) {
      const auto cfg = load_config(config_path);
      const auto variant = variant_name == "bbc" ? nmlab::CircuitVariant::OriginalBbc
                                                 : nmlab::CircuitVariant::SwapTerminated;
      const auto scheme = scheme_name == "gates" ? nmlab::DynamicsScheme::gates(variant)
                                                 : nmlab::DynamicsScheme::block(variant);
      const auto grid = nmlab::TimeGrid::for_scheme(scheme, cfg.steps_per_unit);
      const nmlab::WernerParam wp(p);
      nmlab::RhpConfig rhp = cfg.rhp;
      rhp.richardson_check = true;
      nmlab::MeasureReport r = measure_kind == "blp"   ? nmlab::blp_measure(scheme, wp, grid, cfg.blp_opt)
                               : measure_kind == "rhp" ? nmlab::rhp_measure(scheme, wp, grid, rhp)
                                                       : nmlab::lfs_measure(scheme, wp, grid);
      std::cout << report_json(r).dump(2) << "\n";
      return 0;
    }
    if (*plot) {
      std::cout << nmlab::emit_plot(csv_path, nmlab::parse_plot_kind(plot_kind)).string() << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "nmlab: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "nmlab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
