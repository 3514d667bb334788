#pragma once

// Parameter sweeps that produce the figure data sets, plus the run
// configuration shared by the `nmlab` command-line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nmlab/correlations.hpp"
#include "nmlab/nonmarkov.hpp"

namespace nmlab {

std::string version();

enum class FigureId { Fig2, Fig2Inset, Fig3, Fig4, Fig5, Fig6, Fig7 };

std::string to_string(FigureId f);
std::optional<FigureId> parse_figure_id(const std::string& s);
const std::vector<FigureId>& all_figures();

/// Every numeric knob of a run. Defaults reproduce the full figure suite.
///
/// JSON schema (all keys optional):
///   p_grid            [number]   fig2 sweep                 default 0, 0.01, ..., 1
///   inset_p_grid      [number]   fig2_inset sweep           default 0, 0.05, ..., 1
///   fig4_p_values     [number]   fig4 curves                default 0, 0.25, 0.5, 0.75, 1
///   heatmap_p_grid    [number]   fig5-fig7 sweep            default 0, 0.05, ..., 1
///   steps_per_unit    integer    time samples per unit      default 200
///   heatmap_steps_per_unit integer  same, for fig5-fig7     default 200
///   blp_opt           {coarse_theta, coarse_phi, refine_rounds}   13, 25, 3
///   corr_opt          {coarse_theta, coarse_phi, refine_rounds}   13, 25, 3
///   rhp               {eps, pinv_tol, richardson_check}     1e-3, 1e-10, false
///   threshold_cutoff  number     non-Markovianity cutoff    default 1e-4
///   measured_side     "system" | "environment"             default "system"
///   out_dir           string                                default "out"
///   workers           integer >= 1                          default 1
struct RunConfig {
  std::vector<double> p_grid;
  std::vector<double> inset_p_grid;
  std::vector<double> fig4_p_values;
  std::vector<double> heatmap_p_grid;
  std::size_t steps_per_unit = 200;
  std::size_t heatmap_steps_per_unit = 200;
  OptConfig blp_opt;
  OptConfig corr_opt;
  RhpConfig rhp{1e-3, kPinvRelTol, false};
  double threshold_cutoff = 1e-4;
  MeasuredSide measured_side = MeasuredSide::System;
  std::string out_dir = "out";
  unsigned workers = 1;

  static RunConfig defaults();
  /// Parses a JSON document on top of the defaults; throws std::invalid_argument.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::filesystem::path& path);
  std::string to_json_text() const;
  /// Stable 64-bit hash of the settings that affect results (excludes
  /// out_dir and workers).
  std::uint64_t hash() const;
  void validate() const;
};

/// Uniform grid lo, lo + step, ..., hi with values rounded to 1e-12.
std::vector<double> linspace_step(double lo, double hi, double step);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Column names for a figure's CSV.
std::vector<std::string> figure_columns(FigureId f);

Table compute_figure(FigureId f, const RunConfig& cfg);

/// CSV text: a '#' comment line with version, figure and config hash, a
/// header row, then rows with 12 significant digits.
std::string format_csv(const Table& table, FigureId f, const RunConfig& cfg);

/// Computes the figure and writes <out_dir>/<fig-id>.csv. Returns the path.
std::filesystem::path run_figure(FigureId f, const RunConfig& cfg);

std::string format_number(double v);

/// Evaluates fn(0..n-1) on up to `workers` threads; results keep index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, unsigned workers, Fn&& fn);

/// Worker count from NMLAB_WORKERS, or `fallback` when unset or invalid.
unsigned workers_from_env(unsigned fallback = 1);

}  // namespace nmlab

#include "nmlab/detail/parallel.hpp"
