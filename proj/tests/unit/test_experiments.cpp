#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "nmlab/experiments.hpp"
#include "nmlab/plot.hpp"
#include "nmlab/verify.hpp"

using namespace nmlab;

namespace {

RunConfig small_config() {
  auto cfg = RunConfig::from_json_text(R"({"p_grid": [0.3, 0.6, 1.0], "steps_per_unit": 40,
    "heatmap_p_grid": [0.0, 1.0], "heatmap_steps_per_unit": 4, "inset_p_grid": [0.5],
    "fig4_p_values": [0.0, 1.0]})");
  cfg.out_dir = (std::filesystem::temp_directory_path() / "nmlab_unit").string();
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(RunConfig, DefaultsAndJson) {
  const auto cfg = RunConfig::defaults();
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.p_grid.size(), 101u);
  EXPECT_EQ(cfg.p_grid.back(), 1.0);
  const auto again = RunConfig::from_json_text(cfg.to_json_text());
  EXPECT_EQ(again.hash(), cfg.hash());
  EXPECT_THROW(RunConfig::from_json_text(R"({"no_such_key": 1})"), std::invalid_argument);
  EXPECT_THROW(RunConfig::from_json_text(R"({"workers": 0})").validate(), std::invalid_argument);
  EXPECT_THROW(RunConfig::from_json_text("{"), std::invalid_argument);
}

TEST(RunConfig, HashIgnoresPlumbing) {
  auto a = RunConfig::defaults();
  auto b = a;
  b.out_dir = "elsewhere";
  b.workers = 4;
  EXPECT_EQ(a.hash(), b.hash());
  b.steps_per_unit = 100;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(FigureId, RoundTrip) {
  for (auto f : all_figures()) EXPECT_EQ(parse_figure_id(to_string(f)), f);
  EXPECT_FALSE(parse_figure_id("fig9").has_value());
  EXPECT_EQ(all_figures().size(), 7u);
}

TEST(Formatting, NumbersAndGrid) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(0.5), "0.5");
  const auto g = linspace_step(0.0, 1.0, 0.01);
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g[41], 0.41);
  EXPECT_EQ(g.back(), 1.0);
}

TEST(ParallelMap, OrderedAndPropagatesErrors) {
  const auto sq = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < sq.size(); ++i) EXPECT_EQ(sq[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map<int>(10, 3,
                                 [](std::size_t i) -> int {
                                   if (i == 7) throw std::runtime_error("boom");
                                   return 0;
                                 }),
               std::runtime_error);
}

TEST(Workers, FromEnvironment) {
  ::setenv("NMLAB_WORKERS", "3", 1);
  EXPECT_EQ(workers_from_env(), 3u);
  ::setenv("NMLAB_WORKERS", "zero", 1);
  EXPECT_EQ(workers_from_env(2), 2u);
  ::unsetenv("NMLAB_WORKERS");
  EXPECT_EQ(workers_from_env(), 1u);
}

TEST(Figures, Fig2RowsMatchDirectMeasures) {
  const auto cfg = small_config();
  const Table t = compute_figure(FigureId::Fig2, cfg);
  ASSERT_EQ(t.columns, figure_columns(FigureId::Fig2));
  ASSERT_EQ(t.rows.size(), 3u);
  const auto block = DynamicsScheme::block();
  const auto grid = TimeGrid::for_scheme(block, cfg.steps_per_unit);
  for (const auto& row : t.rows) {
    const WernerParam p(row[0]);
    EXPECT_EQ(row[1], blp_measure(block, p, grid, cfg.blp_opt).value);
    EXPECT_EQ(row[2], rhp_measure(block, p, grid, cfg.rhp).value);
    EXPECT_EQ(row[3], lfs_measure(block, p, grid).value);
  }
}

TEST(Figures, CsvLayoutAndWorkerIndependence) {
  auto cfg = small_config();
  for (auto f : all_figures()) {
    cfg.workers = 1;
    const std::string serial = format_csv(compute_figure(f, cfg), f, cfg);
    cfg.workers = 3;
    const std::string parallel = format_csv(compute_figure(f, cfg), f, cfg);
    EXPECT_EQ(serial, parallel) << to_string(f);
    const auto ls = lines(serial);
    ASSERT_GE(ls.size(), 3u);
    EXPECT_EQ(ls[0].rfind("# nmlab " + version(), 0), 0u);
    EXPECT_NE(ls[0].find("figure=" + to_string(f)), std::string::npos);
    EXPECT_EQ(serial.back(), '\n');
  }
  const auto fig3 = compute_figure(FigureId::Fig3, cfg);
  EXPECT_EQ(fig3.rows.front()[0], 5.0);
  EXPECT_NEAR(fig3.rows.front()[1], 1.0, 1e-12);
  EXPECT_EQ(fig3.rows.back()[0], 8.0);
}

TEST(Figures, RunWritesCsvAndPlot) {
  const auto cfg = small_config();
  const auto path = run_figure(FigureId::Fig2Inset, cfg);
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto svg = emit_plot(path, PlotKind::Line);
  EXPECT_TRUE(std::filesystem::exists(svg));
  EXPECT_THROW(emit_plot(path, PlotKind::Heatmap), std::invalid_argument);
  const auto heat = run_figure(FigureId::Fig5, cfg);
  EXPECT_NO_THROW(emit_plot(heat, PlotKind::Heatmap));
  EXPECT_THROW(emit_plot(heat, PlotKind::Line), std::invalid_argument);
  EXPECT_THROW(parse_plot_kind("bar"), std::invalid_argument);
}

TEST(VerifyReport, JsonFields) {
  VerifyReport r{{{"a", "1", 1.0, 0.1, true, ""}, {"b", "2", 3.0, 0.1, false, "x"}}};
  EXPECT_FALSE(r.all_passed());
  const std::string json = r.to_json_text();
  for (const char* key : {"\"check\"", "\"expected\"", "\"measured\"", "\"tolerance\"", "\"pass\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}
