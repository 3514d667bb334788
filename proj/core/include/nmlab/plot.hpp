#pragma once

#include <filesystem>
#include <string>

namespace nmlab {

enum class PlotKind { Line, Heatmap };

PlotKind parse_plot_kind(const std::string& s);

/// Renders a figure CSV as a small static SVG next to it (same stem,
/// .svg extension) and returns the SVG path. Line plots accept the
/// (x, y...) and (p, t, D) schemas; heatmaps accept (t, p, values...).
/// Throws std::invalid_argument when the CSV does not fit the kind.
std::filesystem::path emit_plot(const std::filesystem::path& csv, PlotKind kind);

}  // namespace nmlab
