#include "nmlab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nmlab {

namespace {

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("plot: cannot open " + path.string());
  Csv csv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (csv.columns.empty()) {
      csv.columns = cells;
      continue;
    }
    if (cells.size() != csv.columns.size()) {
      throw std::invalid_argument("plot: ragged row in " + path.string());
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw std::invalid_argument("plot: non-numeric cell '" + c + "'");
      }
    }
    csv.rows.push_back(std::move(row));
  }
  if (csv.columns.size() < 2 || csv.rows.empty()) {
    throw std::invalid_argument("plot: CSV needs a header and at least one row");
  }
  return csv;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  void fit(const std::vector<double>& v) {
    const auto [a, b] = std::minmax_element(v.begin(), v.end());
    lo = *a;
    hi = *b;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double unit(double v) const { return (v - lo) / (hi - lo); }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

constexpr double kW = 480.0;
constexpr double kH = 320.0;
constexpr double kMargin = 50.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void axes(std::ostream& out, double ox, double oy, const Range& x, const Range& y,
          const std::string& xl, const std::string& yl) {
  const double x0 = ox + kMargin, y0 = oy + kH - kMargin;
  out << "<g font-size=\"11\" font-family=\"sans-serif\">\n"
      << "<rect x=\"" << x0 << "\" y=\"" << oy + 10 << "\" width=\"" << kW - kMargin - 10
      << "\" height=\"" << kH - kMargin - 10 << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << x0 << "\" y=\"" << y0 + 15 << "\">" << num(x.lo) << "</text>\n"
      << "<text x=\"" << ox + kW - 40 << "\" y=\"" << y0 + 15 << "\">" << num(x.hi) << "</text>\n"
      << "<text x=\"" << ox + 2 << "\" y=\"" << y0 << "\">" << num(y.lo) << "</text>\n"
      << "<text x=\"" << ox + 2 << "\" y=\"" << oy + 20 << "\">" << num(y.hi) << "</text>\n"
      << "<text x=\"" << ox + kW / 2 << "\" y=\"" << y0 + 30 << "\">" << xl << "</text>\n"
      << "<text x=\"" << ox + 2 << "\" y=\"" << oy + kH / 2 << "\">" << yl << "</text>\n"
      << "</g>\n";
}

double px(double ox, const Range& x, double v) { return ox + kMargin + x.unit(v) * (kW - kMargin - 10); }
double py(double oy, const Range& y, double v) { return oy + kH - kMargin - y.unit(v) * (kH - kMargin - 10); }

std::string render_line(const Csv& csv) {
  // Series keyed by label: either one per value column, or, for the
  // (p, t, D) schema, one per distinct p with x = t.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::string xl = csv.columns[0], yl;
  const bool grouped = csv.columns.size() == 3 && csv.columns[0] == "p" && csv.columns[1] == "t";
  if (grouped) {
    xl = "t";
    yl = csv.columns[2];
    for (const auto& r : csv.rows) series["p=" + num(r[0])].emplace_back(r[1], r[2]);
  } else {
    for (std::size_t c = 1; c < csv.columns.size(); ++c) {
      for (const auto& r : csv.rows) series[csv.columns[c]].emplace_back(r[0], r[c]);
    }
  }
  std::vector<double> xs, ys;
  for (const auto& [_, pts] : series) {
    for (const auto& [a, b] : pts) {
      xs.push_back(a);
      ys.push_back(b);
    }
  }
  Range x, y;
  x.fit(xs);
  y.fit(ys);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW + 120 << "\" height=\"" << kH
      << "\">\n";
  axes(out, 0, 0, x, y, xl, yl);
  std::size_t k = 0;
  for (const auto& [label, pts] : series) {
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [a, b] : pts) out << px(0, x, a) << "," << py(0, y, b) << " ";
    out << "\"/>\n<text font-size=\"11\" font-family=\"sans-serif\" x=\"" << kW + 5 << "\" y=\""
        << 20 + 15 * k << "\" fill=\"" << color << "\">" << label << "</text>\n";
    ++k;
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_heatmap(const Csv& csv) {
  if (csv.columns.size() < 3 || csv.columns[0] != "t" || csv.columns[1] != "p") {
    throw std::invalid_argument("plot: heatmap needs columns t,p,value...");
  }
  std::vector<double> ts, ps;
  for (const auto& r : csv.rows) {
    ts.push_back(r[0]);
    ps.push_back(r[1]);
  }
  auto uniq = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto tu = uniq(ts), pu = uniq(ps);
  Range x, y;
  x.fit(ts);
  y.fit(ps);
  const double cw = (kW - kMargin - 10) / static_cast<double>(std::max<std::size_t>(tu.size(), 1));
  const double ch = (kH - kMargin - 10) / static_cast<double>(std::max<std::size_t>(pu.size(), 1));
  const std::size_t panels = csv.columns.size() - 2;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW * panels << "\" height=\""
      << kH + 20 << "\">\n";
  for (std::size_t c = 0; c < panels; ++c) {
    const double ox = kW * c;
    std::vector<double> vs;
    for (const auto& r : csv.rows) vs.push_back(r[c + 2]);
    Range v;
    v.fit(vs);
    for (const auto& r : csv.rows) {
      const int level = static_cast<int>(std::lround(255.0 * v.unit(r[c + 2])));
      out << "<rect x=\"" << px(ox, x, r[0]) - cw / 2 << "\" y=\"" << py(0, y, r[1]) - ch / 2
          << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"rgb(" << level << ",0,"
          << 255 - level << ")\"/>\n";
    }
    axes(out, ox, 0, x, y, "t", "p");
    out << "<text font-size=\"12\" font-family=\"sans-serif\" x=\"" << ox + kW / 2 << "\" y=\""
        << kH + 15 << "\">" << csv.columns[c + 2] << " [" << num(v.lo) << ", " << num(v.hi)
        << "]</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

PlotKind parse_plot_kind(const std::string& s) {
  if (s == "line") return PlotKind::Line;
  if (s == "heatmap") return PlotKind::Heatmap;
  throw std::invalid_argument("plot: unknown kind '" + s + "'");
}

std::filesystem::path emit_plot(const std::filesystem::path& csv_path, PlotKind kind) {
  const Csv csv = read_csv(csv_path);
  if (kind == PlotKind::Line && csv.columns.size() >= 2 && csv.columns[0] == "t" &&
      csv.columns.size() > 2 && csv.columns[1] == "p") {
    throw std::invalid_argument("plot: (t, p, ...) data is a heatmap, not a line plot");
  }
  const std::string svg = kind == PlotKind::Line ? render_line(csv) : render_heatmap(csv);
  auto out_path = csv_path;
  out_path.replace_extension(".svg");
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("plot: cannot write " + out_path.string());
  out << svg;
  return out_path;
}

}  // namespace nmlab
