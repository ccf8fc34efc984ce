#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "maskfill/harness.hpp"
#include "maskfill/io.hpp"

namespace maskfill {

namespace {

constexpr std::string_view kCsvHeader = "gamma_a,gamma_s,ba,distance,diversity";

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string cell(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::optional<double> parse_cell(std::string_view s, std::size_t line_no) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    data_error("bad number '" + std::string(s) + "' in CSV line " + std::to_string(line_no));
  return v;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

// Linear blend from dark blue to yellow.
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto ch = [&](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
  std::ostringstream ss;
  ss << "rgb(" << ch(68, 253) << ',' << ch(1, 231) << ',' << ch(84, 37) << ')';
  return ss.str();
}

std::string heatmap_svg(const std::vector<SweepRow>& rows) {
  std::set<double> xs, ys;
  double lo = 1e300, hi = -1e300;
  for (const auto& r : rows) {
    xs.insert(r.gamma_a);
    ys.insert(r.gamma_s);
    if (r.ba) {
      lo = std::min(lo, *r.ba);
      hi = std::max(hi, *r.ba);
    }
  }
  const std::vector<double> xv(xs.begin(), xs.end()), yv(ys.begin(), ys.end());
  constexpr int kCell = 60, kMargin = 70;
  const int width = kMargin * 2 + kCell * static_cast<int>(xv.size());
  const int height = kMargin * 2 + kCell * static_cast<int>(yv.size());
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">validation BA by mask ratio</text>\n";
  for (const auto& r : rows) {
    const auto xi = std::distance(xv.begin(), std::find(xv.begin(), xv.end(), r.gamma_a));
    const auto yi = std::distance(yv.begin(), std::find(yv.begin(), yv.end(), r.gamma_s));
    const int x = kMargin + static_cast<int>(xi) * kCell;
    const int y = kMargin + (static_cast<int>(yv.size()) - 1 - static_cast<int>(yi)) * kCell;
    const std::string fill = r.ba ? ramp(hi > lo ? (*r.ba - lo) / (hi - lo) : 0.5) : "rgb(200,200,200)";
    svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell << "\" fill=\""
        << fill << "\"/>\n";
    svg << "<text x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
        << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"white\">" << (r.ba ? fixed(*r.ba, 3) : "n/a")
        << "</text>\n";
  }
  for (std::size_t i = 0; i < xv.size(); ++i)
    svg << "<text x=\"" << kMargin + static_cast<int>(i) * kCell + kCell / 2 << "\" y=\"" << height - kMargin + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fixed(xv[i]) << "</text>\n";
  for (std::size_t i = 0; i < yv.size(); ++i)
    svg << "<text x=\"" << kMargin - 8 << "\" y=\""
        << kMargin + (static_cast<int>(yv.size()) - 1 - static_cast<int>(i)) * kCell + kCell / 2 + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(yv[i]) << "</text>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\" font-size=\"12\">gamma_a</text>\n";
  svg << "<text x=\"16\" y=\"" << height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << height / 2
      << ")\">gamma_s</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string scatter_svg(const std::vector<SweepRow>& rows, AnalysisField field, const std::string& label) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    const auto& v = field == AnalysisField::Distance ? r.distance : r.diversity;
    if (r.ok && r.ba && v) pts.emplace_back(*v, *r.ba);
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (auto [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  constexpr int kW = 480, kH = 360, kM = 50;
  auto px = [&](double x) { return kM + (x - x0) / (x1 - x0) * (kW - 2 * kM); };
  auto py = [&](double y) { return kH - kM - (y - y0) / (y1 - y0) * (kH - 2 * kM); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  svg << "<rect x=\"" << kM << "\" y=\"" << kM << "\" width=\"" << kW - 2 * kM << "\" height=\"" << kH - 2 * kM
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (auto [x, y] : pts)
    svg << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y)) << "\" r=\"4\" fill=\"steelblue\"/>\n";
  std::string caption = label + " vs validation BA";
  try {
    const auto fit = fit_analysis(rows, field);
    svg << "<polyline fill=\"none\" stroke=\"crimson\" points=\"";
    for (int i = 0; i <= 50; ++i) {
      const double x = x0 + (x1 - x0) * i / 50.0;
      svg << fixed(px(x)) << ',' << fixed(py(fit(x))) << ' ';
    }
    svg << "\"/>\n";
    caption += " (R^2 = " + fixed(fit.r_squared, 3) + ")";
  } catch (const Error&) {
  }
  svg << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << caption << "</text>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << label
      << " [" << fixed(x0, 3) << ", " << fixed(x1, 3) << "]</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += num(r.gamma_a) + ',' + num(r.gamma_s) + ',' + cell(r.ba) + ',' + cell(r.distance) + ',' + cell(r.diversity);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view csv) {
  std::vector<SweepRow> rows;
  std::size_t pos = 0, line_no = 0;
  bool header = true;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) data_error("unexpected sweep CSV header");
      header = false;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t c = 0;
    while (true) {
      std::size_t comma = line.find(',', c);
      cells.push_back(line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c));
      if (comma == std::string_view::npos) break;
      c = comma + 1;
    }
    if (cells.size() != 5) data_error("sweep CSV line " + std::to_string(line_no) + " needs 5 cells");
    SweepRow r;
    auto ga = parse_cell(cells[0], line_no), gs = parse_cell(cells[1], line_no);
    if (!ga || !gs) data_error("sweep CSV line " + std::to_string(line_no) + " lacks mask ratios");
    r.gamma_a = *ga;
    r.gamma_s = *gs;
    r.ba = parse_cell(cells[2], line_no);
    r.distance = parse_cell(cells[3], line_no);
    r.diversity = parse_cell(cells[4], line_no);
    r.ok = r.ba.has_value();
    rows.push_back(std::move(r));
  }
  if (header) data_error("empty sweep CSV");
  return rows;
}

std::vector<std::filesystem::path> emit_plots(const std::vector<SweepRow>& rows, const std::filesystem::path& dir) {
  if (rows.empty()) data_error("emit_plots: no rows to plot");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) data_error("cannot create output directory " + dir.string());

  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, const std::string& content) {
    io::write_file(dir / name, content);
    written.push_back(dir / name);
  };
  write("heatmap.svg", heatmap_svg(rows));
  write("heatmap.csv", sweep_csv(rows));

  for (auto [field, label] : {std::pair{AnalysisField::Distance, std::string("distance")},
                              std::pair{AnalysisField::Diversity, std::string("diversity")}}) {
    std::vector<SweepRow> plotted;
    for (const auto& r : rows) {
      const auto& v = field == AnalysisField::Distance ? r.distance : r.diversity;
      if (r.ok && r.ba && v) plotted.push_back(r);
    }
    if (plotted.size() < 3) continue;
    write(label + ".svg", scatter_svg(plotted, field, label));
    write(label + ".csv", sweep_csv(plotted));
  }
  return written;
}

}  // namespace maskfill
