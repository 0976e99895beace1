#include "fuzzyid/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fuzzyid::svg {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
      const double pad = std::max(1e-6, std::abs(lo) * 0.05);
      lo -= pad;
      hi += pad;
    }
  }
};

void frame(std::ostringstream& out, const std::string& title, const std::string& x_label,
           const std::string& y_label, const Range& xr, const Range& yr, bool x_ticks) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << px(pw) << "\" height=\""
      << px(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    const double y = kTop + ph - ph * i / 4.0;
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << px(y) << "\" x2=\"" << kLeft << "\" y2=\""
        << px(y) << "\" stroke=\"black\"/>";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\">"
        << num(yv) << "</text>\n";
    if (!x_ticks) continue;
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double x = kLeft + pw * i / 4.0;
    out << "<line x1=\"" << px(x) << "\" y1=\"" << px(kTop + ph) << "\" x2=\"" << px(x)
        << "\" y2=\"" << px(kTop + ph + 4) << "\" stroke=\"black\"/>";
    out << "<text x=\"" << px(x) << "\" y=\"" << px(kTop + ph + 16) << "\" text-anchor=\"middle\">"
        << num(xv) << "</text>\n";
  }
  out << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << px(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << px(kTop + ph / 2) << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string line_chart(const Chart& chart) {
  Range xr, yr;
  for (const auto& s : chart.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double v) { return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream out;
  frame(out, chart.title, chart.x_label, chart.y_label, xr, yr, true);
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) out << px(sx(s.x[i])) << ',' << px(sy(s.y[i])) << ' ';
      out << "\"/>\n";
    }
    if (s.markers)
      for (std::size_t i = 0; i < n; ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
          out << "<circle cx=\"" << px(sx(s.x[i])) << "\" cy=\"" << px(sy(s.y[i]))
              << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << px(ly) << "\" x2=\""
        << kWidth - kRight + 32 << "\" y2=\"" << px(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>";
    out << "<text x=\"" << kWidth - kRight + 36 << "\" y=\"" << px(ly + 4) << "\">" << escape(s.name)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<std::string>& labels,
                      const std::vector<double>& values) {
  Range xr, yr;
  yr.add(0);
  for (double v : values) yr.add(v);
  yr.finish();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  std::ostringstream out;
  frame(out, title, x_label, y_label, xr, yr, false);
  const double slot = values.empty() ? pw : pw / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = (values[i] - yr.lo) / (yr.hi - yr.lo) * ph;
    const double x = kLeft + slot * static_cast<double>(i);
    out << "<rect x=\"" << px(x + slot * 0.15) << "\" y=\"" << px(kTop + ph - h) << "\" width=\""
        << px(slot * 0.7) << "\" height=\"" << px(h) << "\" fill=\"" << kPalette[0] << "\"/>";
    if (i < labels.size())
      out << "<text x=\"" << px(x + slot / 2) << "\" y=\"" << px(kTop + ph + 14)
          << "\" text-anchor=\"middle\" font-size=\"8\">" << escape(labels[i]) << "</text>";
    out << "\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace fuzzyid::svg
