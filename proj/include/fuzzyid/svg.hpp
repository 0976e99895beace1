#pragma once

// Minimal self-contained SVG charts for the experiment outputs.

#include <string>
#include <vector>

namespace fuzzyid::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
  bool line = true;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

std::string line_chart(const Chart& chart);

/// One bar per value, labelled below the axis.
std::string bar_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<std::string>& labels,
                      const std::vector<double>& values);

}  // namespace fuzzyid::svg
