#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ocular::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;  // NaN breaks the line
};

// Line chart over a shared time axis t = k / fps.
std::string svg_line_chart(const std::string& title, double fps, const std::vector<Series>& series,
                           std::optional<double> hline = std::nullopt, const std::string& y_label = "");

}  // namespace ocular::cli
