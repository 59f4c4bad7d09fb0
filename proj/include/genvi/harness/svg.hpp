#pragma once

#include <string>

#include "genvi/harness/csv.hpp"

namespace genvi::harness {

struct SvgOptions {
  bool log_y = false;
  std::string title;
  int width = 800;
  int height = 500;
};

/// Line plot of every column against the first one.
std::string render_svg(const CsvTable& table, const SvgOptions& options);

/// Path of the plot written next to a CSV file: x.csv -> x.svg.
std::string svg_path_for(const std::string& csv_path);

}  // namespace genvi::harness
