#pragma once

#include <string>
#include <vector>

namespace genvi::harness {

struct CsvTable {
  std::vector<std::string> columns;
  std::string comment;  ///< second header line, without the leading "# "
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
};

/// 17 significant digits, '.' decimal separator, locale independent.
std::string format_number(double x);

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace genvi::harness
