#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace hetprobit {

/// Numeric table with a header row. CSV dialect: comma separated, UTF-8,
/// LF line endings.
struct CsvTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  int column_index(const std::string& name) const;  // -1 when absent
};

/// Parse a CSV file; throws ParseError with the offending 1-based line.
CsvTable read_csv(const std::string& path);

/// Format a double with 17 significant digits (lossless round trip).
std::string format_double(double v);

/// Write a table; values are formatted with format_double.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values);

/// Split a comma/semicolon separated list of numbers ("0.5,1;0.25,2" gives
/// two rows). Used for inline prediction points and alpha lists.
std::vector<std::vector<double>> parse_number_rows(const std::string& text);

}  // namespace hetprobit
