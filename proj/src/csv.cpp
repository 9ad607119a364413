#include "hetprobit/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hetprobit/errors.hpp"

namespace hetprobit {

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) {
    // Strip stray CR from CRLF input and surrounding blanks.
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ' || field.back() == '\t'))
      field.pop_back();
    std::size_t start = 0;
    while (start < field.size() && (field[start] == ' ' || field[start] == '\t')) ++start;
    out.push_back(field.substr(start));
  }
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

double parse_cell(const std::string& cell, int line_no, const std::string& column) {
  if (cell.empty()) {
    throw ParseError(line_no, "empty value in column '" + column + "'");
  }
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') {
    throw ParseError(line_no, "cannot parse '" + cell + "' in column '" + column + "' as a number");
  }
  return v;
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return static_cast<int>(j);
  }
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(0, "cannot open file '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(1, "empty file '" + path + "'");
  }
  CsvTable table;
  table.columns = split_line(line, ',');
  if (table.columns.empty()) {
    throw ParseError(1, "missing header row");
  }
  const std::size_t ncol = table.columns.size();
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line, ',');
    if (cells.size() != ncol) {
      throw ParseError(line_no, "expected " + std::to_string(ncol) + " fields, found " +
                                    std::to_string(cells.size()));
    }
    std::vector<double> row(ncol);
    for (std::size_t j = 0; j < ncol; ++j) {
      row[j] = parse_cell(cells[j], line_no, table.columns[j]);
    }
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncol));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < ncol; ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError(0, "cannot open '" + path + "' for writing");
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) out << ',';
    out << columns[j];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << format_double(values(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw ParseError(0, "write failed for '" + path + "'");
  }
}

std::vector<std::vector<double>> parse_number_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::string chunk;
  std::istringstream ss(text);
  while (std::getline(ss, chunk, ';')) {
    if (chunk.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    for (const auto& cell : split_line(chunk, ',')) {
      row.push_back(parse_cell(cell, 0, "inline list"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hetprobit
