#include "dirichlet/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <cstdlib>

#include "dirichlet/error.hpp"

namespace dirichlet::csv {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.write(buf, n);
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && s[b] == ' ') ++b;
  return s.substr(b);
}

}  // namespace

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    put(out, v);
    first = false;
  }
  out << '\n';
}

void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    put(out, values[i]);
  }
  out << '\n';
}

std::vector<std::vector<double>> read_numeric(std::istream& in, const std::vector<std::string>& columns) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "csv: missing header");
  std::string expected;
  for (std::size_t i = 0; i < columns.size(); ++i) expected += (i ? "," : "") + columns[i];
  if (trim(line) != expected)
    throw Error(ErrorCode::InvalidArgument, "csv: expected header '" + expected + "', got '" + trim(line) + "'");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      // strtod accepts nan/inf spellings; validation of finiteness is left to callers.
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw Error(ErrorCode::InvalidArgument,
                    "csv line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != columns.size())
      throw Error(ErrorCode::InvalidArgument, "csv line " + std::to_string(line_no) + ": expected " +
                                                  std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dirichlet::csv
