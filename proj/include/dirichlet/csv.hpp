#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace dirichlet::csv {

/// Writes one comma separated row with round-trip precision.
void write_row(std::ostream& out, std::initializer_list<double> values);
void write_row(std::ostream& out, const std::vector<double>& values);

/// Parses a header line that must equal `columns` followed by numeric rows.
/// Blank lines are skipped. Throws InvalidArgument on malformed input.
std::vector<std::vector<double>> read_numeric(std::istream& in, const std::vector<std::string>& columns);

}  // namespace dirichlet::csv
