#pragma once

#include "qdepth/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qdepth {

/// Reads a comma-separated numeric matrix. Blank lines are skipped; the first
/// non-blank line is dropped when `has_header` is set. Ragged rows, unparsable
/// cells and files without data raise InputError naming the line and column.
DataSet parse_csv(const std::string& path, bool has_header);

/// Same as parse_csv on in-memory text; `source` labels diagnostics.
DataSet parse_csv_text(std::string_view text, bool has_header, const std::string& source = "<text>");

/// Parses "a,b,c" into numbers (used for list-valued options).
std::vector<double> parse_number_list(std::string_view text);

/// printf("%.9g"): nine significant digits.
std::string format_sig9(double value);

}  // namespace qdepth
