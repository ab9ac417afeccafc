#pragma once

#include <string>
#include <vector>

namespace imvb7::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows; // data rows, header excluded
  std::vector<std::size_t> line_numbers;      // 1-based source line per row
};

// Comma-separated, no quoting (field values are identifier-like). Accepts
// \r\n and a missing final newline. Raises ParseError on an empty file or a
// row whose field count differs from the header's.
Table parse(const std::string& text, const std::string& origin);
Table load(const std::string& path);

std::string render_row(const std::vector<std::string>& fields);

} // namespace imvb7::csv
