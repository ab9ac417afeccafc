#include "csv.hpp"

#include "imvb7/errors.hpp"
#include "imvb7/util.hpp"

namespace imvb7::csv {

Table parse(const std::string& text, const std::string& origin) {
  Table table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    if (pos == text.size() && line_no > 0) break;
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (pos >= text.size()) break; // trailing newline
      raise(ErrorCode::ParseError, origin + ": blank line " + std::to_string(line_no));
    }
    auto fields = split_string(line, ',');
    if (!saw_header) {
      table.header = std::move(fields);
      saw_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      raise(ErrorCode::ParseError,
            origin + ": line " + std::to_string(line_no) + " has " +
                std::to_string(fields.size()) + " fields, expected " +
                std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!saw_header) raise(ErrorCode::ParseError, origin + ": empty file");
  return table;
}

Table load(const std::string& path) {
  return parse(read_file(path), path);
}

std::string render_row(const std::vector<std::string>& fields) {
  return join_strings(fields, ",") + "\n";
}

} // namespace imvb7::csv
