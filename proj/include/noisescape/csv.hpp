#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace noisescape::csv {

/// Splits one CSV record. Fields may be double-quoted; a doubled quote
/// inside a quoted field is a literal quote. Surrounding whitespace of
/// unquoted fields is trimmed.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);

/// Reads the next line, dropping a trailing CR. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

std::optional<double> parse_double(std::string_view text);

}  // namespace noisescape::csv
