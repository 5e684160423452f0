#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ledgerlift::csv {

// RFC 4180 style: fields containing separators, quotes or surrounding
// whitespace are quoted; embedded quotes are doubled.
std::vector<std::string> split_line(std::string_view line);
std::string quote(std::string_view cell);
std::string join_line(std::span<const std::string> cells);

}  // namespace ledgerlift::csv
