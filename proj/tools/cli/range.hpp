#pragma once

#include <string>
#include <vector>

namespace qimage::cli {

// Parses "v", "start:stop" (unit step) or "start:stop:step" into a list.
// The start is always included, the stop whenever it lies within half a
// step of the last regular point.
std::vector<double> parse_range(const std::string& text);

// Parses "a,b,c" where each item may itself be a range.
std::vector<double> parse_list(const std::string& text);

}  // namespace qimage::cli
