#include "cli/range.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qimage/errors.hpp"

namespace qimage::cli {

namespace {

double parse_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw InvalidParameter("not a finite number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 1) return {parse_number(parts[0])};
  if (parts.size() != 2 && parts.size() != 3) {
    throw InvalidParameter("malformed range '" + text + "'");
  }
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double step = parts.size() == 3 ? parse_number(parts[2]) : (stop >= start ? 1.0 : -1.0);
  if (start == stop) return {start};
  if (step == 0.0 || (stop - start) / step < 0.0) {
    throw InvalidParameter("range '" + text + "' has a step of the wrong sign");
  }
  const double count = std::floor((stop - start) / step + 0.5);
  if (count > 1e6) throw InvalidParameter("range '" + text + "' has too many points");
  std::vector<double> out;
  for (long i = 0; i <= static_cast<long>(count); ++i) out.push_back(start + i * step);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto r = parse_range(item);
    out.insert(out.end(), r.begin(), r.end());
  }
  if (out.empty()) throw InvalidParameter("empty value list");
  return out;
}

}  // namespace qimage::cli
