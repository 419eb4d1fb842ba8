#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qimage::io {

inline constexpr const char* kLibraryVersion = "1.0.0";

// Shortest round-trip-free rendering with 9 significant digits, '.' decimal,
// independent of the global locale.
std::string format_number(double value);

// UTC timestamp in ISO 8601 form.
std::string utc_timestamp();

// Metadata block written as the first line of every output file. The
// timestamp only ever appears here.
nlohmann::json metadata(const std::string& command, const nlohmann::json& parameters);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const nlohmann::json& meta, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t width_;
};

}  // namespace qimage::io
