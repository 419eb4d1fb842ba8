#include "qimage/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <system_error>

#include "qimage/errors.hpp"
#include "qimage/simulate.hpp"
#include "qimage/units.hpp"

namespace qimage::io {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
  if (res.ec != std::errc()) throw Error("format_error", "number formatting failed");
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json metadata(const std::string& command, const nlohmann::json& parameters) {
  return {{"command", command},
          {"parameters", parameters},
          {"units", units::kConvention},
          {"versions",
           {{"qimage", kLibraryVersion},
            {"profiles", kLibraryVersion},
            {"meanfield-fisher", kLibraryVersion},
            {"bdg", kLibraryVersion},
            {"imagestats", kLibraryVersion},
            {"inference", kLibraryVersion},
            {"simulate", kLibraryVersion}}},
          {"rng", kRngAlgorithm},
          {"timestamp", utc_timestamp()}};
}

CsvWriter::CsvWriter(std::ostream& out, const nlohmann::json& meta,
                     std::vector<std::string> columns)
    : out_(out), width_(columns.size()) {
  out_ << "# " << meta.dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw InvalidParameter("CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InvalidParameter("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

}  // namespace qimage::io
