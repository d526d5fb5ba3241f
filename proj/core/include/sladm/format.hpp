#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sladm::realline {

/// Decimal with 17 significant digits; infinities become "inf" / "-inf".
std::string format_double(double v);

/// Serializes with sorted keys and 17-significant-digit numbers. Non-finite
/// floats are written as the strings "inf", "-inf" and "nan".
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Comma separated values with a header row and LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  void write(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace sladm::realline
