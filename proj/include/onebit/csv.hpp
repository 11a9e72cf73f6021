#pragma once

#include <optional>
#include <string>
#include <vector>

namespace onebit::cli {

/// Locale-independent decimal with 12 significant digits.
std::string format_number(double value);

/// Row builder; empty optionals become empty fields.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& field(double value);
  CsvWriter& field(long value);
  CsvWriter& field(int value) { return field(static_cast<long>(value)); }
  CsvWriter& field(const std::string& value);
  CsvWriter& field(std::optional<double> value);
  void end_row();

  const std::string& str() const { return text_; }

 private:
  void separator();
  std::string text_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace onebit::cli
