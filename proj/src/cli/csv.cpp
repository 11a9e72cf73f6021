#include "onebit/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace onebit::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  if (result.ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, result.ptr);
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  for (const auto& name : header) field(name);
  end_row();
}

void CsvWriter::separator() {
  if (in_row_ > 0) text_ += ',';
  ++in_row_;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  text_ += format_number(value);
  return *this;
}

CsvWriter& CsvWriter::field(long value) {
  separator();
  text_ += std::to_string(value);
  return *this;
}

CsvWriter& CsvWriter::field(const std::string& value) {
  separator();
  text_ += value;
  return *this;
}

CsvWriter& CsvWriter::field(std::optional<double> value) {
  separator();
  if (value) text_ += format_number(*value);
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CsvWriter: row has wrong number of fields");
  text_ += '\n';
  in_row_ = 0;
}

}  // namespace onebit::cli
