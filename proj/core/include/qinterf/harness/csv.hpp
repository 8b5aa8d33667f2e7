#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qinterf::harness {

/// Round-trip formatting (%.17g); "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
/// Inverse of format_double. Throws std::invalid_argument on malformed text.
double parse_double(std::string_view text);

/// Joins fields with commas. Fields must not contain commas, quotes or newlines.
std::string csv_line(std::span<const std::string> fields);
std::vector<std::string> split_csv_line(std::string_view line);

/// Appends rows to a CSV file, flushing after each row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::span<const std::string> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write_row(std::span<const std::string> fields);

 private:
  std::FILE* file_ = nullptr;
  std::size_t columns_;
};

/// A fully loaded CSV file with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header; throws std::invalid_argument if absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] bool has_column(std::string_view name) const;
  /// The named column parsed as doubles.
  [[nodiscard]] std::vector<double> numbers(std::string_view name) const;
  [[nodiscard]] std::vector<std::string> strings(std::string_view name) const;
};

/// Throws std::invalid_argument on a missing file or ragged rows.
CsvTable read_csv(const std::string& path);

/// Reads a whole file into a string. Throws std::invalid_argument if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace qinterf::harness
