#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace topowalk::io {

/// Parses radians written as a decimal ("-0.19634954084936207") or as a
/// multiple of pi ("pi", "-pi/16", "3pi/8", "2*pi/9", "0.5pi").
/// Throws std::invalid_argument on anything else.
double parse_angle(std::string_view text);

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_double(double value);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::initializer_list<std::string_view> columns);

  CsvTable& add(double value);
  CsvTable& add(long long value);
  CsvTable& add(int value) { return add(static_cast<long long>(value)); }
  CsvTable& add(std::string_view value);
  void end_row();

  const std::string& text() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  void separator();

  std::string text_;
  std::size_t columns_ = 0;
  std::size_t filled_ = 0;
  std::size_t rows_ = 0;
};

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::invalid_argument if the column is absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> numbers(std::string_view name) const;
};

CsvData read_csv(const std::filesystem::path& path);

/// Writes `content` to `path` and returns its SHA-256 digest in hex.
std::string write_file(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view content);

}  // namespace topowalk::io
