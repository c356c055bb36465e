#include "topowalk/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "topowalk/hilbert.hpp"

namespace topowalk::io {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || end != last || first == last) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

double parse_angle(std::string_view text) {
  static const std::regex pi_form(R"(^\s*([+-]?)([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)",
                                  std::regex::icase);
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    const double coefficient = m[2].length() > 0 ? parse_number(m[2].str()) : 1.0;
    const double denominator = m[3].matched ? parse_number(m[3].str()) : 1.0;
    if (denominator == 0.0) throw std::invalid_argument("zero denominator in angle '" + s + "'");
    const double value = coefficient * kPi / denominator;
    return m[1].str() == "-" ? -value : value;
  }
  const auto trimmed_begin = s.find_first_not_of(" \t");
  const auto trimmed_end = s.find_last_not_of(" \t");
  if (trimmed_begin == std::string::npos) throw std::invalid_argument("empty angle");
  const double value = parse_number(std::string_view(s).substr(trimmed_begin, trimmed_end - trimmed_begin + 1));
  if (!std::isfinite(value)) throw std::invalid_argument("angle must be finite");
  return value;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

CsvTable::CsvTable(std::initializer_list<std::string_view> columns) : columns_(columns.size()) {
  for (auto name : columns) add(name);
  end_row();
  rows_ = 0;
}

void CsvTable::separator() {
  if (filled_ == columns_) throw std::logic_error("too many CSV fields in row");
  if (filled_ > 0) text_ += ',';
  ++filled_;
}

CsvTable& CsvTable::add(double value) {
  separator();
  text_ += format_double(value);
  return *this;
}

CsvTable& CsvTable::add(long long value) {
  separator();
  text_ += std::to_string(value);
  return *this;
}

CsvTable& CsvTable::add(std::string_view value) {
  separator();
  text_ += value;
  return *this;
}

void CsvTable::end_row() {
  if (filled_ != columns_) throw std::logic_error("incomplete CSV row");
  text_ += '\n';
  filled_ = 0;
  ++rows_;
}

std::size_t CsvData::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw std::invalid_argument("CSV has no column '" + std::string(name) + "'");
}

std::vector<double> CsvData::numbers(std::string_view name) const {
  const std::size_t k = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(parse_number(row.at(k)));
  return out;
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  CsvData data;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (first) {
      data.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != data.header.size()) {
        throw std::invalid_argument("ragged CSV row in " + path.string());
      }
      data.rows.push_back(std::move(fields));
    }
  }
  if (first) throw std::invalid_argument(path.string() + " is empty");
  return data;
}

std::string sha256_hex(std::string_view content) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(content.data(), content.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xF];
  }
  return out;
}

std::string write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return sha256_hex(content);
}

}  // namespace topowalk::io
