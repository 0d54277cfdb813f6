#include "bneck/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bneck {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& comments,
                     std::initializer_list<std::string_view> columns)
    : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot write " + path);
  for (const auto& c : comments) out_ << "# " << c << '\n';
  for (auto col : columns) cell(col);
  end_row();
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::cell(std::size_t v) { return cell(std::string_view(std::to_string(v))); }

CsvWriter& CsvWriter::cell(std::string_view v) {
  if (!first_) out_ << ',';
  out_ << v;
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

}  // namespace bneck
