#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace bneck {

// Shortest round-trip decimal form ('.' separator, locale independent).
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Comma-separated writer: '#' comment preamble, header row, LF endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& comments,
            std::initializer_list<std::string_view> columns);

  CsvWriter& cell(double v);
  CsvWriter& cell(std::size_t v);
  CsvWriter& cell(std::string_view v);
  void end_row();

 private:
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace bneck
