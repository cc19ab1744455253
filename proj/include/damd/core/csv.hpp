#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace damd::core {

/// Minimal CSV writer: header row, '.' decimal separator, numbers printed
/// with 17 significant digits so files compare bit-for-bit across runs.
class CsvWriter
{
public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::string_view s);
  void end_row();

private:
  void open(const std::filesystem::path& path);
  void sep();

  std::ofstream out_;
  bool row_started_ = false;
};

/// Format a double with 17 significant digits in the classic locale.
std::string format_double(double v);

/// Parsed CSV: header names plus rows of raw string fields.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace damd::core
