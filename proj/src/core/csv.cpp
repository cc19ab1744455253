#include "damd/core/csv.hpp"

#include "damd/core/errors.hpp"

#include <iomanip>
#include <locale>
#include <sstream>

namespace damd::core {

std::string format_double(double v)
{
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> header)
{
  open(path);
  for (auto h : header)
    cell(h);
  end_row();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
{
  open(path);
  for (const auto& h : header)
    cell(std::string_view(h));
  end_row();
}

void CsvWriter::open(const std::filesystem::path& path)
{
  out_.open(path);
  if (!out_)
    throw ValidationError("cannot open " + path.string() + " for writing");
  out_.imbue(std::locale::classic());
}

void CsvWriter::sep()
{
  if (row_started_)
    out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double v)
{
  sep();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v)
{
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view s)
{
  sep();
  out_ << s;
  return *this;
}

void CsvWriter::end_row()
{
  out_ << '\n';
  row_started_ = false;
}

std::size_t CsvTable::column(std::string_view name) const
{
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name)
      return c;
  throw ValidationError("CSV column '" + std::string(name) + "' not found");
}

CsvTable read_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ','))
      fields.push_back(f);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size())
        throw ValidationError(path.string() + ": row width does not match header");
      table.rows.push_back(std::move(fields));
    }
  }
  if (first)
    throw ValidationError(path.string() + ": empty file");
  return table;
}

} // namespace damd::core
