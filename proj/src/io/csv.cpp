#include "tosi/io/csv.hpp"

#include "tosi/error.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tosi {
namespace {

std::string location(std::string_view source, std::size_t line, std::size_t col) {
  std::ostringstream os;
  os << source << ": line " << line << ", column " << col;
  return os.str();
}

// Splits one logical record. Quoted fields may not span lines.
std::vector<std::string> split_record(const std::string& line, std::string_view source,
                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (!cur.empty() && cur.find_first_not_of(" \t") != std::string::npos)
        throw InputError(location(source, line_no, fields.size() + 1) + ": stray quote");
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted && c != ' ' && c != '\t')
        throw InputError(location(source, line_no, fields.size() + 1) +
                         ": text after closing quote");
      cur.push_back(c);
    }
  }
  if (quoted) throw InputError(location(source, line_no, fields.size() + 1) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, std::string_view source, std::size_t line,
                    std::size_t col, const std::string& name) {
  std::string_view t = trim(text);
  const std::string where = location(source, line, col) + " (" + name + ")";
  if (t.empty()) throw InputError(where + ": missing value");
  if (t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc::result_out_of_range) throw InputError(where + ": value out of range");
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw InputError(where + ": not a number: '" + std::string(trim(text)) + "'");
  if (!std::isfinite(v)) throw InputError(where + ": non-finite value");
  return v;
}

}  // namespace

Index CsvTable::column(std::string_view name) const {
  for (Index j = 0; j < header.size(); ++j)
    if (header[j] == name) return j;
  throw InputError("no column named '" + std::string(name) + "'");
}

CsvTable read_csv(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  CsvTable table;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_record(line, source, line_no);
    if (!have_header) {
      for (auto& f : fields) {
        const std::string name(trim(f));
        if (name.empty())
          throw InputError(location(source, line_no, table.header.size() + 1) + ": empty column name");
        table.header.push_back(name);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      std::ostringstream os;
      os << source << ": line " << line_no << ": expected " << table.header.size()
         << " fields, found " << fields.size();
      throw InputError(os.str());
    }
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j)
      row[j] = parse_number(fields[j], source, line_no, j + 1, table.header[j]);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError(std::string(source) + ": empty file (header row required)");
  if (rows.empty()) throw InputError(std::string(source) + ": no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_csv(in, path);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t mix_u64(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFu;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t matrix_digest(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = mix_u64(h, static_cast<std::uint64_t>(m.rows()));
  h = mix_u64(h, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) h = mix_u64(h, std::bit_cast<std::uint64_t>(m(i, j)));
  return h;
}

std::vector<std::uint64_t> row_digests(const Matrix& m) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Eigen::Index j = 0; j < m.cols(); ++j) h = mix_u64(h, std::bit_cast<std::uint64_t>(m(i, j)));
    out[static_cast<std::size_t>(i)] = h;
  }
  return out;
}

}  // namespace tosi
