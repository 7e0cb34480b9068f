#pragma once

#include "tosi/numerics/matrix.hpp"

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace tosi {

/// Numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;

  /// 0-based position of the named column; throws InputError when absent.
  Index column(std::string_view name) const;
};

/// Parses comma-separated text with a mandatory header row. Fields may be
/// double-quoted ("" escapes a quote). Numbers use '.' as decimal point and
/// may use scientific notation, independent of the C locale. Empty, non-numeric
/// or non-finite cells and ragged rows raise InputError naming the line and
/// column.
CsvTable read_csv(std::istream& in, std::string_view source = "<input>");
CsvTable read_csv_file(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// FNV-1a over the bit patterns of every entry, row-major, with the shape.
std::uint64_t matrix_digest(const Matrix& m);

/// Digest of each row's bit pattern (used to detect shared observations).
std::vector<std::uint64_t> row_digests(const Matrix& m);

}  // namespace tosi
