#include "tosi/io/index_set.hpp"

#include "tosi/error.hpp"

#include <charconv>
#include <fstream>
#include <set>

namespace tosi {

IndexSet read_index_set(std::istream& in, Index p, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  std::set<Index> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t(line);
    if (const auto hash = t.find('#'); hash != std::string_view::npos) t = t.substr(0, hash);
    const auto b = t.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    const auto e = t.find_last_not_of(" \t\r");
    t = t.substr(b, e - b + 1);
    const std::string where = std::string(source) + ": line " + std::to_string(line_no);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
      throw InputError(where + ": expected one integer index, got '" + std::string(t) + "'");
    if (v < 1 || static_cast<unsigned long long>(v) > p)
      throw InputError(where + ": index " + std::to_string(v) + " outside 1.." + std::to_string(p));
    if (!seen.insert(static_cast<Index>(v - 1)).second)
      throw InputError(where + ": duplicate index " + std::to_string(v));
  }
  if (seen.empty()) throw InputError(std::string(source) + ": index set is empty");
  return IndexSet(seen.begin(), seen.end());
}

IndexSet read_index_set_file(const std::string& path, Index p) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_index_set(in, p, path);
}

}  // namespace tosi
