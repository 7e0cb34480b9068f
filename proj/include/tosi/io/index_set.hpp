#pragma once

#include "tosi/core/estimate.hpp"

#include <istream>
#include <string>
#include <string_view>

namespace tosi {

/// Reads one 1-based index per line; '#' starts a comment and blank lines
/// are skipped. Returns the 0-based sorted set. Throws InputError (with the
/// line number) for non-integers, indices outside 1..p, duplicates, or an
/// empty set.
IndexSet read_index_set(std::istream& in, Index p, std::string_view source = "<input>");
IndexSet read_index_set_file(const std::string& path, Index p);

}  // namespace tosi
