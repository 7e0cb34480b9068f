#include "tosi/harness/gsets.hpp"

#include "tosi/error.hpp"

#include <algorithm>

namespace tosi {
namespace {

// 1-based closed range [lo, hi] as 0-based indices.
std::vector<Index> range1(Index lo, Index hi) {
  std::vector<Index> out;
  for (Index j = lo; j <= hi; ++j) out.push_back(j - 1);
  return out;
}

IndexSet join(std::vector<Index> a, const std::vector<Index>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return make_index_set(std::move(a));
}

}  // namespace

std::vector<GSet> build_gsets(Index p, Index s) {
  if (p < 4) throw DomainError("G-set families need p >= 4");
  if (s < 1 || s >= p) throw DomainError("G-set families need 1 <= s < p");
  const auto tail = range1(s + 1, p);
  return {
      {"G11", range1(p - 1, p), Mode::max},
      {"G12", range1(std::max<Index>(p / 2, 1), p), Mode::max},
      {"G13", make_index_set(tail), Mode::max},
      {"G14", make_index_set({1, s}), Mode::max},
      {"G15", join({2}, tail), Mode::max},
      {"G16", join({2, 3}, tail), Mode::max},
      {"G21", range1(p - 1, p), Mode::min},
      {"G22", make_index_set(tail), Mode::min},
      {"G23", range1(1, p), Mode::min},
      {"G24", range1(1, 2), Mode::min},
      {"G25", range1(1, 4), Mode::min},
      {"G26", range1(1, s), Mode::min},
  };
}

bool is_null(const GSet& set, const std::vector<bool>& nonzero) {
  if (set.mode == Mode::max)
    return std::none_of(set.g.begin(), set.g.end(), [&](Index j) { return nonzero.at(j); });
  return std::any_of(set.g.begin(), set.g.end(), [&](Index j) { return !nonzero.at(j); });
}

}  // namespace tosi
