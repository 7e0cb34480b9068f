#pragma once

#include "tosi/core/tosi.hpp"

#include <string>
#include <vector>

namespace tosi {

/// A labelled index set together with the test direction it is used with:
/// the G1x family for ToMax, the G2x family for ToMin.
struct GSet {
  std::string label;
  IndexSet g;
  Mode mode = Mode::max;
};

/// The twelve families G11..G16 and G21..G26 for p parameters of which the
/// first s are nonzero, in that order (0-based indices; labels as "G11").
/// Requires 4 <= p and 1 <= s < p. G12 starts at floor(p/2) in 1-based terms.
std::vector<GSet> build_gsets(Index p, Index s);

/// Whether the set's null hypothesis holds given which parameters are
/// nonzero: for ToMax every member is zero, for ToMin at least one is.
bool is_null(const GSet& set, const std::vector<bool>& nonzero);

}  // namespace tosi
