#pragma once

#include "tosi/core/tosi.hpp"
#include "tosi/harness/simulate.hpp"
#include "tosi/harness/tuning_experiment.hpp"
#include "tosi/tuning/tuning.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tosi::cli {

using Json = nlohmann::ordered_json;

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t v);

/// Indices are written 1-based.
Json index_set_json(const IndexSet& g);

/// `names` (optional) maps a 0-based parameter index to a column name.
Json test_result_json(const TestResult& r, const std::vector<std::string>& names);
Json multi_split_json(const MultiSplitResult& r, const std::vector<std::string>& names);

Json tuning_outcome_json(const TuningOutcome& o);

Json sim_table_json(const SimTable& t);
Json qq_json(const SimTable& t);
Json tuning_experiment_json(const TuningExperimentResult& r);

}  // namespace tosi::cli
