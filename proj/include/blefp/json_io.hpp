#pragma once

#include <string>
#include <vector>

#include "blefp/evalbench.hpp"
#include "blefp/ingest.hpp"
#include "blefp/types.hpp"

namespace blefp {

// Database files are versioned JSON with deterministic field ordering so
// identical inputs always produce identical bytes.
void save_database(const FingerprintDatabase& db, const std::string& path);
FingerprintDatabase load_database(const std::string& path);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

/// One JSON object per line: {"grid_label":..., "values":{...}, ...}
void save_observations_jsonl(const std::vector<LabeledObservation>& obs,
                             const std::string& path);

void save_raw_log_csv(const RawLog& log, const std::string& path);
/// Schema matching save_raw_log_csv output, for feeding logs back in.
void save_builtin_schema(const std::string& path);

}  // namespace blefp
