#pragma once

#include <map>

#include "blefp/ingest.hpp"
#include "blefp/types.hpp"

namespace blefp {

/// Trailing (causal) moving average. Each output sample is the mean of the
/// last min(window, position+1) raw samples; timestamps are preserved.
RssSeries moving_average(const RssSeries& series, int window);

/// Time-average the filtered series into one fingerprint entry per beacon,
/// with per-beacon sample variance (population formula) and counts.
Fingerprint build_fingerprint(const std::map<BeaconId, RssSeries>& series_set,
                              const GridPoint& grid, int window);

/// One fingerprint per distinct grid label in the log. Verifies that
/// distinct fingerprints stay below similarity 1 under the correlation
/// metric (the uniqueness requirement on a radio map).
FingerprintDatabase build_database(const RawLog& log, int window, Timing timing);

}  // namespace blefp
