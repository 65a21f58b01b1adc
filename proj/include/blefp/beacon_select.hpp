#pragma once

#include "blefp/types.hpp"

namespace blefp {

/// Minimum number of received signals a beacon must have contributed during
/// the scan to stay eligible: gamma = (T_d / T_a) * (1 - eta).
double gamma_threshold(const SelectionConfig& config);

/// The s eligible beacons with the smallest RSS variance. Minimizing the
/// variance sum over fixed-size subsets is exactly picking the s smallest,
/// so no subset search is needed. Ties break by ascending beacon id.
/// Throws InfeasibleSelection when fewer than s beacons are eligible.
SelectionSet select(const Fingerprint& fp, const SelectionConfig& config);

/// Restrict an RSS vector to the selected beacons. Selected beacons absent
/// from the vector stay absent; alignment downstream handles the mismatch.
Observation refine(const RssMap& values, const SelectionSet& sel);

/// Compute and store a selection set for every fingerprint in the database.
void apply_selection(FingerprintDatabase& db, const SelectionConfig& config);

}  // namespace blefp
