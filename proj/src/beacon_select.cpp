#include "blefp/beacon_select.hpp"

#include <algorithm>
#include <iostream>

namespace blefp {

double gamma_threshold(const SelectionConfig& config) {
    if (config.timing.advertising_interval_s <= 0)
        throw Error("advertising interval must be positive");
    return (config.timing.scan_duration_s / config.timing.advertising_interval_s) *
           (1.0 - config.eta);
}

SelectionSet select(const Fingerprint& fp, const SelectionConfig& config) {
    if (config.s < 1) throw Error("selection size s must be >= 1");
    if (config.eta < 0 || config.eta >= 1) throw Error("eta must be in [0, 1)");
    if (config.eta > 0.5)
        std::cerr << "warning: eta " << config.eta
                  << " tolerates losing more than half the expected signals\n";

    const double gamma = gamma_threshold(config);
    std::vector<std::pair<double, BeaconId>> eligible;  // (variance, id)
    for (const auto& [beacon, variance] : fp.variances) {
        auto cit = fp.counts.find(beacon);
        const int count = cit == fp.counts.end() ? 0 : cit->second;
        if (count >= gamma) eligible.emplace_back(variance, beacon);
    }
    if (static_cast<int>(eligible.size()) < config.s)
        throw InfeasibleSelection(fp.grid.label, static_cast<int>(eligible.size()),
                                  config.s);

    // Smallest variance first, ties by ascending beacon id.
    std::sort(eligible.begin(), eligible.end());
    SelectionSet sel;
    sel.grid_label = fp.grid.label;
    for (int i = 0; i < config.s; ++i) sel.beacons.push_back(eligible[i].second);
    std::sort(sel.beacons.begin(), sel.beacons.end());
    return sel;
}

Observation refine(const RssMap& values, const SelectionSet& sel) {
    Observation out;
    for (BeaconId b : sel.beacons)
        if (auto it = values.find(b); it != values.end()) out.values[b] = it->second;
    return out;
}

void apply_selection(FingerprintDatabase& db, const SelectionConfig& config) {
    std::map<std::string, SelectionSet> sets;
    for (const auto& fp : db.fingerprints) sets[fp.grid.label] = select(fp, config);
    db.selection = std::move(sets);
    db.selection_config = config;
}

}  // namespace blefp
