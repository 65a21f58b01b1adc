#include "blefp/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "blefp/similarity.hpp"

namespace blefp {

RssSeries moving_average(const RssSeries& series, int window) {
    if (window < 1) throw Error("moving average window must be >= 1");
    RssSeries out;
    out.beacon = series.beacon;
    out.samples.reserve(series.samples.size());
    double running = 0.0;
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        running += series.samples[i].second;
        if (i >= static_cast<std::size_t>(window))
            running -= series.samples[i - window].second;
        const std::size_t n = std::min<std::size_t>(i + 1, window);
        out.samples.emplace_back(series.samples[i].first, running / n);
    }
    return out;
}

Fingerprint build_fingerprint(const std::map<BeaconId, RssSeries>& series_set,
                              const GridPoint& grid, int window) {
    Fingerprint fp;
    fp.grid = grid;
    for (const auto& [beacon, raw] : series_set) {
        if (raw.samples.empty()) {
            fp.counts[beacon] = 0;  // recorded, but no value/variance entry
            continue;
        }
        const RssSeries filtered = moving_average(raw, window);
        double sum = 0.0;
        for (const auto& [t, rss] : filtered.samples) sum += rss;
        const double n = static_cast<double>(filtered.samples.size());
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& [t, rss] : filtered.samples) ss += (rss - mean) * (rss - mean);
        fp.values[beacon] = mean;
        fp.variances[beacon] = ss / n;  // population variance
        fp.counts[beacon] = static_cast<int>(filtered.samples.size());
    }
    return fp;
}

FingerprintDatabase build_database(const RawLog& log, int window, Timing timing) {
    // Group samples per grid label, preserving arrival order per beacon.
    std::map<std::string, std::map<BeaconId, RssSeries>> by_grid;
    for (const auto& rec : log.records) {
        auto& series = by_grid[rec.grid_label][rec.beacon];
        series.beacon = rec.beacon;
        series.samples.emplace_back(rec.arrival_time, rec.rss);
    }

    FingerprintDatabase db;
    db.timing = timing;
    db.beacon_names = log.beacon_names;
    db.n_beacons = static_cast<int>(log.beacon_names.size());
    for (auto& [label, series_set] : by_grid) {
        for (auto& [beacon, series] : series_set)
            std::stable_sort(series.samples.begin(), series.samples.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
        GridPoint gp;
        gp.label = label;
        if (auto it = log.coords.find(label); it != log.coords.end()) gp.coord = it->second;
        db.fingerprints.push_back(build_fingerprint(series_set, gp, window));
    }

    // Uniqueness check: distinct fingerprints must stay below similarity 1
    // under the correlation metric. Pairs sharing fewer than 3 beacons are
    // skipped: any two 2-d vectors correlate at exactly +/-1.
    Metric corr;
    corr.kind = MetricKind::Correlation;
    for (std::size_t i = 0; i < db.fingerprints.size(); ++i) {
        for (std::size_t j = i + 1; j < db.fingerprints.size(); ++j) {
            std::size_t common = 0;
            for (const auto& [b, v] : db.fingerprints[i].values)
                if (db.fingerprints[j].values.count(b)) ++common;
            if (common < 3) continue;
            double s;
            try {
                s = similarity(corr, db.fingerprints[i].values, db.fingerprints[j].values);
            } catch (const Error&) {
                continue;  // disjoint or degenerate pair, nothing to compare
            }
            if (s >= 1.0)
                throw InvariantViolation("fingerprints '" + db.fingerprints[i].grid.label +
                                         "' and '" + db.fingerprints[j].grid.label +
                                         "' are not distinguishable (correlation 1)");
        }
    }
    return db;
}

}  // namespace blefp
