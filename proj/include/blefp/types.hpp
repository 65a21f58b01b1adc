#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blefp {

/// Index into the deployed beacon set. Ids are assigned by the log parser
/// and are stable for a given input file.
using BeaconId = int;

/// Sparse RSS vector keyed by beacon id. std::map keeps keys ordered so
/// every iteration over a vector is deterministic.
using RssMap = std::map<BeaconId, double>;

struct Timing {
    double advertising_interval_s = 0.1;  // T_a
    double scan_duration_s = 30.0;        // T_d
};

struct GridPoint {
    std::string label;
    std::array<double, 2> coord{0.0, 0.0};  // (x, y) in cm
};

/// One logged BLE advertisement.
struct RssRecord {
    std::string grid_label;
    BeaconId beacon = 0;
    double rss = 0.0;           // dBm
    double arrival_time = 0.0;  // seconds, monotone within a session
};

/// Time-ordered RSS samples from a single beacon.
struct RssSeries {
    BeaconId beacon = 0;
    std::vector<std::pair<double, double>> samples;  // (arrival_time, rss)
};

struct Fingerprint {
    GridPoint grid;
    RssMap values;                   // time-averaged RSS, dBm
    RssMap variances;                // per-beacon sample variance, dBm^2
    std::map<BeaconId, int> counts;  // samples seen per beacon
};

/// Online RSS vector. May cover fewer beacons than the database.
struct Observation {
    RssMap values;
    double window_start = 0.0;
    double window_end = 0.0;
};

/// Per-grid-point set of selected beacon ids, ascending.
struct SelectionSet {
    std::string grid_label;
    std::vector<BeaconId> beacons;
};

struct SelectionConfig {
    int s = 10;          // number of selected beacons
    double eta = 0.2;    // tolerated signal-loss rate, [0, 1)
    Timing timing;
};

struct FingerprintDatabase {
    std::vector<Fingerprint> fingerprints;
    int n_beacons = 0;
    Timing timing;
    std::vector<std::string> beacon_names;  // id -> name from the source log
    std::map<std::string, SelectionSet> selection;  // keyed by grid label
    std::optional<SelectionConfig> selection_config;
    std::optional<double> kernel_sigma;  // persisted Gaussian width, dBm

    const Fingerprint* find(const std::string& label) const {
        for (const auto& fp : fingerprints)
            if (fp.grid.label == label) return &fp;
        return nullptr;
    }
};

struct Neighbor {
    std::string grid_label;
    double score = 0.0;
    double weight = 0.0;
};

struct Estimate {
    std::array<double, 2> coord{0.0, 0.0};  // cm
    std::vector<Neighbor> neighbors;
};

// Error hierarchy. The CLI maps these onto its exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(std::size_t row_, const std::string& what_)
        : Error("row " + std::to_string(row_) + ": " + what_), row(row_) {}
    std::size_t row;
};

struct NoCommonBeacons : Error {
    NoCommonBeacons() : Error("no common beacons between vectors") {}
};

struct InfeasibleSelection : Error {
    InfeasibleSelection(const std::string& grid_label_, int eligible_, int wanted_)
        : Error("grid " + grid_label_ + ": only " + std::to_string(eligible_) +
                " beacons meet the count threshold, need " + std::to_string(wanted_)),
          grid_label(grid_label_), eligible(eligible_), wanted(wanted_) {}
    std::string grid_label;
    int eligible;
    int wanted;
};

struct InvariantViolation : Error {
    using Error::Error;
};

}  // namespace blefp
