#pragma once

#include <string>
#include <vector>

#include "blefp/types.hpp"

namespace blefp {

/// Column mapping for raw scan logs. Loaded from a JSON schema file because
/// header names differ between exports.
struct CsvSchema {
    std::string grid_label;  // column holding the grid-point label
    std::string beacon;      // beacon id / name column
    std::string rss;         // RSS column, dBm
    std::string time;        // arrival-time column, seconds

    // Grid coordinates: either two dedicated columns, or parsed out of the
    // label with a delimiter (e.g. label "120_340" with delim "_").
    std::string grid_x;
    std::string grid_y;
    std::string label_coord_delim;

    // Epoch timestamps are rebased so each file starts at t = 0.
    bool time_absolute = false;

    // Optional fixed beacon universe. When set, a beacon name outside this
    // list is a parse error; otherwise ids are assigned on first sight.
    std::vector<std::string> beacons;
};

CsvSchema load_schema(const std::string& path);

struct RawLog {
    std::vector<RssRecord> records;
    std::vector<std::string> beacon_names;  // BeaconId -> name
    std::map<std::string, std::array<double, 2>> coords;  // label -> (x, y) cm
    std::string device_label;
    int data_type = 0;  // 1 = on the floor, 2 = in the hand, 0 = unknown
};

RawLog parse_csv(const std::string& path, const CsvSchema& schema);

/// Observation paired with the grid label of the visit it was cut from,
/// which the evaluation harness uses as ground truth.
struct LabeledObservation {
    std::string grid_label;
    Observation obs;
};

/// Scan forward through each grid-point visit, keeping the latest RSS per
/// beacon; emit an observation whenever every beacon in `universe` has been
/// seen since the last emission, then restart accumulation.
std::vector<LabeledObservation> consolidate_protocol1(
    const RawLog& log, const std::vector<BeaconId>& universe);

/// Cut each visit into consecutive 1 s windows of elapsed arrival time.
/// Duplicate samples of a beacon inside one window are averaged. A trailing
/// partial window is emitted if non-empty; empty windows are skipped.
std::vector<LabeledObservation> consolidate_protocol2(const RawLog& log);

}  // namespace blefp
