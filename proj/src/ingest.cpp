#include "blefp/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace blefp {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim = ',') {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        out.push_back(field);
    }
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t row, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        if (!std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(row, "non-numeric " + what + " value '" + s + "'");
    }
}

}  // namespace

CsvSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open schema file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("schema " + path + ": " + e.what());
    }
    CsvSchema s;
    for (const char* key : {"grid_label", "beacon", "rss", "time"})
        if (!j.contains(key)) throw Error("schema " + path + ": missing key '" + key + "'");
    s.grid_label = j.at("grid_label").get<std::string>();
    s.beacon = j.at("beacon").get<std::string>();
    s.rss = j.at("rss").get<std::string>();
    s.time = j.at("time").get<std::string>();
    s.grid_x = j.value("grid_x", "");
    s.grid_y = j.value("grid_y", "");
    s.label_coord_delim = j.value("label_coord_delim", "");
    s.time_absolute = j.value("time_absolute", false);
    if (j.contains("beacons")) s.beacons = j.at("beacons").get<std::vector<std::string>>();
    return s;
}

RawLog parse_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    const auto header = split_line(line);

    auto column = [&](const std::string& name, bool required) -> int {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            if (required) throw Error("column '" + name + "' not found in " + path);
            return -1;
        }
        return static_cast<int>(it - header.begin());
    };
    const int c_label = column(schema.grid_label, true);
    const int c_beacon = column(schema.beacon, true);
    const int c_rss = column(schema.rss, true);
    const int c_time = column(schema.time, true);
    const int c_x = schema.grid_x.empty() ? -1 : column(schema.grid_x, true);
    const int c_y = schema.grid_y.empty() ? -1 : column(schema.grid_y, true);

    RawLog log;
    std::unordered_map<std::string, BeaconId> beacon_ids;
    const bool fixed_universe = !schema.beacons.empty();
    for (std::size_t i = 0; i < schema.beacons.size(); ++i) {
        beacon_ids[schema.beacons[i]] = static_cast<BeaconId>(i);
        log.beacon_names.push_back(schema.beacons[i]);
    }

    bool have_t0 = false;
    double t0 = 0.0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_line(line);
        const int needed = std::max({c_label, c_beacon, c_rss, c_time, c_x, c_y});
        if (static_cast<int>(fields.size()) <= needed)
            throw ParseError(row, "expected at least " + std::to_string(needed + 1) +
                                      " columns, got " + std::to_string(fields.size()));

        RssRecord rec;
        rec.grid_label = fields[c_label];
        rec.rss = parse_number(fields[c_rss], row, "RSS");
        rec.arrival_time = parse_number(fields[c_time], row, "time");
        if (schema.time_absolute) {
            if (!have_t0) { t0 = rec.arrival_time; have_t0 = true; }
            rec.arrival_time -= t0;
        }
        if (rec.arrival_time < 0)
            throw ParseError(row, "negative arrival time");

        const std::string& bname = fields[c_beacon];
        auto it = beacon_ids.find(bname);
        if (it == beacon_ids.end()) {
            if (fixed_universe)
                throw ParseError(row, "unknown beacon id '" + bname + "'");
            BeaconId id = static_cast<BeaconId>(log.beacon_names.size());
            it = beacon_ids.emplace(bname, id).first;
            log.beacon_names.push_back(bname);
        }
        rec.beacon = it->second;

        std::array<double, 2> coord{0.0, 0.0};
        bool have_coord = false;
        if (c_x >= 0 && c_y >= 0) {
            coord[0] = parse_number(fields[c_x], row, "x");
            coord[1] = parse_number(fields[c_y], row, "y");
            have_coord = true;
        } else if (!schema.label_coord_delim.empty()) {
            const auto pos = rec.grid_label.find(schema.label_coord_delim);
            if (pos == std::string::npos)
                throw ParseError(row, "label '" + rec.grid_label +
                                          "' lacks coordinate delimiter");
            coord[0] = parse_number(rec.grid_label.substr(0, pos), row, "label x");
            coord[1] = parse_number(
                rec.grid_label.substr(pos + schema.label_coord_delim.size()), row,
                "label y");
            have_coord = true;
        }
        if (have_coord) {
            auto [cit, inserted] = log.coords.emplace(rec.grid_label, coord);
            if (!inserted && (cit->second[0] != coord[0] || cit->second[1] != coord[1]))
                throw ParseError(row, "grid label '" + rec.grid_label +
                                          "' reappears with different coordinates");
        }
        log.records.push_back(std::move(rec));
    }
    return log;
}

namespace {

// Maximal runs of consecutive records sharing a grid label.
struct Visit {
    std::string label;
    std::size_t begin, end;  // [begin, end) into log.records
};

std::vector<Visit> visits_of(const RawLog& log) {
    std::vector<Visit> visits;
    std::size_t i = 0;
    while (i < log.records.size()) {
        std::size_t j = i + 1;
        while (j < log.records.size() &&
               log.records[j].grid_label == log.records[i].grid_label)
            ++j;
        visits.push_back({log.records[i].grid_label, i, j});
        i = j;
    }
    return visits;
}

}  // namespace

std::vector<LabeledObservation> consolidate_protocol1(
    const RawLog& log, const std::vector<BeaconId>& universe) {
    if (universe.empty()) throw Error("protocol 1 needs a non-empty beacon universe");
    std::vector<LabeledObservation> out;
    for (const auto& v : visits_of(log)) {
        RssMap latest;
        std::size_t seen = 0;
        for (std::size_t i = v.begin; i < v.end; ++i) {
            const auto& rec = log.records[i];
            if (std::find(universe.begin(), universe.end(), rec.beacon) == universe.end())
                continue;
            if (latest.find(rec.beacon) == latest.end()) ++seen;
            latest[rec.beacon] = rec.rss;
            if (seen == universe.size()) {
                Observation obs;
                obs.values = latest;
                obs.window_start = log.records[v.begin].arrival_time;
                obs.window_end = rec.arrival_time;
                out.push_back({v.label, std::move(obs)});
                latest.clear();
                seen = 0;
            }
        }
    }
    return out;
}

std::vector<LabeledObservation> consolidate_protocol2(const RawLog& log) {
    constexpr double kWindow = 1.0;  // seconds
    std::vector<LabeledObservation> out;
    for (const auto& v : visits_of(log)) {
        const double t0 = log.records[v.begin].arrival_time;
        std::size_t i = v.begin;
        while (i < v.end) {
            const long win = static_cast<long>(
                std::floor((log.records[i].arrival_time - t0) / kWindow));
            std::map<BeaconId, std::pair<double, int>> acc;  // sum, count
            std::size_t j = i;
            for (; j < v.end; ++j) {
                const auto& rec = log.records[j];
                if (static_cast<long>(std::floor((rec.arrival_time - t0) / kWindow)) != win)
                    break;
                auto& slot = acc[rec.beacon];
                slot.first += rec.rss;
                slot.second += 1;
            }
            Observation obs;
            obs.window_start = t0 + win * kWindow;
            obs.window_end = obs.window_start + kWindow;
            for (const auto& [b, sc] : acc) obs.values[b] = sc.first / sc.second;
            if (!obs.values.empty()) out.push_back({v.label, std::move(obs)});
            i = j;
        }
    }
    return out;
}

}  // namespace blefp
