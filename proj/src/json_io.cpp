#include "blefp/json_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace blefp {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kDbVersion = 1;

ordered_json rss_map_to_json(const RssMap& m) {
    ordered_json j = ordered_json::object();
    for (const auto& [b, v] : m) j[std::to_string(b)] = v;
    return j;
}

RssMap rss_map_from_json(const ordered_json& j) {
    RssMap m;
    for (const auto& [k, v] : j.items()) m[std::stoi(k)] = v.get<double>();
    return m;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    return in;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void save_database(const FingerprintDatabase& db, const std::string& path) {
    ordered_json j;
    j["format"] = "blefp-db";
    j["version"] = kDbVersion;
    j["n_beacons"] = db.n_beacons;
    j["timing"] = {{"ta", db.timing.advertising_interval_s},
                   {"td", db.timing.scan_duration_s}};
    j["beacon_names"] = db.beacon_names;
    if (db.kernel_sigma) j["kernel_sigma"] = *db.kernel_sigma;
    auto fps = ordered_json::array();
    for (const auto& fp : db.fingerprints) {
        ordered_json f;
        f["label"] = fp.grid.label;
        f["coord"] = {fp.grid.coord[0], fp.grid.coord[1]};
        f["values"] = rss_map_to_json(fp.values);
        f["variances"] = rss_map_to_json(fp.variances);
        ordered_json counts = ordered_json::object();
        for (const auto& [b, c] : fp.counts) counts[std::to_string(b)] = c;
        f["counts"] = counts;
        fps.push_back(std::move(f));
    }
    j["fingerprints"] = std::move(fps);
    if (db.selection_config) {
        ordered_json sel;
        sel["config"] = {{"s", db.selection_config->s},
                         {"eta", db.selection_config->eta},
                         {"ta", db.selection_config->timing.advertising_interval_s},
                         {"td", db.selection_config->timing.scan_duration_s}};
        ordered_json sets = ordered_json::object();
        for (const auto& [label, set] : db.selection) sets[label] = set.beacons;
        sel["sets"] = std::move(sets);
        j["selection"] = std::move(sel);
    }
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

FingerprintDatabase load_database(const std::string& path) {
    auto in = open_in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": " + e.what());
    }
    if (j.value("format", "") != "blefp-db")
        throw Error(path + ": not a fingerprint database file");
    if (j.value("version", 0) != kDbVersion)
        throw Error(path + ": unsupported database version");

    FingerprintDatabase db;
    db.n_beacons = j.at("n_beacons").get<int>();
    db.timing.advertising_interval_s = j.at("timing").at("ta").get<double>();
    db.timing.scan_duration_s = j.at("timing").at("td").get<double>();
    db.beacon_names = j.at("beacon_names").get<std::vector<std::string>>();
    if (j.contains("kernel_sigma")) db.kernel_sigma = j.at("kernel_sigma").get<double>();
    for (const auto& f : j.at("fingerprints")) {
        Fingerprint fp;
        fp.grid.label = f.at("label").get<std::string>();
        fp.grid.coord = {f.at("coord")[0].get<double>(), f.at("coord")[1].get<double>()};
        fp.values = rss_map_from_json(f.at("values"));
        fp.variances = rss_map_from_json(f.at("variances"));
        for (const auto& [k, v] : f.at("counts").items())
            fp.counts[std::stoi(k)] = v.get<int>();
        db.fingerprints.push_back(std::move(fp));
    }
    if (j.contains("selection")) {
        const auto& sel = j.at("selection");
        SelectionConfig cfg;
        cfg.s = sel.at("config").at("s").get<int>();
        cfg.eta = sel.at("config").at("eta").get<double>();
        cfg.timing.advertising_interval_s = sel.at("config").at("ta").get<double>();
        cfg.timing.scan_duration_s = sel.at("config").at("td").get<double>();
        db.selection_config = cfg;
        for (const auto& [label, ids] : sel.at("sets").items()) {
            SelectionSet set;
            set.grid_label = label;
            set.beacons = ids.get<std::vector<BeaconId>>();
            db.selection[label] = std::move(set);
        }
    }
    return db;
}

Scenario load_scenario(const std::string& path) {
    auto in = open_in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": " + e.what());
    }
    Scenario sc;
    for (const auto& p : j.at("beacon_positions"))
        sc.beacon_positions.push_back({p[0].get<double>(), p[1].get<double>()});
    for (const auto& g : j.at("grid")) {
        GridPoint gp;
        gp.label = g.at("label").get<std::string>();
        gp.coord = {g.at("coord")[0].get<double>(), g.at("coord")[1].get<double>()};
        sc.grid.push_back(std::move(gp));
    }
    sc.path_loss_exponent = j.value("path_loss_exponent", sc.path_loss_exponent);
    sc.ref_power_dbm = j.value("ref_power_dbm", sc.ref_power_dbm);
    sc.ref_distance_cm = j.value("ref_distance_cm", sc.ref_distance_cm);
    sc.shadowing_std_dbm = j.value("shadowing_std_dbm", sc.shadowing_std_dbm);
    sc.drop_rate = j.value("drop_rate", sc.drop_rate);
    if (j.contains("timing")) {
        sc.timing.advertising_interval_s = j.at("timing").at("ta").get<double>();
        sc.timing.scan_duration_s = j.at("timing").at("td").get<double>();
    }
    if (j.contains("jitter")) {
        sc.jitter.sigma0_dbm = j.at("jitter").at("sigma0_dbm").get<double>();
        sc.jitter.half_cm = j.at("jitter").at("half_cm").get<double>();
        sc.jitter.period_s = j.at("jitter").value("period_s", 1.0);
        sc.jitter.falloff = j.at("jitter").value("falloff", 1.0);
    }
    return sc;
}

void save_scenario(const Scenario& sc, const std::string& path) {
    ordered_json j;
    auto positions = ordered_json::array();
    for (const auto& p : sc.beacon_positions) positions.push_back({p[0], p[1]});
    j["beacon_positions"] = std::move(positions);
    auto grid = ordered_json::array();
    for (const auto& g : sc.grid)
        grid.push_back({{"label", g.label}, {"coord", {g.coord[0], g.coord[1]}}});
    j["grid"] = std::move(grid);
    j["path_loss_exponent"] = sc.path_loss_exponent;
    j["ref_power_dbm"] = sc.ref_power_dbm;
    j["ref_distance_cm"] = sc.ref_distance_cm;
    j["shadowing_std_dbm"] = sc.shadowing_std_dbm;
    j["drop_rate"] = sc.drop_rate;
    j["timing"] = {{"ta", sc.timing.advertising_interval_s},
                   {"td", sc.timing.scan_duration_s}};
    j["jitter"] = {{"sigma0_dbm", sc.jitter.sigma0_dbm},
                   {"half_cm", sc.jitter.half_cm},
                   {"period_s", sc.jitter.period_s},
                   {"falloff", sc.jitter.falloff}};
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void save_observations_jsonl(const std::vector<LabeledObservation>& obs,
                             const std::string& path) {
    auto out = open_out(path);
    for (const auto& lo : obs) {
        ordered_json j;
        j["grid_label"] = lo.grid_label;
        j["window"] = {lo.obs.window_start, lo.obs.window_end};
        j["values"] = rss_map_to_json(lo.obs.values);
        out << j.dump() << "\n";
    }
}

void save_raw_log_csv(const RawLog& log, const std::string& path) {
    auto out = open_out(path);
    out << "grid,x,y,beacon,rss,time\n";
    for (const auto& rec : log.records) {
        std::array<double, 2> coord{0.0, 0.0};
        if (auto it = log.coords.find(rec.grid_label); it != log.coords.end())
            coord = it->second;
        out << rec.grid_label << ',' << fmt(coord[0]) << ',' << fmt(coord[1]) << ','
            << log.beacon_names[rec.beacon] << ',' << fmt(rec.rss) << ','
            << fmt(rec.arrival_time) << "\n";
    }
}

void save_builtin_schema(const std::string& path) {
    ordered_json j;
    j["grid_label"] = "grid";
    j["beacon"] = "beacon";
    j["rss"] = "rss";
    j["time"] = "time";
    j["grid_x"] = "x";
    j["grid_y"] = "y";
    j["time_absolute"] = false;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace blefp
