#pragma once

// Shared synthetic world used across the test suites: a 4x4 grid on 300 cm
// spacing with 8 irregularly placed beacons. The geometry is chosen so that
// no two grid points share an RSS rank order or a collinear RSS vector,
// which keeps every metric's self-match unique.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "blefp/evalbench.hpp"
#include "blefp/preprocess.hpp"

namespace blefp::testing {

inline Scenario make_scenario() {
    Scenario sc;
    sc.beacon_positions = {{37, 81},   {410, 133}, {790, 55},  {260, 320},
                           {655, 410}, {95, 615},  {480, 700}, {810, 640}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            GridPoint gp;
            gp.label = "g" + std::to_string(i) + std::to_string(j);
            gp.coord = {i * 300.0, j * 300.0};
            sc.grid.push_back(gp);
        }
    sc.path_loss_exponent = 2.0;
    sc.ref_power_dbm = -40.0;
    sc.ref_distance_cm = 100.0;
    sc.timing = {0.1, 10.0};
    return sc;
}

/// Denser 6x6 grid carrying hand jitter: close beacons swing hard (80th
/// percentile ~16 dBm at 30 cm) while beacons beyond a few metres stay
/// nearly stable, so per-grid-point variance flags the unreliable ones.
inline Scenario make_jitter_scenario() {
    Scenario sc = make_scenario();
    const double spacing = 150.0;
    const double span = spacing * 5.0;
    sc.grid.clear();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            GridPoint gp;
            gp.label = "g" + std::to_string(i) + std::to_string(j);
            gp.coord = {i * spacing, j * spacing};
            sc.grid.push_back(gp);
        }
    const double pos[8][2] = {{0.05, 0.1},  {0.5, 0.02}, {0.95, 0.12}, {0.1, 0.5},
                              {0.9, 0.55},  {0.07, 0.93}, {0.55, 0.97}, {0.98, 0.9}};
    sc.beacon_positions.clear();
    for (const auto& p : pos) sc.beacon_positions.push_back({p[0] * span, p[1] * span});
    sc.jitter.half_cm = 100.0;
    sc.jitter.falloff = 2.0;
    sc.jitter.period_s = 1.0;
    // anchor: 80th percentile of |swing| at 30 cm is 16 dBm (z = 1.2816)
    sc.jitter.sigma0_dbm =
        (16.0 / 1.2816) * std::pow(1.0 + 30.0 / sc.jitter.half_cm, 2.0);
    return sc;
}

inline FingerprintDatabase make_clean_db(int window = 10) {
    const Scenario sc = make_scenario();
    return build_database(synth_log(sc, 1), window, sc.timing);
}

/// RAII temp directory for file-based tests.
class TempDir {
  public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto p = base / ("blefp_test_" + std::to_string(::getpid()) + "_" +
                             std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(p, ec)) {
                path_ = p;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::filesystem::path path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

inline std::string write_file(const TempDir& dir, const std::string& name,
                              const std::string& content) {
    const std::string p = dir.file(name);
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

}  // namespace blefp::testing
