#include <doctest.h>

#include <cmath>
#include <set>

#include "blefp/evalbench.hpp"
#include "blefp/preprocess.hpp"
#include "fixtures.hpp"

using namespace blefp;

TEST_CASE("path loss equals the reference power at the reference distance") {
    const Scenario sc = testing::make_scenario();
    CHECK(path_loss_rss(sc, 100.0) == doctest::Approx(-40.0));
}

TEST_CASE("doubling the distance costs about 6 dB at exponent 2") {
    const Scenario sc = testing::make_scenario();
    const double drop = path_loss_rss(sc, 200.0) - path_loss_rss(sc, 400.0);
    CHECK(drop == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("path loss is clamped below the reference distance scale") {
    const Scenario sc = testing::make_scenario();
    CHECK(path_loss_rss(sc, 0.0) == path_loss_rss(sc, 1.0));
    CHECK(std::isfinite(path_loss_rss(sc, 0.0)));
}

TEST_CASE("synthetic logs are deterministic per (scenario, seed)") {
    const Scenario sc = testing::make_jitter_scenario();
    const auto a = synth_log(sc, 7);
    const auto b = synth_log(sc, 7);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].grid_label == b.records[i].grid_label);
        CHECK(a.records[i].beacon == b.records[i].beacon);
        CHECK(a.records[i].rss == b.records[i].rss);
        CHECK(a.records[i].arrival_time == b.records[i].arrival_time);
    }
    const auto c = synth_log(sc, 8);
    bool any_diff = false;
    for (std::size_t i = 0; i < std::min(a.records.size(), c.records.size()); ++i)
        if (a.records[i].rss != c.records[i].rss) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("synthetic log covers every grid point and beacon") {
    const Scenario sc = testing::make_scenario();
    const auto log = synth_log(sc, 1);
    std::set<std::string> labels;
    std::set<BeaconId> beacons;
    double prev_t = -1;
    for (const auto& r : log.records) {
        labels.insert(r.grid_label);
        beacons.insert(r.beacon);
        if (r.grid_label == log.records.front().grid_label)
            CHECK(r.arrival_time >= prev_t);
    }
    CHECK(labels.size() == 16);
    CHECK(beacons.size() == 8);
    CHECK(log.beacon_names.size() == 8);
    // one visit per grid point, T_d seconds of advertisements at T_a
    const double expected = sc.timing.scan_duration_s / sc.timing.advertising_interval_s;
    const double per_pair =
        static_cast<double>(log.records.size()) / (16.0 * 8.0);
    CHECK(per_pair == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("noise-free synthetic RSS matches the path-loss model") {
    Scenario sc = testing::make_scenario();
    const auto log = synth_log(sc, 3);
    for (const auto& r : log.records) {
        const auto& gp = *std::find_if(sc.grid.begin(), sc.grid.end(),
                                       [&](const GridPoint& g) {
                                           return g.label == r.grid_label;
                                       });
        const auto& bp = sc.beacon_positions[r.beacon];
        const double dx = gp.coord[0] - bp[0];
        const double dy = gp.coord[1] - bp[1];
        const double d = std::sqrt(dx * dx + dy * dy);
        CHECK(r.rss == doctest::Approx(path_loss_rss(sc, d)).epsilon(1e-12));
    }
}

TEST_CASE("drop rate thins the log") {
    Scenario sc = testing::make_scenario();
    const auto full = synth_log(sc, 5);
    sc.drop_rate = 0.5;
    const auto thinned = synth_log(sc, 5);
    const double ratio =
        static_cast<double>(thinned.records.size()) / full.records.size();
    CHECK(ratio == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("jitter shrinks with distance per the profile") {
    const JitterProfile jp = testing::make_jitter_scenario().jitter;
    CHECK(jp.stddev_at(0.0) == doctest::Approx(jp.sigma0_dbm));
    CHECK(jp.stddev_at(30.0) > jp.stddev_at(400.0));
    // 80th percentile of |swing| at 30 cm is near 16 dBm, under 10 at 4 m
    CHECK(1.2816 * jp.stddev_at(30.0) == doctest::Approx(16.0).epsilon(0.01));
    CHECK(1.2816 * jp.stddev_at(400.0) < 10.0);
}

TEST_CASE("jittered logs show larger sample variance near beacons") {
    const Scenario sc = testing::make_jitter_scenario();
    const auto db = build_database(synth_log(sc, 11), 1, sc.timing);
    // grid g00 at (0,0): beacon 0 sits 89 cm away, beacon 7 over 10 m away
    const auto* fp = db.find("g00");
    REQUIRE(fp != nullptr);
    CHECK(fp->variances.at(0) > fp->variances.at(7));
}

TEST_CASE("error_of is the Euclidean distance to the truth") {
    Estimate est;
    est.coord = {3.0, 4.0};
    CHECK(error_of(est, {"p", {0.0, 0.0}}) == doctest::Approx(5.0));
}

TEST_CASE("error_cdf is sorted, monotone and ends at 1") {
    const auto cdf = error_cdf({30, 10, 20, 20, 40});
    REQUIRE(cdf.size() == 5);
    CHECK(cdf.front().first == doctest::Approx(10.0));
    CHECK(cdf.back().first == doctest::Approx(40.0));
    CHECK(cdf.back().second == doctest::Approx(1.0));
    for (std::size_t i = 1; i < cdf.size(); ++i) {
        CHECK(cdf[i].first >= cdf[i - 1].first);
        CHECK(cdf[i].second >= cdf[i - 1].second);
    }
    CHECK(cdf[0].second == doctest::Approx(0.2));
}

TEST_CASE("mean of an empty vector is zero, otherwise the average") {
    CHECK(mean({}) == 0.0);
    CHECK(mean({1, 2, 3, 4}) == doctest::Approx(2.5));
}

TEST_CASE("random walks respect the step limit") {
    std::vector<GridPoint> corridor;
    for (int i = 0; i < 10; ++i)
        corridor.push_back({"c" + std::to_string(i), {i * 60.0, 0.0}});
    const auto labels = random_walk_labels(corridor, 200, 60.0, 17);
    REQUIRE(labels.size() == 200);
    auto coord_of = [&](const std::string& l) {
        for (const auto& gp : corridor)
            if (gp.label == l) return gp.coord[0];
        FAIL("unknown label ", l);
        return 0.0;
    };
    for (std::size_t i = 1; i < labels.size(); ++i)
        CHECK(std::abs(coord_of(labels[i]) - coord_of(labels[i - 1])) <= 60.0 + 1e-9);
    CHECK(random_walk_labels(corridor, 200, 60.0, 17) == labels);
}

TEST_CASE("metric comparison scores noise-free observations perfectly") {
    const auto db = testing::make_clean_db();
    std::vector<LabeledObservation> obs;
    for (const auto& fp : db.fingerprints) {
        LabeledObservation lo;
        lo.grid_label = fp.grid.label;
        lo.obs.values = fp.values;
        obs.push_back(lo);
    }
    std::vector<Metric> metrics;
    for (auto kind : all_metric_kinds()) {
        Metric m;
        m.kind = kind;
        m.sigma = 8.0;
        metrics.push_back(m);
    }
    const auto rows =
        run_metric_comparison(db, obs, metrics, 1, WeightScheme::Similarity, false);
    REQUIRE(rows.size() == metrics.size());
    for (const auto& row : rows) {
        CHECK(row.n == obs.size());
        CHECK(row.skipped == 0);
        CHECK(row.mean_error_cm == doctest::Approx(0.0));
    }
}

TEST_CASE("k sweep covers the requested range with per-sample errors") {
    const auto db = testing::make_clean_db();
    Scenario sc = testing::make_scenario();
    sc.jitter = testing::make_jitter_scenario().jitter;
    const auto test_db = build_database(synth_log(sc, 21), 1, sc.timing);
    std::vector<LabeledObservation> obs;
    for (const auto& fp : test_db.fingerprints) {
        LabeledObservation lo;
        lo.grid_label = fp.grid.label;
        lo.obs.values = fp.values;
        obs.push_back(lo);
    }
    Metric m;
    m.kind = MetricKind::GaussianKernel;
    m.sigma = 8.0;
    const auto rows =
        run_k_sweep(db, obs, m, {1, 3, 5, 7}, WeightScheme::Similarity, false);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.per_sample_errors.size() == obs.size());
        CHECK(row.mean_error_cm ==
              doctest::Approx(mean(row.per_sample_errors)).epsilon(1e-12));
    }
}

TEST_CASE("replay_path pairs each step with its truth") {
    const auto db = testing::make_clean_db();
    std::vector<LabeledObservation> path;
    for (const auto& label : {"g00", "g01", "g11"}) {
        const auto* fp = db.find(label);
        REQUIRE(fp != nullptr);
        LabeledObservation lo;
        lo.grid_label = label;
        lo.obs.values = fp->values;
        path.push_back(lo);
    }
    Metric m;
    m.kind = MetricKind::Cosine;
    const auto steps = replay_path(db, path, m, 1, WeightScheme::Uniform, false);
    REQUIRE(steps.size() == 3);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        CHECK(steps[i].truth == db.find(path[i].grid_label)->grid.coord);
        CHECK(error_of(steps[i].est, {"", steps[i].truth}) == doctest::Approx(0.0));
    }
}
