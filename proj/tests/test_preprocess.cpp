#include <doctest.h>

#include <cmath>
#include <random>

#include "blefp/preprocess.hpp"
#include "blefp/similarity.hpp"
#include "fixtures.hpp"

using namespace blefp;

namespace {

RssSeries series_of(const std::vector<double>& values, double dt = 0.1) {
    RssSeries s;
    s.beacon = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s.samples.emplace_back(i * dt, values[i]);
    return s;
}

// Independent oracle: direct trailing-window convolution.
std::vector<double> ma_oracle(const std::vector<double>& x, int w) {
    std::vector<double> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t lo = i + 1 >= static_cast<std::size_t>(w) ? i + 1 - w : 0;
        double sum = 0;
        for (std::size_t j = lo; j <= i; ++j) sum += x[j];
        out.push_back(sum / static_cast<double>(i - lo + 1));
    }
    return out;
}

double population_variance(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m += v;
    m /= x.size();
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / x.size();
}

}  // namespace

TEST_CASE("moving average of a constant series is the constant") {
    const auto out = moving_average(series_of(std::vector<double>(25, -60.0)), 10);
    REQUIRE(out.samples.size() == 25);
    for (const auto& [t, v] : out.samples) CHECK(v == doctest::Approx(-60.0));
}

TEST_CASE("window 1 leaves the series unchanged") {
    const auto in = series_of({-60, -72, -55, -80});
    const auto out = moving_average(in, 1);
    REQUIRE(out.samples == in.samples);
}

TEST_CASE("moving average flattens a single outlier") {
    std::vector<double> x(9, -60.0);
    x.push_back(-90.0);
    x.insert(x.end(), 9, -60.0);
    const auto out = moving_average(series_of(x), 10);
    const auto expect = ma_oracle(x, 10);
    double peak_dev = 0;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        CHECK(out.samples[i].second == doctest::Approx(expect[i]).epsilon(1e-12));
        peak_dev = std::max(peak_dev, std::abs(out.samples[i].second + 60.0));
    }
    CHECK(peak_dev <= 3.0 + 1e-12);
}

TEST_CASE("moving average matches the convolution oracle on random data") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x;
        const int n = 1 + static_cast<int>(rng() % 60);
        for (int i = 0; i < n; ++i) x.push_back(-90.0 + static_cast<double>(rng() % 500) / 10.0);
        const int w = 1 + static_cast<int>(rng() % 12);
        const auto out = moving_average(series_of(x), w);
        const auto expect = ma_oracle(x, w);
        REQUIRE(out.samples.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(out.samples[i].second == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("empty series stays empty and bad windows are rejected") {
    CHECK(moving_average(RssSeries{}, 10).samples.empty());
    CHECK_THROWS_AS(moving_average(RssSeries{}, 0), Error);
}

TEST_CASE("fingerprint value is the arithmetic mean with window 1") {
    std::map<BeaconId, RssSeries> set;
    set[0] = series_of({-50, -52, -48});
    const auto fp = build_fingerprint(set, {"p1", {0, 0}}, 1);
    CHECK(fp.values.at(0) == doctest::Approx(-50.0));
    CHECK(fp.counts.at(0) == 3);
}

TEST_CASE("constant series has zero variance") {
    std::map<BeaconId, RssSeries> set;
    set[0] = series_of(std::vector<double>(30, -61.5));
    const auto fp = build_fingerprint(set, {"p1", {0, 0}}, 10);
    CHECK(fp.variances.at(0) == doctest::Approx(0.0));
}

TEST_CASE("beacon with no samples is recorded with count 0 only") {
    std::map<BeaconId, RssSeries> set;
    set[0] = series_of({-50, -52});
    set[1] = RssSeries{1, {}};
    const auto fp = build_fingerprint(set, {"p1", {0, 0}}, 1);
    CHECK(fp.counts.at(1) == 0);
    CHECK(fp.values.count(1) == 0);
    CHECK(fp.variances.count(1) == 0);
}

TEST_CASE("filtering reduces per-beacon variance on noisy series") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> noise(0.0, 6.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x;
        for (int i = 0; i < 100; ++i) x.push_back(-65.0 + noise(rng));
        std::map<BeaconId, RssSeries> set;
        set[0] = series_of(x);
        const auto fp = build_fingerprint(set, {"p", {0, 0}}, 10);
        CHECK(fp.variances.at(0) <= population_variance(x) + 1e-12);
    }
}

TEST_CASE("build_database makes one fingerprint per grid label") {
    RawLog log;
    log.beacon_names = {"B0", "B1"};
    log.coords["p1"] = {0, 0};
    log.coords["p2"] = {100, 0};
    log.records = {
        {"p1", 0, -60, 0.0}, {"p1", 1, -70, 0.1}, {"p1", 0, -62, 0.2},
        {"p2", 0, -55, 1.0}, {"p2", 1, -75, 1.1}, {"p2", 1, -73, 1.2},
    };
    const auto db = build_database(log, 1, {0.1, 30.0});
    REQUIRE(db.fingerprints.size() == 2);
    CHECK(db.n_beacons == 2);
    CHECK(db.find("p1")->values.at(0) == doctest::Approx(-61.0));
    CHECK(db.find("p2")->grid.coord[0] == 100.0);
}

TEST_CASE("distinct synthetic fingerprints stay below correlation 1") {
    const auto db = testing::make_clean_db();
    REQUIRE(db.fingerprints.size() == 16);
    Metric corr;
    corr.kind = MetricKind::Correlation;
    for (std::size_t i = 0; i < db.fingerprints.size(); ++i)
        for (std::size_t j = i + 1; j < db.fingerprints.size(); ++j)
            CHECK(similarity(corr, db.fingerprints[i].values,
                             db.fingerprints[j].values) < 1.0);
}

TEST_CASE("duplicate labels with conflicting coordinates are rejected upstream") {
    // coords conflicts are caught at parse time; build_database trusts the
    // single coords entry per label in RawLog
    RawLog log;
    log.beacon_names = {"B0"};
    log.coords["p1"] = {0, 0};
    log.records = {{"p1", 0, -60, 0.0}};
    CHECK_NOTHROW(build_database(log, 1, {0.1, 30.0}));
}
