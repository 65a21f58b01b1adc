#include "blefp/evalbench.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "blefp/beacon_select.hpp"

namespace blefp {

namespace {

// Hand-rolled draws so logs are bit-identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double path_loss_rss(const Scenario& sc, double distance_cm) {
    const double d = std::max(distance_cm, 1.0);
    return sc.ref_power_dbm -
           10.0 * sc.path_loss_exponent * std::log10(d / sc.ref_distance_cm);
}

RawLog synth_log(const Scenario& sc, std::uint64_t seed) {
    if (sc.path_loss_exponent <= 0) throw Error("path-loss exponent must be positive");
    if (sc.ref_distance_cm <= 0) throw Error("reference distance must be positive");

    RawLog log;
    for (std::size_t b = 0; b < sc.beacon_positions.size(); ++b)
        log.beacon_names.push_back("B" + std::to_string(b));

    const double ta = sc.timing.advertising_interval_s;
    const double td = sc.timing.scan_duration_s;
    for (std::size_t g = 0; g < sc.grid.size(); ++g) {
        const GridPoint& gp = sc.grid[g];
        log.coords[gp.label] = gp.coord;
        const double visit_start = static_cast<double>(g) * td;

        std::vector<RssRecord> visit;
        for (std::size_t b = 0; b < sc.beacon_positions.size(); ++b) {
            std::mt19937_64 rng(mix(seed, mix(g, b)));
            const double dx = gp.coord[0] - sc.beacon_positions[b][0];
            const double dy = gp.coord[1] - sc.beacon_positions[b][1];
            const double dist = std::sqrt(dx * dx + dy * dy);
            const double base = path_loss_rss(sc, dist);
            const double jitter_std = sc.jitter.stddev_at(dist);

            // separate stream for the slow jitter process so its draws do not
            // depend on how many advertisements fall into a period
            std::mt19937_64 jitter_rng(mix(mix(seed, 0x4a17u), mix(g, b)));
            long jitter_period = -1;
            double jitter_offset = 0.0;

            const double phase = uniform01(rng) * ta;
            for (double t = phase; t < td; t += ta) {
                const double drop_draw = uniform01(rng);
                const double shadow = sc.shadowing_std_dbm > 0
                                          ? sc.shadowing_std_dbm * gaussian(rng)
                                          : 0.0;
                double jitter = 0.0;
                if (jitter_std > 0) {
                    if (sc.jitter.period_s > 0) {
                        const long period = static_cast<long>(t / sc.jitter.period_s);
                        if (period != jitter_period) {
                            jitter_period = period;
                            jitter_offset = jitter_std * gaussian(jitter_rng);
                        }
                        jitter = jitter_offset;
                    } else {
                        jitter = jitter_std * gaussian(rng);
                    }
                }
                if (drop_draw < sc.drop_rate) continue;
                RssRecord rec;
                rec.grid_label = gp.label;
                rec.beacon = static_cast<BeaconId>(b);
                rec.rss = base + shadow + jitter;
                rec.arrival_time = visit_start + t;
                visit.push_back(rec);
            }
        }
        std::stable_sort(visit.begin(), visit.end(),
                         [](const RssRecord& a, const RssRecord& b) {
                             if (a.arrival_time != b.arrival_time)
                                 return a.arrival_time < b.arrival_time;
                             return a.beacon < b.beacon;
                         });
        log.records.insert(log.records.end(), visit.begin(), visit.end());
    }
    return log;
}

double error_of(const Estimate& est, const GridPoint& truth) {
    const double dx = est.coord[0] - truth.coord[0];
    const double dy = est.coord[1] - truth.coord[1];
    return std::sqrt(dx * dx + dy * dy);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

namespace {

const GridPoint& truth_of(const FingerprintDatabase& db, const std::string& label) {
    const Fingerprint* fp = db.find(label);
    if (!fp) throw Error("observation labeled with unknown grid '" + label + "'");
    return fp->grid;
}

}  // namespace

std::vector<MetricRow> run_metric_comparison(const FingerprintDatabase& db,
                                             const std::vector<LabeledObservation>& obs,
                                             const std::vector<Metric>& metrics,
                                             int k, WeightScheme scheme,
                                             bool use_selection) {
    std::vector<MetricRow> rows;
    for (const auto& metric : metrics) {
        MetricRow row;
        row.metric = metric.kind;
        std::vector<double> errors;
        for (const auto& lo : obs) {
            try {
                const Estimate est = estimate(db, lo.obs, metric, k, scheme, use_selection);
                errors.push_back(error_of(est, truth_of(db, lo.grid_label)));
            } catch (const NoCommonBeacons&) {
                ++row.skipped;
            }
        }
        row.mean_error_cm = mean(errors);
        row.n = errors.size();
        rows.push_back(row);
    }
    return rows;
}

std::vector<KRow> run_k_sweep(const FingerprintDatabase& db,
                              const std::vector<LabeledObservation>& obs,
                              const Metric& metric, const std::vector<int>& k_range,
                              WeightScheme scheme, bool use_selection) {
    std::vector<KRow> rows;
    for (int k : k_range) {
        KRow row;
        row.k = k;
        for (const auto& lo : obs) {
            try {
                const Estimate est = estimate(db, lo.obs, metric, k, scheme, use_selection);
                row.per_sample_errors.push_back(error_of(est, truth_of(db, lo.grid_label)));
            } catch (const NoCommonBeacons&) {
            }
        }
        row.mean_error_cm = mean(row.per_sample_errors);
        rows.push_back(row);
    }
    return rows;
}

std::vector<PathStep> replay_path(const FingerprintDatabase& db,
                                  const std::vector<LabeledObservation>& path_obs,
                                  const Metric& metric, int k, WeightScheme scheme,
                                  bool use_selection) {
    std::vector<PathStep> steps;
    for (const auto& lo : path_obs) {
        PathStep step;
        step.truth = truth_of(db, lo.grid_label).coord;
        step.est = estimate(db, lo.obs, metric, k, scheme, use_selection);
        steps.push_back(std::move(step));
    }
    return steps;
}

std::vector<std::string> random_walk_labels(const std::vector<GridPoint>& corridor,
                                            std::size_t n_steps, double max_step_cm,
                                            std::uint64_t seed) {
    if (corridor.empty()) throw Error("random walk needs a non-empty corridor");
    std::mt19937_64 rng(seed);
    std::size_t pos = 0;
    std::vector<std::string> labels{corridor[pos].label};
    auto step_len = [&](std::size_t a, std::size_t b) {
        const double dx = corridor[a].coord[0] - corridor[b].coord[0];
        const double dy = corridor[a].coord[1] - corridor[b].coord[1];
        return std::sqrt(dx * dx + dy * dy);
    };
    for (std::size_t i = 1; i < n_steps; ++i) {
        // stay, left, or right; a move is discarded when it would exceed the
        // maximum single-step walking length
        const std::uint64_t r = rng() % 3;
        std::size_t next = pos;
        if (r == 1 && pos > 0) next = pos - 1;
        else if (r == 2 && pos + 1 < corridor.size()) next = pos + 1;
        if (next != pos && step_len(pos, next) > max_step_cm) next = pos;
        pos = next;
        labels.push_back(corridor[pos].label);
    }
    return labels;
}

std::vector<std::pair<double, double>> error_cdf(std::vector<double> errors) {
    std::sort(errors.begin(), errors.end());
    std::vector<std::pair<double, double>> cdf;
    const double n = static_cast<double>(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i)
        cdf.emplace_back(errors[i], static_cast<double>(i + 1) / n);
    return cdf;
}

}  // namespace blefp
