#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "blefp/estimator.hpp"
#include "blefp/ingest.hpp"
#include "blefp/types.hpp"

namespace blefp {

/// Distance-dependent RSS perturbation emulating hand movement and hand
/// occlusion of the line-of-sight path; the closer the beacon, the larger
/// the swing: std(d) = sigma0 / (1 + d / half_cm)^falloff. Hand pose
/// changes on a ~1 s timescale, so the offset is piecewise constant:
/// redrawn every period_s seconds (period_s <= 0 means an independent draw
/// per advertisement).
struct JitterProfile {
    double sigma0_dbm = 0.0;
    double half_cm = 200.0;
    double period_s = 1.0;
    double falloff = 1.0;
    double stddev_at(double distance_cm) const {
        return sigma0_dbm / std::pow(1.0 + distance_cm / half_cm, falloff);
    }
};

/// Log-distance path-loss world for synthetic logs. Test infrastructure
/// only; real datasets come from hardware.
struct Scenario {
    std::vector<std::array<double, 2>> beacon_positions;  // cm
    std::vector<GridPoint> grid;
    double path_loss_exponent = 2.0;
    double ref_power_dbm = -40.0;   // P0 measured at ref_distance
    double ref_distance_cm = 100.0;
    double shadowing_std_dbm = 0.0;
    double drop_rate = 0.0;  // Bernoulli advertisement loss, [0, 1)
    Timing timing{0.1, 10.0};
    JitterProfile jitter;
};

/// Noise-free RSS at distance d under the scenario's path-loss model.
double path_loss_rss(const Scenario& sc, double distance_cm);

/// One visit per grid point, beacons advertising on a T_a lattice with a
/// random phase, Bernoulli drops, shadowing and jitter noise. Byte-identical
/// for equal (scenario, seed).
RawLog synth_log(const Scenario& sc, std::uint64_t seed);

double error_of(const Estimate& est, const GridPoint& truth);

struct MetricRow {
    MetricKind metric;
    double mean_error_cm = 0.0;
    std::size_t n = 0;
    std::size_t skipped = 0;  // observations with no scorable fingerprint
};

std::vector<MetricRow> run_metric_comparison(const FingerprintDatabase& db,
                                             const std::vector<LabeledObservation>& obs,
                                             const std::vector<Metric>& metrics,
                                             int k, WeightScheme scheme,
                                             bool use_selection);

struct KRow {
    int k = 0;
    double mean_error_cm = 0.0;
    std::vector<double> per_sample_errors;  // for CDF construction
};

std::vector<KRow> run_k_sweep(const FingerprintDatabase& db,
                              const std::vector<LabeledObservation>& obs,
                              const Metric& metric, const std::vector<int>& k_range,
                              WeightScheme scheme, bool use_selection);

struct PathStep {
    std::array<double, 2> truth{0.0, 0.0};
    Estimate est;
};

std::vector<PathStep> replay_path(const FingerprintDatabase& db,
                                  const std::vector<LabeledObservation>& path_obs,
                                  const Metric& metric, int k, WeightScheme scheme,
                                  bool use_selection);

/// Random-walk sampler along a corridor of grid labels: stay, or step left
/// or right, never moving farther than max_step_cm in one step. Returns the
/// visited labels.
std::vector<std::string> random_walk_labels(const std::vector<GridPoint>& corridor,
                                            std::size_t n_steps, double max_step_cm,
                                            std::uint64_t seed);

/// Sorted (error_cm, cumulative_fraction) pairs; last fraction is 1.
std::vector<std::pair<double, double>> error_cdf(std::vector<double> errors);

double mean(const std::vector<double>& v);

}  // namespace blefp
