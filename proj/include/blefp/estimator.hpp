#pragma once

#include <string>
#include <vector>

#include "blefp/similarity.hpp"
#include "blefp/types.hpp"

namespace blefp {

enum class WeightScheme { Uniform, Similarity };

WeightScheme parse_weight_scheme(const std::string& name);

struct ScoredLabel {
    std::string grid_label;
    double score = 0.0;
};

/// Exhaustive scan over the database. With use_selection, each fingerprint
/// and the observation are refined to that fingerprint's own selection set
/// before scoring. Descending by score, ties by ascending grid label.
/// Fingerprints sharing no beacon with the observation are skipped; if all
/// are skipped, NoCommonBeacons is thrown.
std::vector<ScoredLabel> top_k(const FingerprintDatabase& db, const Observation& o,
                               const Metric& metric, int k, bool use_selection,
                               const AlignOptions& opts = {});

/// Uniform: 1/k each. Similarity: score_i / sum(scores); falls back to
/// uniform when every score is zero.
std::vector<double> neighbor_weights(const std::vector<double>& scores,
                                     WeightScheme scheme);

Estimate estimate(const FingerprintDatabase& db, const Observation& o,
                  const Metric& metric, int k, WeightScheme scheme,
                  bool use_selection, const AlignOptions& opts = {});

struct TrainingSample {
    std::array<double, 2> coord{0.0, 0.0};  // ground truth, cm
    Observation obs;
};

struct SRow {
    int s = 0;
    bool feasible = false;
    double cost = 0.0;           // mean squared positional error, cm^2
    double mean_error_cm = 0.0;  // mean Euclidean error
};

/// For each s, rebuild the selection sets and score every training sample.
/// Infeasible s values (some grid point lacks s eligible beacons) are
/// reported with feasible = false.
std::vector<SRow> validate_s(const std::vector<TrainingSample>& train,
                             const FingerprintDatabase& db, const Metric& metric,
                             int k, WeightScheme scheme,
                             const std::vector<int>& s_range,
                             const SelectionConfig& config);

/// Leave-one-out grid search of the Gaussian width over candidate values;
/// returns the sigma with the lowest mean error on the database itself.
double tune_sigma(const FingerprintDatabase& db, int k, WeightScheme scheme,
                  bool use_selection,
                  const std::vector<double>& candidates = {1, 2, 4, 8, 16, 32});

}  // namespace blefp
