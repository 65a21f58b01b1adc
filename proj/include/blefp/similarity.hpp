#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "blefp/types.hpp"

namespace blefp {

enum class MetricKind {
    Cosine,
    InvNormEuclidean,
    InvNormCityblock,
    Chebyshev,
    Correlation,
    Minkowski,
    Spearman,
    GaussianKernel,
    ExpKernel,
    InverseKernel,
};

struct Metric {
    MetricKind kind = MetricKind::GaussianKernel;
    double sigma = 8.0;  // Gaussian width, dBm
    double p = 3.0;      // Minkowski order, >= 1
    double rate = 1.0;   // exp-kernel rate (named gamma_k to keep it apart
                         // from the selection threshold)
    MetricKind base = MetricKind::InvNormEuclidean;  // distance under Exp/Inverse kernels
};

/// Parse "cosine", "euclidean", "cityblock", "chebyshev", "correlation",
/// "minkowski", "spearman", "kernel" (Gaussian). Throws Error on unknown.
Metric parse_metric(const std::string& name);
std::string metric_name(MetricKind kind);

/// All implemented metric kinds, in the order reports list them.
const std::vector<MetricKind>& all_metric_kinds();

struct AlignOptions {
    // Default: compare over the key-set intersection. With impute_floor the
    // union is used and missing beacons are filled with floor_rss.
    bool impute_floor = false;
    double floor_rss = -100.0;  // dBm
};

/// Project two sparse vectors onto equal-length dense vectors, ascending
/// beacon id. Throws NoCommonBeacons when the intersection is empty.
std::pair<std::vector<double>, std::vector<double>> align(
    const RssMap& f, const RssMap& o, const AlignOptions& opts = {});

double beta_cosine(const std::vector<double>& f, const std::vector<double>& o);
double beta_inv_euclidean(const std::vector<double>& f, const std::vector<double>& o);
double beta_inv_cityblock(const std::vector<double>& f, const std::vector<double>& o);

/// Baseline metrics: Chebyshev and Minkowski follow the same
/// unit-normalize, subtract-from-one pattern as the Euclidean and Cityblock
/// forms; Correlation and Spearman are the (rank) correlation coefficient.
/// All outputs clamp to [0, 1].
double beta_baseline(MetricKind kind, const std::vector<double>& f,
                     const std::vector<double>& o, double minkowski_p = 3.0);

double beta_gaussian(const std::vector<double>& f, const std::vector<double>& o,
                     double sigma);

/// Unnormalized distance for the norm-based kinds (Euclidean, Cityblock,
/// Chebyshev, Minkowski). Also the distance base under Exp/Inverse kernels.
double raw_distance(MetricKind kind, const std::vector<double>& f,
                    const std::vector<double>& o, double minkowski_p = 3.0);

/// Distance-to-kernel conversions.
double kernel_from_distance_exp(double distance, double rate);
double kernel_from_distance_inverse(double distance, double max_distance);

using KernelFn = std::function<double(const std::vector<double>&,
                                      const std::vector<double>&)>;

/// kappa(f, o) / sqrt(kappa(f, f) * kappa(o, o)). Throws InvariantViolation
/// when a self-kernel value is not positive.
double normalized_kernel_similarity(const KernelFn& kernel,
                                    const std::vector<double>& f,
                                    const std::vector<double>& o);

/// Aligns, dispatches on the metric and clamps the result to [0, 1].
/// InverseKernel needs the candidate set's maximum distance and is only
/// available through the estimator's batch scoring.
double similarity(const Metric& metric, const RssMap& f, const RssMap& o,
                  const AlignOptions& opts = {});

}  // namespace blefp
