#include "blefp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "blefp/beacon_select.hpp"

namespace blefp {

WeightScheme parse_weight_scheme(const std::string& name) {
    if (name == "uniform") return WeightScheme::Uniform;
    if (name == "similarity") return WeightScheme::Similarity;
    throw Error("unknown weight scheme '" + name + "'");
}

namespace {

// Aligned vectors for one (fingerprint, observation) comparison, after the
// fingerprint's own selection set has been applied to both sides.
bool aligned_pair(const FingerprintDatabase& db, const Fingerprint& fp,
                  const Observation& o, bool use_selection, const AlignOptions& opts,
                  std::vector<double>& vf, std::vector<double>& vo) {
    const RssMap* fv = &fp.values;
    RssMap fv_sel, ov_sel;
    const RssMap* ov = &o.values;
    if (use_selection) {
        auto it = db.selection.find(fp.grid.label);
        if (it == db.selection.end())
            throw Error("no selection set stored for grid '" + fp.grid.label + "'");
        fv_sel = refine(fp.values, it->second).values;
        ov_sel = refine(o.values, it->second).values;
        fv = &fv_sel;
        ov = &ov_sel;
    }
    try {
        auto [a, b] = align(*fv, *ov, opts);
        vf = std::move(a);
        vo = std::move(b);
        return true;
    } catch (const NoCommonBeacons&) {
        return false;
    }
}

}  // namespace

std::vector<ScoredLabel> top_k(const FingerprintDatabase& db, const Observation& o,
                               const Metric& metric, int k, bool use_selection,
                               const AlignOptions& opts) {
    if (k < 1) throw Error("k must be >= 1");

    std::vector<ScoredLabel> scored;
    if (metric.kind == MetricKind::InverseKernel) {
        // Distances first; the kernel is anchored at the candidate maximum.
        std::vector<std::pair<std::string, double>> dists;
        for (const auto& fp : db.fingerprints) {
            std::vector<double> vf, vo;
            if (!aligned_pair(db, fp, o, use_selection, opts, vf, vo)) continue;
            dists.emplace_back(fp.grid.label,
                               raw_distance(metric.base, vf, vo, metric.p));
        }
        double max_d = 0.0;
        for (const auto& [label, d] : dists) max_d = std::max(max_d, d);
        // an exact match (d = 0) must outrank every finite-distance candidate
        double max_score = 1.0;
        for (const auto& [label, d] : dists)
            if (d > 0.0) max_score = std::max(max_score, max_d / d);
        for (const auto& [label, d] : dists)
            scored.push_back({label, d > 0.0 ? max_d / d : 2.0 * max_score});
    } else {
        for (const auto& fp : db.fingerprints) {
            std::vector<double> vf, vo;
            if (!aligned_pair(db, fp, o, use_selection, opts, vf, vo)) continue;
            double s;
            try {
                switch (metric.kind) {
                    case MetricKind::Cosine: s = beta_cosine(vf, vo); break;
                    case MetricKind::InvNormEuclidean: s = beta_inv_euclidean(vf, vo); break;
                    case MetricKind::InvNormCityblock: s = beta_inv_cityblock(vf, vo); break;
                    case MetricKind::GaussianKernel:
                        s = beta_gaussian(vf, vo, metric.sigma);
                        break;
                    case MetricKind::ExpKernel:
                        s = kernel_from_distance_exp(
                            raw_distance(metric.base, vf, vo, metric.p), metric.rate);
                        break;
                    default: s = beta_baseline(metric.kind, vf, vo, metric.p); break;
                }
            } catch (const Error&) {
                continue;  // degenerate pair under this metric
            }
            scored.push_back({fp.grid.label, std::clamp(s, 0.0, 1.0)});
        }
    }
    if (scored.empty()) throw NoCommonBeacons();

    std::sort(scored.begin(), scored.end(), [](const ScoredLabel& a, const ScoredLabel& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.grid_label < b.grid_label;
    });
    if (static_cast<int>(scored.size()) > k) scored.resize(k);
    return scored;
}

std::vector<double> neighbor_weights(const std::vector<double>& scores,
                                     WeightScheme scheme) {
    if (scores.empty()) throw Error("cannot weight an empty neighbor list");
    const std::size_t k = scores.size();
    std::vector<double> w(k, 1.0 / static_cast<double>(k));
    if (scheme == WeightScheme::Similarity) {
        double total = 0.0;
        for (double s : scores) total += s;
        if (total > 0.0) {
            for (std::size_t i = 0; i < k; ++i) w[i] = scores[i] / total;
        } else {
            std::cerr << "warning: all-zero similarity scores, using uniform weights\n";
        }
    }
    return w;
}

Estimate estimate(const FingerprintDatabase& db, const Observation& o,
                  const Metric& metric, int k, WeightScheme scheme,
                  bool use_selection, const AlignOptions& opts) {
    const auto neighbors = top_k(db, o, metric, k, use_selection, opts);
    std::vector<double> scores;
    scores.reserve(neighbors.size());
    for (const auto& n : neighbors) scores.push_back(n.score);
    const auto w = neighbor_weights(scores, scheme);

    Estimate est;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const Fingerprint* fp = db.find(neighbors[i].grid_label);
        if (!fp) throw InvariantViolation("top_k returned an unknown grid label");
        est.coord[0] += w[i] * fp->grid.coord[0];
        est.coord[1] += w[i] * fp->grid.coord[1];
        est.neighbors.push_back({neighbors[i].grid_label, neighbors[i].score, w[i]});
    }
    return est;
}

std::vector<SRow> validate_s(const std::vector<TrainingSample>& train,
                             const FingerprintDatabase& db, const Metric& metric,
                             int k, WeightScheme scheme,
                             const std::vector<int>& s_range,
                             const SelectionConfig& config) {
    std::vector<SRow> rows;
    for (int s : s_range) {
        SRow row;
        row.s = s;
        FingerprintDatabase dbs = db;
        SelectionConfig cfg = config;
        cfg.s = s;
        try {
            apply_selection(dbs, cfg);
        } catch (const InfeasibleSelection&) {
            row.feasible = false;
            rows.push_back(row);
            continue;
        }
        double sq_sum = 0.0, err_sum = 0.0;
        std::size_t n = 0;
        for (const auto& sample : train) {
            Estimate est;
            try {
                est = estimate(dbs, sample.obs, metric, k, scheme, true);
            } catch (const NoCommonBeacons&) {
                continue;
            }
            const double dx = est.coord[0] - sample.coord[0];
            const double dy = est.coord[1] - sample.coord[1];
            sq_sum += dx * dx + dy * dy;
            err_sum += std::sqrt(dx * dx + dy * dy);
            ++n;
        }
        row.feasible = n > 0;
        if (n > 0) {
            row.cost = sq_sum / static_cast<double>(n);
            row.mean_error_cm = err_sum / static_cast<double>(n);
        }
        rows.push_back(row);
    }
    return rows;
}

double tune_sigma(const FingerprintDatabase& db, int k, WeightScheme scheme,
                  bool use_selection, const std::vector<double>& candidates) {
    if (candidates.empty()) throw Error("sigma grid search needs candidates");
    double best_sigma = candidates.front();
    double best_err = std::numeric_limits<double>::infinity();
    for (double sigma : candidates) {
        Metric m;
        m.kind = MetricKind::GaussianKernel;
        m.sigma = sigma;
        double err_sum = 0.0;
        std::size_t n = 0;
        // Leave-one-out over the registered fingerprints.
        for (std::size_t i = 0; i < db.fingerprints.size(); ++i) {
            FingerprintDatabase loo = db;
            loo.fingerprints.erase(loo.fingerprints.begin() + i);
            Observation o;
            o.values = db.fingerprints[i].values;
            Estimate est;
            try {
                est = estimate(loo, o, m, k, scheme, use_selection);
            } catch (const NoCommonBeacons&) {
                continue;
            }
            const double dx = est.coord[0] - db.fingerprints[i].grid.coord[0];
            const double dy = est.coord[1] - db.fingerprints[i].grid.coord[1];
            err_sum += std::sqrt(dx * dx + dy * dy);
            ++n;
        }
        const double mean_err = n > 0 ? err_sum / static_cast<double>(n)
                                      : std::numeric_limits<double>::infinity();
        if (mean_err < best_err) {
            best_err = mean_err;
            best_sigma = sigma;
        }
    }
    return best_sigma;
}

}  // namespace blefp
