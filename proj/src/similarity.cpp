#include "blefp/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace blefp {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double l2_norm(const std::vector<double>& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss);
}

std::vector<double> unit(const std::vector<double>& v) {
    const double n = l2_norm(v);
    if (n == 0.0) throw Error("zero-norm vector in similarity computation");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
    return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2) throw Error("correlation needs vectors of length >= 2");
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        throw Error("correlation undefined for a constant vector");
    return sab / std::sqrt(saa * sbb);
}

// Average ranks for ties.
std::vector<double> ranks_of(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

Metric parse_metric(const std::string& name) {
    Metric m;
    if (name == "cosine") m.kind = MetricKind::Cosine;
    else if (name == "euclidean") m.kind = MetricKind::InvNormEuclidean;
    else if (name == "cityblock") m.kind = MetricKind::InvNormCityblock;
    else if (name == "chebyshev") m.kind = MetricKind::Chebyshev;
    else if (name == "correlation") m.kind = MetricKind::Correlation;
    else if (name == "minkowski") m.kind = MetricKind::Minkowski;
    else if (name == "spearman") m.kind = MetricKind::Spearman;
    else if (name == "kernel") m.kind = MetricKind::GaussianKernel;
    else if (name == "exp-kernel") m.kind = MetricKind::ExpKernel;
    else if (name == "inverse-kernel") m.kind = MetricKind::InverseKernel;
    else throw Error("unknown metric '" + name + "'");
    return m;
}

std::string metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Cosine: return "cosine";
        case MetricKind::InvNormEuclidean: return "euclidean";
        case MetricKind::InvNormCityblock: return "cityblock";
        case MetricKind::Chebyshev: return "chebyshev";
        case MetricKind::Correlation: return "correlation";
        case MetricKind::Minkowski: return "minkowski";
        case MetricKind::Spearman: return "spearman";
        case MetricKind::GaussianKernel: return "kernel";
        case MetricKind::ExpKernel: return "exp-kernel";
        case MetricKind::InverseKernel: return "inverse-kernel";
    }
    return "?";
}

const std::vector<MetricKind>& all_metric_kinds() {
    static const std::vector<MetricKind> kinds = {
        MetricKind::Chebyshev,      MetricKind::Correlation,
        MetricKind::Cosine,         MetricKind::InvNormEuclidean,
        MetricKind::InvNormCityblock, MetricKind::Minkowski,
        MetricKind::Spearman,       MetricKind::GaussianKernel,
    };
    return kinds;
}

std::pair<std::vector<double>, std::vector<double>> align(const RssMap& f,
                                                          const RssMap& o,
                                                          const AlignOptions& opts) {
    std::vector<double> vf, vo;
    if (opts.impute_floor) {
        auto it_f = f.begin();
        auto it_o = o.begin();
        while (it_f != f.end() || it_o != o.end()) {
            if (it_o == o.end() || (it_f != f.end() && it_f->first < it_o->first)) {
                vf.push_back(it_f->second);
                vo.push_back(opts.floor_rss);
                ++it_f;
            } else if (it_f == f.end() || it_o->first < it_f->first) {
                vf.push_back(opts.floor_rss);
                vo.push_back(it_o->second);
                ++it_o;
            } else {
                vf.push_back(it_f->second);
                vo.push_back(it_o->second);
                ++it_f;
                ++it_o;
            }
        }
    } else {
        for (const auto& [b, rss] : f)
            if (auto it = o.find(b); it != o.end()) {
                vf.push_back(rss);
                vo.push_back(it->second);
            }
    }
    if (vf.empty()) throw NoCommonBeacons();
    return {std::move(vf), std::move(vo)};
}

double beta_cosine(const std::vector<double>& f, const std::vector<double>& o) {
    const double nf = l2_norm(f), no = l2_norm(o);
    if (nf == 0.0 || no == 0.0) throw Error("zero-norm vector in cosine similarity");
    return clamp01(std::inner_product(f.begin(), f.end(), o.begin(), 0.0) / (nf * no));
}

double raw_distance(MetricKind kind, const std::vector<double>& f,
                    const std::vector<double>& o, double minkowski_p) {
    double acc = 0.0;
    switch (kind) {
        case MetricKind::InvNormEuclidean:
            for (std::size_t i = 0; i < f.size(); ++i) acc += (f[i] - o[i]) * (f[i] - o[i]);
            return std::sqrt(acc);
        case MetricKind::InvNormCityblock:
            for (std::size_t i = 0; i < f.size(); ++i) acc += std::abs(f[i] - o[i]);
            return acc;
        case MetricKind::Chebyshev:
            for (std::size_t i = 0; i < f.size(); ++i)
                acc = std::max(acc, std::abs(f[i] - o[i]));
            return acc;
        case MetricKind::Minkowski:
            if (minkowski_p < 1.0) throw Error("Minkowski p must be >= 1");
            for (std::size_t i = 0; i < f.size(); ++i)
                acc += std::pow(std::abs(f[i] - o[i]), minkowski_p);
            return std::pow(acc, 1.0 / minkowski_p);
        default:
            throw Error("raw_distance: not a norm-based metric");
    }
}

double beta_inv_euclidean(const std::vector<double>& f, const std::vector<double>& o) {
    return clamp01(1.0 - raw_distance(MetricKind::InvNormEuclidean, unit(f), unit(o)));
}

double beta_inv_cityblock(const std::vector<double>& f, const std::vector<double>& o) {
    return clamp01(1.0 - raw_distance(MetricKind::InvNormCityblock, unit(f), unit(o)));
}

double beta_baseline(MetricKind kind, const std::vector<double>& f,
                     const std::vector<double>& o, double minkowski_p) {
    switch (kind) {
        case MetricKind::Chebyshev:
        case MetricKind::Minkowski:
            return clamp01(1.0 - raw_distance(kind, unit(f), unit(o), minkowski_p));
        case MetricKind::Correlation:
            return clamp01(pearson(f, o));
        case MetricKind::Spearman:
            return clamp01(pearson(ranks_of(f), ranks_of(o)));
        default:
            throw Error("beta_baseline: not a baseline metric");
    }
}

double beta_gaussian(const std::vector<double>& f, const std::vector<double>& o,
                     double sigma) {
    if (sigma <= 0.0) throw Error("Gaussian kernel width must be positive");
    double ss = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) ss += (f[i] - o[i]) * (f[i] - o[i]);
    return std::exp(-ss / (2.0 * sigma * sigma));
}

double kernel_from_distance_exp(double distance, double rate) {
    if (rate <= 0.0) throw Error("exp-kernel rate must be positive");
    return std::exp(-distance * rate);
}

double kernel_from_distance_inverse(double distance, double max_distance) {
    if (distance <= 0.0) throw Error("inverse kernel needs a positive distance");
    return max_distance / distance;
}

double normalized_kernel_similarity(const KernelFn& kernel,
                                    const std::vector<double>& f,
                                    const std::vector<double>& o) {
    const double kff = kernel(f, f);
    const double koo = kernel(o, o);
    if (kff <= 0.0 || koo <= 0.0)
        throw InvariantViolation("kernel self-value not positive (Mercer violation)");
    return kernel(f, o) / std::sqrt(kff * koo);
}

double similarity(const Metric& metric, const RssMap& f, const RssMap& o,
                  const AlignOptions& opts) {
    const auto [vf, vo] = align(f, o, opts);
    switch (metric.kind) {
        case MetricKind::Cosine:
            return beta_cosine(vf, vo);
        case MetricKind::InvNormEuclidean:
            return beta_inv_euclidean(vf, vo);
        case MetricKind::InvNormCityblock:
            return beta_inv_cityblock(vf, vo);
        case MetricKind::Chebyshev:
        case MetricKind::Correlation:
        case MetricKind::Minkowski:
        case MetricKind::Spearman:
            return beta_baseline(metric.kind, vf, vo, metric.p);
        case MetricKind::GaussianKernel:
            return clamp01(beta_gaussian(vf, vo, metric.sigma));
        case MetricKind::ExpKernel:
            // Stationary in the distance, so the normalized form equals the
            // raw kernel value.
            return clamp01(kernel_from_distance_exp(
                raw_distance(metric.base, vf, vo, metric.p), metric.rate));
        case MetricKind::InverseKernel:
            throw Error("inverse kernel similarity needs a candidate set; use top_k");
    }
    throw Error("unhandled metric kind");
}

}  // namespace blefp
