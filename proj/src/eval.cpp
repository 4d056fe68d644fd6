#include "irissr/eval/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irissr::eval {

namespace {

// Normalizes to distance polarity: accept when score <= threshold.
std::pair<std::vector<double>, std::vector<double>> as_distance(const ScoreSet& s) {
    std::vector<double> g = s.genuine, i = s.impostor;
    if (s.polarity == Polarity::similarity) {
        for (auto& v : g) v = -v;
        for (auto& v : i) v = -v;
    }
    std::sort(g.begin(), g.end());
    std::sort(i.begin(), i.end());
    return {std::move(g), std::move(i)};
}

size_t count_lt(const std::vector<double>& sorted, double t) {
    return size_t(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}
size_t count_leq(const std::vector<double>& sorted, double t) {
    return size_t(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

} // namespace

// Scores equal to the threshold count half on each side, so a genuine and an
// impostor at the same score meet at FAR = FRR there.
std::vector<RocPoint> roc_curve(const ScoreSet& scores) {
    require(!scores.genuine.empty() && !scores.impostor.empty(),
            "roc_curve: both score sides must be non-empty");
    auto [g, im] = as_distance(scores);

    // candidate thresholds: every distinct score, the midpoints between
    // neighbors (clean separating points), and both infinities
    std::vector<double> distinct;
    distinct.reserve(g.size() + im.size());
    std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(distinct));
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<double> thresholds;
    thresholds.reserve(2 * distinct.size() + 2);
    thresholds.push_back(-std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < distinct.size(); ++i) {
        thresholds.push_back(distinct[i]);
        if (i + 1 < distinct.size())
            thresholds.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    }
    thresholds.push_back(std::numeric_limits<double>::infinity());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double ng = double(g.size()), ni = double(im.size());
    const double sign = scores.polarity == Polarity::similarity ? -1.0 : 1.0;
    std::vector<RocPoint> roc;
    roc.reserve(thresholds.size());
    for (double t : thresholds) {
        size_t ilt = count_lt(im, t), ileq = count_leq(im, t);
        size_t glt = count_lt(g, t), gleq = count_leq(g, t);
        RocPoint p;
        p.far = (double(ilt) + 0.5 * double(ileq - ilt)) / ni;
        p.frr = (double(g.size() - gleq) + 0.5 * double(gleq - glt)) / ng;
        p.threshold = sign * t; // back in caller polarity
        roc.push_back(p);
    }
    return roc;
}

double compute_eer(const ScoreSet& scores) {
    auto roc = roc_curve(scores);
    // FAR - FRR is non-decreasing along the sweep: find the sign change
    for (size_t i = 0; i + 1 < roc.size(); ++i) {
        double d0 = roc[i].frr - roc[i].far;
        double d1 = roc[i + 1].frr - roc[i + 1].far;
        if (d0 >= 0 && d1 <= 0) {
            if (d0 == d1) return roc[i].far; // flat crossing (both zero)
            double alpha = d0 / (d0 - d1);
            return roc[i].far + alpha * (roc[i + 1].far - roc[i].far);
        }
    }
    // no strict crossing (degenerate sets); closest point
    double best = 1.0, eer = 0.5;
    for (const auto& p : roc) {
        double gap = std::fabs(p.far - p.frr);
        if (gap < best) {
            best = gap;
            eer = 0.5 * (p.far + p.frr);
        }
    }
    return eer;
}

ScoreHistogram histogram(const ScoreSet& scores, int bins) {
    require(bins >= 2, "histogram: need at least 2 bins");
    require(!scores.genuine.empty() && !scores.impostor.empty(),
            "histogram: both score sides must be non-empty");

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto* side : {&scores.genuine, &scores.impostor})
        for (double v : *side) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi <= lo) hi = lo + 1.0; // all scores equal: one occupied bin

    ScoreHistogram h;
    h.edges.resize(size_t(bins) + 1);
    const double width = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) h.edges[size_t(i)] = lo + width * i;

    auto densify = [&](const std::vector<double>& vals) {
        std::vector<double> d(size_t(bins), 0.0);
        for (double v : vals) {
            int b = std::min(int((v - lo) / width), bins - 1);
            d[size_t(b)] += 1.0;
        }
        for (auto& x : d) x /= double(vals.size()) * width;
        return d;
    };
    h.genuine_density = densify(scores.genuine);
    h.impostor_density = densify(scores.impostor);
    return h;
}

QualityStats quality_report(const std::vector<std::pair<GrayImage, GrayImage>>& pairs,
                            std::optional<Roi> roi) {
    require(!pairs.empty(), "quality_report: empty pair list");
    QualityStats stats;
    for (const auto& [ref, test] : pairs) {
        require(ref.width() == test.width() && ref.height() == test.height(),
                "quality_report: dimension mismatch");
        if (roi) {
            GrayImage rc = ref.crop(roi->x, roi->y, roi->w, roi->h);
            GrayImage tc = test.crop(roi->x, roi->y, roi->w, roi->h);
            stats.per_pair.push_back(quality_triple(rc, tc));
        } else {
            stats.per_pair.push_back(quality_triple(ref, test));
        }
    }

    auto aggregate = [&](auto member, double& mean_out, double& std_out) {
        double sum = 0;
        bool has_inf = false;
        std::vector<double> finite;
        for (const auto& q : stats.per_pair) {
            double v = q.*member;
            if (std::isinf(v)) {
                has_inf = true;
                continue;
            }
            finite.push_back(v);
            sum += v;
        }
        if (has_inf && finite.empty()) {
            mean_out = std::numeric_limits<double>::infinity();
            std_out = 0.0;
            return;
        }
        mean_out = has_inf ? std::numeric_limits<double>::infinity()
                           : sum / double(finite.size());
        double var = 0;
        if (finite.size() > 1) {
            double m = sum / double(finite.size());
            for (double v : finite) var += (v - m) * (v - m);
            var /= double(finite.size());
        }
        std_out = std::sqrt(var);
    };
    aggregate(&QualityTriple::psnr, stats.mean.psnr, stats.stddev.psnr);
    aggregate(&QualityTriple::ssim, stats.mean.ssim, stats.stddev.ssim);
    aggregate(&QualityTriple::fsim, stats.mean.fsim, stats.stddev.fsim);
    return stats;
}

} // namespace irissr::eval
