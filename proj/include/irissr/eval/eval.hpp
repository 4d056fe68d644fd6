#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "irissr/image.hpp"
#include "irissr/metrics.hpp"
#include "irissr/rng.hpp"

namespace irissr::eval {

// Hamming distance is a dissimilarity, SIFT match count a similarity; every
// score set carries its polarity explicitly.
enum class Polarity { distance, similarity };

struct ScoreSet {
    std::vector<double> genuine;
    std::vector<double> impostor;
    Polarity polarity = Polarity::distance;
};

struct PairPolicy {
    bool all_impostors = true;
    size_t impostor_sample = 0; // used when all_impostors is false
    uint64_t seed = 1;
};

// All unordered same-subject pairs are genuine; cross-subject pairs are
// impostor (all of them, or a seeded sample without replacement).
template <typename T>
ScoreSet pair_scores(const std::vector<std::pair<std::string, T>>& templates,
                     const std::function<double(const T&, const T&)>& matcher,
                     Polarity polarity, const PairPolicy& policy = {}) {
    const size_t n = templates.size();
    ScoreSet out;
    out.polarity = polarity;

    bool any_genuine = false;
    for (size_t i = 0; i < n && !any_genuine; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (templates[i].first == templates[j].first) {
                any_genuine = true;
                break;
            }
    require(any_genuine, "pair_scores: no genuine pairs possible");

    std::vector<std::pair<uint32_t, uint32_t>> impostor_pairs;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            if (templates[i].first == templates[j].first)
                out.genuine.push_back(matcher(templates[i].second, templates[j].second));
            else if (policy.all_impostors)
                out.impostor.push_back(matcher(templates[i].second, templates[j].second));
            else
                impostor_pairs.push_back({uint32_t(i), uint32_t(j)});
        }

    if (!policy.all_impostors) {
        // seeded reservoir sample, then deterministic evaluation order
        Rng rng(policy.seed);
        const size_t k = std::min(policy.impostor_sample, impostor_pairs.size());
        std::vector<std::pair<uint32_t, uint32_t>> keep(impostor_pairs.begin(),
                                                        impostor_pairs.begin() + k);
        for (size_t i = k; i < impostor_pairs.size(); ++i) {
            size_t j = size_t(rng.uniform_index(i + 1));
            if (j < k) keep[j] = impostor_pairs[i];
        }
        std::sort(keep.begin(), keep.end());
        for (auto [i, j] : keep)
            out.impostor.push_back(matcher(templates[i].second, templates[j].second));
    }
    return out;
}

// Verification-style scoring between an enrollment set and a probe set.
template <typename T>
ScoreSet cross_pair_scores(const std::vector<std::pair<std::string, T>>& enroll,
                           const std::vector<std::pair<std::string, T>>& probe,
                           const std::function<double(const T&, const T&)>& matcher,
                           Polarity polarity) {
    require(!enroll.empty() && !probe.empty(), "cross_pair_scores: empty manifest side");
    ScoreSet out;
    out.polarity = polarity;
    for (const auto& [pid, ptpl] : probe)
        for (const auto& [eid, etpl] : enroll) {
            double s = matcher(etpl, ptpl);
            (pid == eid ? out.genuine : out.impostor).push_back(s);
        }
    require(!out.genuine.empty(), "cross_pair_scores: no genuine pairs possible");
    return out;
}

struct RocPoint {
    double far = 0, frr = 0, threshold = 0;
};

// One point per distinct threshold, endpoints included; FAR monotone
// non-increasing along the accept-threshold direction.
std::vector<RocPoint> roc_curve(const ScoreSet& scores);

// Value at the FAR = FRR crossing, linearly interpolated between the two
// bracketing thresholds.
double compute_eer(const ScoreSet& scores);

struct ScoreHistogram {
    std::vector<double> edges; // bins + 1
    std::vector<double> genuine_density;
    std::vector<double> impostor_density; // each integrates to 1
};

ScoreHistogram histogram(const ScoreSet& scores, int bins = 100);

struct Roi {
    int x = 0, y = 0, w = 0, h = 0;
};

// Per-pair quality metrics plus corpus aggregates. PSNR of an identical pair
// is +infinity; an infinite mean is reported as-is and the stddev is taken
// over the finite values.
struct QualityStats {
    QualityTriple mean;
    QualityTriple stddev;
    std::vector<QualityTriple> per_pair;
};

QualityStats quality_report(const std::vector<std::pair<GrayImage, GrayImage>>& pairs,
                            std::optional<Roi> roi = {});

} // namespace irissr::eval
