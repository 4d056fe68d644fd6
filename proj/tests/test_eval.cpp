#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "irissr/eval/eval.hpp"
#include "irissr/resize.hpp"

using namespace irissr;
using namespace irissr::eval;

namespace {

// Brute-force threshold sweep with the same crossing interpolation, built
// from first principles (no sorting tricks shared with the implementation).
// Ties at the threshold count half, as documented for roc_curve.
double eer_oracle(const ScoreSet& s) {
    auto dist = [&](double v) { return s.polarity == Polarity::distance ? v : -v; };
    std::vector<double> distinct;
    for (double v : s.genuine) distinct.push_back(dist(v));
    for (double v : s.impostor) distinct.push_back(dist(v));
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<double> ts;
    ts.push_back(-std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < distinct.size(); ++i) {
        ts.push_back(distinct[i]);
        if (i + 1 < distinct.size()) ts.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    }
    ts.push_back(std::numeric_limits<double>::infinity());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::vector<double> fars, frrs;
    for (double t : ts) {
        double fa = 0, fr = 0;
        for (double v : s.impostor) fa += dist(v) < t ? 1.0 : (dist(v) == t ? 0.5 : 0.0);
        for (double v : s.genuine) fr += dist(v) > t ? 1.0 : (dist(v) == t ? 0.5 : 0.0);
        fars.push_back(fa / double(s.impostor.size()));
        frrs.push_back(fr / double(s.genuine.size()));
    }
    for (size_t i = 0; i + 1 < fars.size(); ++i) {
        double d0 = frrs[i] - fars[i];
        double d1 = frrs[i + 1] - fars[i + 1];
        if (d0 >= 0 && d1 <= 0) {
            if (d0 == d1) return fars[i];
            double alpha = d0 / (d0 - d1);
            return fars[i] + alpha * (fars[i + 1] - fars[i]);
        }
    }
    return 0.5;
}

GrayImage texture_image(int w, int h, uint64_t seed) {
    Rng rng(seed);
    std::vector<float> data(size_t(w) * h);
    double a = rng.uniform(0, 6.28), b = rng.uniform(0, 6.28);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            data[size_t(y) * w + x] = float(std::clamp(
                0.5 + 0.2 * std::sin(0.3 * x + a) + 0.2 * std::sin(0.23 * y + b) +
                    rng.uniform(-0.05, 0.05),
                0.0, 1.0));
    return GrayImage::from_data(w, h, std::move(data));
}

} // namespace

TEST_CASE("pair_scores enumerates genuine and impostor pairs") {
    std::function<double(const int&, const int&)> matcher = [](const int& a, const int& b) {
        return std::fabs(double(a - b));
    };
    std::vector<std::pair<std::string, int>> templates = {
        {"s1", 10}, {"s1", 11}, {"s2", 50}, {"s2", 52}};
    ScoreSet s = pair_scores<int>(templates, matcher, Polarity::distance);
    CHECK(s.genuine.size() == 2);
    CHECK(s.impostor.size() == 4);

    std::vector<std::pair<std::string, int>> lone = {{"a", 1}, {"b", 2}};
    CHECK_THROWS_AS(pair_scores<int>(lone, matcher, Polarity::distance), Error);
}

TEST_CASE("pair counts reproduce the 396-class corpus totals") {
    // 269 classes of 3 samples, 41 of 5, 86 of 10: 1872 templates
    std::vector<std::pair<std::string, int>> templates;
    int cls = 0;
    auto add = [&](int classes, int samples) {
        for (int c = 0; c < classes; ++c, ++cls)
            for (int k = 0; k < samples; ++k)
                templates.push_back({"c" + std::to_string(cls), 0});
    };
    add(269, 3);
    add(41, 5);
    add(86, 10);
    REQUIRE(templates.size() == 1872);
    REQUIRE(cls == 396);

    std::function<double(const int&, const int&)> matcher = [](const int&, const int&) {
        return 0.5;
    };
    ScoreSet s = pair_scores<int>(templates, matcher, Polarity::distance);
    CHECK(s.genuine.size() == 5087);
    CHECK(s.impostor.size() == 1746169);
}

TEST_CASE("impostor sampling is seeded and bounded") {
    std::function<double(const int&, const int&)> matcher = [](const int& a, const int& b) {
        return double(a + b);
    };
    std::vector<std::pair<std::string, int>> templates;
    for (int i = 0; i < 30; ++i)
        templates.push_back({"s" + std::to_string(i / 2), i});
    PairPolicy policy{.all_impostors = false, .impostor_sample = 50, .seed = 7};
    ScoreSet a = pair_scores<int>(templates, matcher, Polarity::distance, policy);
    ScoreSet b = pair_scores<int>(templates, matcher, Polarity::distance, policy);
    CHECK(a.impostor.size() == 50);
    CHECK(a.impostor == b.impostor);
}

TEST_CASE("eer oracle values") {
    SUBCASE("perfect separation") {
        ScoreSet s{{0.1, 0.2}, {0.3, 0.4}, Polarity::distance};
        CHECK(compute_eer(s) == 0.0);
    }
    SUBCASE("identical distributions") {
        ScoreSet s;
        for (int i = 0; i < 200; ++i) {
            s.genuine.push_back(i % 17 * 0.1);
            s.impostor.push_back(i % 17 * 0.1);
        }
        CHECK(compute_eer(s) == doctest::Approx(0.5).epsilon(0.01));
    }
    SUBCASE("gaussian separation matches the closed form") {
        Rng rng(13);
        ScoreSet s;
        for (int i = 0; i < 100000; ++i) {
            s.genuine.push_back(rng.normal());
            s.impostor.push_back(rng.normal() + 2.0);
        }
        s.polarity = Polarity::distance;
        CHECK(compute_eer(s) == doctest::Approx(0.158655).epsilon(0.01 / 0.158655));
    }
    SUBCASE("matches the brute-force sweep exactly") {
        Rng rng(17);
        for (int trial = 0; trial < 8; ++trial) {
            ScoreSet s;
            s.polarity = trial % 2 ? Polarity::similarity : Polarity::distance;
            int ng = rng.uniform_int(5, 500), ni = rng.uniform_int(5, 500);
            for (int i = 0; i < ng; ++i) s.genuine.push_back(rng.uniform(0, 1));
            for (int i = 0; i < ni; ++i)
                s.impostor.push_back(rng.uniform(0, 1) + (s.polarity == Polarity::distance
                                                              ? rng.uniform(0, 0.5)
                                                              : -rng.uniform(0, 0.5)));
            CHECK(compute_eer(s) == doctest::Approx(eer_oracle(s)).epsilon(1e-12));
        }
    }
    SUBCASE("empty side errors") {
        ScoreSet s{{0.1}, {}, Polarity::distance};
        CHECK_THROWS_AS(compute_eer(s), Error);
    }
}

TEST_CASE("eer invariances") {
    Rng rng(23);
    ScoreSet s;
    for (int i = 0; i < 300; ++i) {
        s.genuine.push_back(rng.uniform(0, 0.6));
        s.impostor.push_back(rng.uniform(0.3, 1.0));
    }
    double base = compute_eer(s);

    SUBCASE("strictly monotone transform") {
        ScoreSet t = s;
        for (auto& v : t.genuine) v = std::exp(3 * v) + 1;
        for (auto& v : t.impostor) v = std::exp(3 * v) + 1;
        CHECK(compute_eer(t) == doctest::Approx(base).epsilon(1e-12));
    }
    SUBCASE("label swap with flipped polarity") {
        ScoreSet t;
        t.genuine = s.impostor;
        t.impostor = s.genuine;
        t.polarity = Polarity::similarity;
        CHECK(compute_eer(t) == doctest::Approx(base).epsilon(1e-9));
    }
    SUBCASE("duplicate score shifts eer continuously") {
        ScoreSet t = s;
        t.genuine.push_back(t.genuine[17]);
        double bound = 2.0 * (1.0 / double(s.genuine.size()) + 1.0 / double(s.impostor.size()));
        CHECK(std::fabs(compute_eer(t) - base) <= bound);
    }
}

TEST_CASE("roc curve shape") {
    ScoreSet s{{0.1, 0.2}, {0.5, 0.7}, Polarity::distance};
    auto roc = roc_curve(s);
    REQUIRE(roc.size() >= 4);
    CHECK(roc.front().far == 0.0);
    CHECK(roc.front().frr == 1.0);
    CHECK(roc.back().far == 1.0);
    CHECK(roc.back().frr == 0.0);

    bool perfect = false;
    for (const auto& p : roc) perfect |= (p.far == 0.0 && p.frr == 0.0);
    CHECK(perfect);

    SUBCASE("single equal scores cross at the shared threshold") {
        ScoreSet eq{{0.4}, {0.4}, Polarity::distance};
        auto r = roc_curve(eq);
        bool crossed = false;
        for (const auto& p : r) crossed |= (p.far == p.frr && p.threshold == 0.4);
        CHECK(crossed);
    }
    SUBCASE("far is monotone along the sweep") {
        Rng rng(31);
        ScoreSet t;
        for (int i = 0; i < 200; ++i) {
            t.genuine.push_back(rng.uniform(0, 1));
            t.impostor.push_back(rng.uniform(0, 1));
        }
        auto r = roc_curve(t);
        for (size_t i = 1; i < r.size(); ++i) {
            CHECK(r[i].far >= r[i - 1].far);
            CHECK(r[i].frr <= r[i - 1].frr);
        }
    }
}

TEST_CASE("histogram normalization and shape") {
    SUBCASE("all scores equal occupy a single bin") {
        ScoreSet s{{0.3, 0.3, 0.3}, {0.3, 0.3}, Polarity::distance};
        auto h = histogram(s, 10);
        double width = h.edges[1] - h.edges[0];
        int occupied = 0;
        double mass = 0;
        for (double d : h.genuine_density) {
            occupied += d > 0;
            mass += d * width;
        }
        CHECK(occupied == 1);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("densities integrate to one") {
        Rng rng(41);
        ScoreSet s;
        for (int i = 0; i < 500; ++i) {
            s.genuine.push_back(rng.uniform(0, 0.5));
            s.impostor.push_back(rng.uniform(0.2, 1.0));
        }
        auto h = histogram(s, 64);
        double width = h.edges[1] - h.edges[0];
        double mg = 0, mi = 0;
        for (double d : h.genuine_density) mg += d * width;
        for (double d : h.impostor_density) mi += d * width;
        CHECK(mg == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mi == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("separated clusters leave an empty gap") {
        ScoreSet s;
        for (int i = 0; i < 50; ++i) {
            s.genuine.push_back(0.05 + 0.001 * i);
            s.impostor.push_back(0.9 + 0.001 * i);
        }
        auto h = histogram(s, 40);
        bool gap = false;
        for (size_t b = 0; b < h.genuine_density.size(); ++b)
            gap |= (h.genuine_density[b] == 0.0 && h.impostor_density[b] == 0.0);
        CHECK(gap);
    }
}

TEST_CASE("quality report aggregates") {
    GrayImage a = texture_image(48, 48, 1);
    SUBCASE("identical pairs") {
        auto stats = quality_report({{a, a}, {a, a}});
        CHECK(std::isinf(stats.mean.psnr));
        CHECK(stats.mean.ssim == doctest::Approx(1.0));
        CHECK(stats.mean.fsim == doctest::Approx(1.0));
    }
    SUBCASE("single pair has zero stddev") {
        GrayImage b = degrade(a, 2);
        auto stats = quality_report({{a, b}});
        CHECK(stats.per_pair.size() == 1);
        CHECK(stats.mean.psnr == doctest::Approx(stats.per_pair[0].psnr));
        CHECK(stats.stddev.psnr == 0.0);
        CHECK(stats.stddev.ssim == 0.0);
    }
    SUBCASE("stronger degradation scores lower") {
        std::vector<std::pair<GrayImage, GrayImage>> f2, f8;
        for (int i = 0; i < 3; ++i) {
            GrayImage img = texture_image(64, 64, 10 + uint64_t(i));
            f2.push_back({img, degrade(img, 2)});
            f8.push_back({img, degrade(img, 8)});
        }
        CHECK(quality_report(f2).mean.psnr > quality_report(f8).mean.psnr);
    }
    SUBCASE("roi crop is honored") {
        GrayImage b = degrade(a, 2);
        auto full = quality_report({{a, b}});
        auto roi = quality_report({{a, b}}, Roi{8, 8, 32, 32});
        CHECK(roi.per_pair.size() == 1);
        CHECK(roi.per_pair[0].psnr != full.per_pair[0].psnr);
    }
    SUBCASE("dimension mismatch errors") {
        CHECK_THROWS_AS(quality_report({{a, GrayImage(24, 24, 0.5f)}}), Error);
    }
}
