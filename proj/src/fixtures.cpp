#include "irissr/cli/fixtures.hpp"

#include <cmath>

#include "irissr/cli/manifest.hpp"
#include "irissr/rng.hpp"

namespace irissr::cli {

GrayImage make_texture(int width, int height, uint64_t seed) {
    Rng rng(seed);
    struct Wave {
        double fx, fy, phase, amp;
    };
    std::vector<Wave> waves;
    for (int i = 0; i < 7; ++i)
        waves.push_back({rng.uniform(0.02, 0.42), rng.uniform(0.02, 0.42),
                         rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.03, 0.11)});
    std::vector<float> data(size_t(width) * height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double v = 0.5;
            for (const auto& w : waves)
                v += w.amp * std::sin(2.0 * M_PI * (w.fx * x + w.fy * y) + w.phase);
            v += rng.uniform(-0.015, 0.015);
            data[size_t(y) * width + x] = float(std::clamp(v, 0.0, 1.0));
        }
    return GrayImage::from_data(width, height, std::move(data));
}

GrayImage make_eye(const EyeParams& params, iris::SegmentationResult* truth) {
    const int size = params.size;
    Rng subject(params.subject_seed);
    // subject identity: pupil/iris geometry and an angular-radial harmonic mix
    const double pupil_r = subject.uniform(0.13, 0.17) * size;
    const double iris_r = subject.uniform(0.36, 0.42) * size;
    struct Harmonic {
        int n;        // angular frequency (cycles per revolution)
        double rad;   // radial frequency
        double phase;
        double amp;
    };
    std::vector<Harmonic> mix;
    for (int i = 0; i < 5; ++i)
        mix.push_back({subject.uniform_int(5, 60), subject.uniform(0.0, 0.6),
                       subject.uniform(0.0, 2.0 * M_PI), subject.uniform(0.05, 0.11)});

    Rng sample(params.sample_seed);
    const double cx = size / 2.0 + sample.uniform_int(-3, 3);
    const double cy = size / 2.0 + sample.uniform_int(-3, 3);
    const double rotation = sample.uniform(-0.012, 0.012); // radians, ~ +-1 column
    const double gain = sample.uniform(-0.03, 0.03);
    const double noise = 0.012;

    GrayImage img(size, size, 0.93f);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            double v;
            if (d < pupil_r) {
                v = 0.03;
            } else if (d < iris_r) {
                const double theta = std::atan2(y - cy, x - cx) + rotation;
                v = 0.45 + gain;
                for (const auto& h : mix)
                    v += h.amp * std::sin(h.n * theta + h.rad * d + h.phase);
                // soften the pupil boundary slightly
                v = std::min(v, 0.03 + (d - pupil_r) * 0.4);
            } else {
                v = 0.93 + gain * 0.5;
            }
            v += sample.uniform(-noise, noise);
            img.at(x, y) = float(std::clamp(v, 0.0, 1.0));
        }
    if (truth) {
        truth->pupil = {cx, cy, pupil_r};
        truth->iris = {cx, cy, iris_r};
        truth->usable = true;
    }
    return img;
}

void generate_texture_corpus(const std::filesystem::path& dir, int count, int size,
                             uint64_t seed) {
    require(count >= 1 && size >= 8, "texture corpus: bad geometry");
    std::filesystem::create_directories(dir);
    Manifest m;
    for (int i = 0; i < count; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "texture_%03d.png", i);
        GrayImage img = make_texture(size, size, seed + uint64_t(i) * 1000003ULL);
        save_png(img, dir / name);
        m.entries.push_back({dir / name, "t" + std::to_string(i), "0", 0});
    }
    save_manifest(m, dir / "manifest.csv");
}

void generate_eye_corpus(const std::filesystem::path& dir, int subjects, int samples, int size,
                         uint64_t seed) {
    require(subjects >= 1 && samples >= 2 && size >= 64, "eye corpus: bad geometry");
    std::filesystem::create_directories(dir);
    Manifest all, enroll, probe;
    for (int s = 0; s < subjects; ++s) {
        for (int k = 0; k < samples; ++k) {
            char name[64];
            std::snprintf(name, sizeof(name), "eye_s%03d_n%02d.png", s, k);
            EyeParams params;
            params.size = size;
            params.subject_seed = seed + uint64_t(s) * 7919ULL;
            params.sample_seed = seed + uint64_t(s) * 7919ULL + uint64_t(k) * 104729ULL + 1;
            iris::SegmentationResult truth;
            GrayImage img = make_eye(params, &truth);
            save_png(img, dir / name);
            iris::save_segmentation(truth, dir / (std::string(name) + ".seg.csv"));

            ManifestEntry e{dir / name, "s" + std::to_string(s), "0", k};
            all.entries.push_back(e);
            (k < samples / 2 ? enroll : probe).entries.push_back(e);
        }
    }
    save_manifest(all, dir / "all.csv");
    save_manifest(enroll, dir / "enroll.csv");
    save_manifest(probe, dir / "probe.csv");
}

} // namespace irissr::cli
