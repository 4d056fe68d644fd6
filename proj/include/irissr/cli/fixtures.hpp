#pragma once

#include <filesystem>

#include "irissr/image.hpp"
#include "irissr/iris/segment.hpp"

namespace irissr::cli {

// Procedural texture: a seeded mixture of oriented sinusoidal gratings with
// mild noise, the stand-in for texture training corpora.
GrayImage make_texture(int width, int height, uint64_t seed);

// Synthetic eye: dark pupil, subject-specific textured annulus, bright
// sclera. Per-sample jitter: small rotation, brightness shift, sensor noise.
struct EyeParams {
    int size = 128;
    uint64_t subject_seed = 1;
    uint64_t sample_seed = 1;
};
GrayImage make_eye(const EyeParams& params, iris::SegmentationResult* truth = nullptr);

// Writes `count` texture PNGs plus manifest.csv into `dir`.
void generate_texture_corpus(const std::filesystem::path& dir, int count, int size,
                             uint64_t seed);

// Writes subjects x samples eye PNGs with ground-truth segmentation sidecars
// (<image>.seg.csv) plus manifests: all.csv, enroll.csv (first half of the
// samples), probe.csv (the rest).
void generate_eye_corpus(const std::filesystem::path& dir, int subjects, int samples, int size,
                         uint64_t seed);

} // namespace irissr::cli
