#pragma once

#include <vector>

#include "irissr/image.hpp"

namespace irissr::sr {

// One supervised example. For the CNN engines both rasters share the HR patch
// size (lr_patch is the degraded, re-upscaled version); in SRGAN mode
// lr_patch stays at the small raster, factor times smaller than hr_patch.
struct TrainingPair {
    GrayImage lr_patch;
    GrayImage hr_patch;
    int factor = 0;
};

struct PairOptions {
    std::vector<int> factors{2};
    int patch = 33;
    int stride = 14;
    size_t budget = 0; // 0 = keep everything
    uint64_t seed = 1;
    bool srgan_mode = false; // keep lr at patch/factor instead of re-upscaling
};

// Extracts patches from every image, degrades each per requested factor, and
// returns a seeded shuffle truncated to the budget. Patch coordinates are
// enumerated lazily so only the budgeted pairs are materialized.
std::vector<TrainingPair> prepare_pairs(const std::vector<GrayImage>& images,
                                        const PairOptions& opt);

} // namespace irissr::sr
