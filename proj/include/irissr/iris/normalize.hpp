#pragma once

#include <vector>

#include "irissr/image.hpp"
#include "irissr/iris/segment.hpp"

namespace irissr::iris {

inline constexpr int kNormRows = 64;  // radial samples
inline constexpr int kNormCols = 512; // angular samples

// Rubber-sheet unwrapped iris: 64 x 512 texture plus a validity mask
// (true = usable sample).
struct NormalizedIris {
    GrayImage texture;         // width 512, height 64
    std::vector<uint8_t> mask; // row-major, 64*512 entries

    bool usable(int row, int col) const { return mask[size_t(row) * kNormCols + col] != 0; }
};

// Daugman rubber-sheet: 512 angles x 64 radial positions linearly
// interpolating between the pupil and iris boundary circles, bilinear pixel
// sampling. Samples outside the image or inside the pupil are masked out.
NormalizedIris normalize(const GrayImage& img, const SegmentationResult& seg);

} // namespace irissr::iris
