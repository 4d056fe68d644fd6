#pragma once

#include <array>
#include <vector>

#include "irissr/image.hpp"

namespace irissr::iris {

struct Keypoint {
    double x = 0, y = 0;      // input-image coordinates
    double scale = 0;         // blur sigma at detection
    double orientation = 0;   // radians
};

struct KeypointSet {
    std::vector<Keypoint> keypoints;
    std::vector<std::array<float, 128>> descriptors; // L2-normalized
};

// Difference-of-Gaussians keypoints (3 scales/octave, contrast threshold
// 0.03, edge ratio 10) with gradient-histogram orientations and 4x4x8
// descriptors, 0.2-clamped and renormalized. Empty set on featureless input.
KeypointSet sift_extract(const GrayImage& img);

// Nearest-neighbor descriptor matching with the 0.8 ratio test; score is
// the matched-pair count over min(|a|,|b|), 0 when either side is empty.
double sift_match(const KeypointSet& a, const KeypointSet& b);

} // namespace irissr::iris
