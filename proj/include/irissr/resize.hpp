#pragma once

#include <vector>

#include "irissr/image.hpp"

namespace irissr {

enum class ResizeKernel { bilinear, bicubic };

// Separable resampling with pixel-center alignment: source coordinate of
// output sample i is (i + 0.5) * in/out - 0.5, borders clamped. Bicubic is
// the Keys kernel with a = -0.5. Results clamped to [0,1].
GrayImage resize(const GrayImage& img, int out_w, int out_h, ResizeKernel kernel);

// The degradation model: bicubic downscale by `factor` (floored dimensions)
// followed by bicubic upscale back to the original size.
struct Degraded {
    GrayImage low;      // the intermediate LR raster, floor(w/f) x floor(h/f)
    GrayImage restored; // re-upscaled to the original size
};
Degraded degrade_full(const GrayImage& img, int factor);
GrayImage degrade(const GrayImage& img, int factor);

// All fully-contained size x size patches at the given stride, raster order.
std::vector<GrayImage> extract_patches(const GrayImage& img, int size, int stride);

// Patch count without materializing: (floor((h-size)/stride)+1) * (floor((w-size)/stride)+1).
size_t patch_count(int w, int h, int size, int stride);

} // namespace irissr
