#pragma once

#include <filesystem>

#include "irissr/image.hpp"

namespace irissr::iris {

struct Circle {
    double cx = 0, cy = 0, r = 0;
};

// Pupil and limbus as circles. `usable` is false when boundary evidence is
// below the confidence thresholds; segmentation never throws for that.
struct SegmentationResult {
    Circle pupil;
    Circle iris;
    bool usable = false;
};

// Pupil by dark-intensity thresholding plus a local Hough-style boundary
// vote; iris boundary by an integro-differential radius search around the
// pupil center.
SegmentationResult segment(const GrayImage& img);

// Sidecar CSV with two lines "cx,cy,r": pupil first, iris second. Enables a
// shared segmentation across engines and ground-truth ingestion.
SegmentationResult load_segmentation(const std::filesystem::path& path);
void save_segmentation(const SegmentationResult& seg, const std::filesystem::path& path);

} // namespace irissr::iris
