#pragma once

#include "irissr/image.hpp"

namespace irissr {

// Full-reference quality scores for one image pair. psnr is +infinity when
// the images are identical; ssim and fsim are 1 in that case.
struct QualityTriple {
    double psnr = 0.0;
    double ssim = 0.0;
    double fsim = 0.0;
};

// 10*log10(1/MSE) on [0,1] intensities (MAX = 1). +infinity when MSE == 0.
double psnr(const GrayImage& ref, const GrayImage& test);

// Mean structural similarity over sliding 11x11 Gaussian windows (sigma 1.5),
// C1 = 0.01^2, C2 = 0.03^2 on unit dynamic range. Requires min dim >= 11.
double ssim(const GrayImage& ref, const GrayImage& test);

// Feature similarity: phase-congruency maps from a 4-scale x 4-orientation
// log-Gabor bank combined with Scharr gradient magnitude, pooled with
// max-PC weighting. Requires min dim >= 32. Result in (0,1].
double fsim(const GrayImage& ref, const GrayImage& test);

QualityTriple quality_triple(const GrayImage& ref, const GrayImage& test);

} // namespace irissr
