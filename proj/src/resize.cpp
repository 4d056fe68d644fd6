#include "irissr/resize.hpp"

#include <cmath>

namespace irissr {

namespace {

// Keys cubic convolution kernel, a = -0.5.
double keys(double t) {
    t = std::fabs(t);
    if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
    if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    return 0.0;
}

struct Tap {
    int idx[4];
    double w[4];
    int n;
};

// Per-output-sample source taps for one axis.
std::vector<Tap> make_taps(int in, int out, ResizeKernel kernel) {
    std::vector<Tap> taps(out);
    const double scale = double(in) / double(out);
    for (int i = 0; i < out; ++i) {
        double src = (i + 0.5) * scale - 0.5;
        int base = int(std::floor(src));
        double t = src - base;
        Tap& tap = taps[i];
        if (kernel == ResizeKernel::bilinear) {
            tap.n = 2;
            tap.idx[0] = base;
            tap.idx[1] = base + 1;
            tap.w[0] = 1.0 - t;
            tap.w[1] = t;
        } else {
            tap.n = 4;
            for (int k = 0; k < 4; ++k) {
                tap.idx[k] = base - 1 + k;
                tap.w[k] = keys(t - (k - 1));
            }
        }
        for (int k = 0; k < tap.n; ++k) tap.idx[k] = std::clamp(tap.idx[k], 0, in - 1);
    }
    return taps;
}

} // namespace

GrayImage resize(const GrayImage& img, int out_w, int out_h, ResizeKernel kernel) {
    require(!img.empty(), "resize: empty image");
    require(out_w >= 1 && out_h >= 1, "resize: zero target dimension");

    const int in_w = img.width(), in_h = img.height();
    auto htaps = make_taps(in_w, out_w, kernel);
    auto vtaps = make_taps(in_h, out_h, kernel);

    // horizontal pass, intermediate kept unclamped
    std::vector<double> tmp(size_t(out_w) * in_h);
    for (int y = 0; y < in_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const Tap& tap = htaps[x];
            double acc = 0.0;
            for (int k = 0; k < tap.n; ++k) acc += tap.w[k] * img.at(tap.idx[k], y);
            tmp[size_t(y) * out_w + x] = acc;
        }
    }
    std::vector<float> out(size_t(out_w) * out_h);
    for (int y = 0; y < out_h; ++y) {
        const Tap& tap = vtaps[y];
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < tap.n; ++k) acc += tap.w[k] * tmp[size_t(tap.idx[k]) * out_w + x];
            out[size_t(y) * out_w + x] = float(acc);
        }
    }
    return GrayImage::from_data_clamped(out_w, out_h, std::move(out));
}

Degraded degrade_full(const GrayImage& img, int factor) {
    require(factor >= 2, "degrade: factor must be >= 2");
    const int lw = img.width() / factor;
    const int lh = img.height() / factor;
    require(lw >= 1 && lh >= 1, "degrade: image smaller than factor");
    Degraded d;
    d.low = resize(img, lw, lh, ResizeKernel::bicubic);
    d.restored = resize(d.low, img.width(), img.height(), ResizeKernel::bicubic);
    return d;
}

GrayImage degrade(const GrayImage& img, int factor) {
    return degrade_full(img, factor).restored;
}

size_t patch_count(int w, int h, int size, int stride) {
    if (size > w || size > h) return 0;
    return (size_t((h - size) / stride) + 1) * (size_t((w - size) / stride) + 1);
}

std::vector<GrayImage> extract_patches(const GrayImage& img, int size, int stride) {
    require(size >= 1 && size <= std::min(img.width(), img.height()),
            "extract_patches: size exceeds image");
    require(stride >= 1, "extract_patches: stride must be >= 1");
    std::vector<GrayImage> patches;
    patches.reserve(patch_count(img.width(), img.height(), size, stride));
    for (int y = 0; y + size <= img.height(); y += stride)
        for (int x = 0; x + size <= img.width(); x += stride)
            patches.push_back(img.crop(x, y, size, size));
    return patches;
}

} // namespace irissr
