#pragma once

#include <algorithm>
#include <filesystem>
#include <span>
#include <vector>

#include "irissr/common.hpp"

namespace irissr {

// Single-channel raster with intensities in [0,1], row-major. The universal
// image currency of the toolkit: loaders normalize to it, every stage
// consumes and produces it.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, float fill = 0.0f)
        : width_(width), height_(height),
          data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {
        require(width >= 1 && height >= 1, "GrayImage: dimensions must be positive");
        require(fill >= 0.0f && fill <= 1.0f, "GrayImage: fill outside [0,1]");
    }

    // Takes ownership of `data`; validates the range invariant.
    static GrayImage from_data(int width, int height, std::vector<float> data) {
        require(width >= 1 && height >= 1, "GrayImage: dimensions must be positive");
        require(data.size() == static_cast<size_t>(width) * static_cast<size_t>(height),
                "GrayImage: data length != width*height");
        for (float v : data)
            require(v >= 0.0f && v <= 1.0f, "GrayImage: intensity outside [0,1]");
        GrayImage img;
        img.width_ = width;
        img.height_ = height;
        img.data_ = std::move(data);
        return img;
    }

    // Same, but clamps out-of-range values instead of rejecting them. For
    // results of arithmetic (interpolation overshoot, network output).
    static GrayImage from_data_clamped(int width, int height, std::vector<float> data) {
        for (float& v : data) v = std::clamp(v, 0.0f, 1.0f);
        return from_data(width, height, std::move(data));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    size_t size() const { return data_.size(); }

    float at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
    float& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }

    // Clamped-border lookup.
    float at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width_ - 1);
        y = std::clamp(y, 0, height_ - 1);
        return at(x, y);
    }

    std::span<const float> pixels() const { return data_; }
    std::span<float> pixels() { return data_; }

    GrayImage crop(int x0, int y0, int w, int h) const {
        require(x0 >= 0 && y0 >= 0 && w >= 1 && h >= 1 && x0 + w <= width_ && y0 + h <= height_,
                "crop: region outside image");
        GrayImage out(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) out.at(x, y) = at(x0 + x, y0 + y);
        return out;
    }

    bool operator==(const GrayImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

// Loads an 8-bit grayscale PNG or binary PGM (P5). RGB/RGBA PNG input is
// converted to luma with ITU-R BT.601 weights. Intensities are scaled by
// 1/255 into [0,1].
GrayImage load_image(const std::filesystem::path& path);

// 8-bit quantization exactly as a PNG save/load round trip produces it.
GrayImage quantized(const GrayImage& img);

// Writers quantize with round(v*255). Format picked by extension elsewhere;
// these are explicit.
void save_png(const GrayImage& img, const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
void save_image(const GrayImage& img, const std::filesystem::path& path); // by extension

} // namespace irissr
