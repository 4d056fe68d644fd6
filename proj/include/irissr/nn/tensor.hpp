#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "irissr/common.hpp"

namespace irissr::nn {

// 4-D activation/gradient array, (batch, channels, height, width), row-major
// with width fastest. Values must stay finite; training surfaces NaN/Inf as
// an error instead of continuing silently.
template <typename T>
struct Tensor4T {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> data;

    Tensor4T() = default;
    Tensor4T(int n_, int c_, int h_, int w_, T fill = T(0))
        : n(n_), c(c_), h(h_), w(w_),
          data(size_t(n_) * c_ * h_ * w_, fill) {
        require(n_ >= 1 && c_ >= 1 && h_ >= 1 && w_ >= 1, "Tensor4: dimensions must be positive");
    }

    size_t size() const { return data.size(); }
    size_t plane() const { return size_t(h) * w; }
    size_t sample_stride() const { return size_t(c) * h * w; }

    T& at(int in_, int ic, int iy, int ix) {
        return data[((size_t(in_) * c + ic) * h + iy) * w + ix];
    }
    T at(int in_, int ic, int iy, int ix) const {
        return data[((size_t(in_) * c + ic) * h + iy) * w + ix];
    }

    T* sample(int i) { return data.data() + size_t(i) * sample_stride(); }
    const T* sample(int i) const { return data.data() + size_t(i) * sample_stride(); }

    bool same_shape(const Tensor4T& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    void check_finite(const char* who) const {
        for (T v : data)
            if (!std::isfinite(double(v))) throw Error(std::string(who) + ": non-finite value");
    }
};

using Tensor4 = Tensor4T<float>;

// Channel/height/width of an activation; batch handled uniformly outside.
struct Shape {
    int c = 0, h = 0, w = 0;
    bool operator==(const Shape&) const = default;
};

} // namespace irissr::nn
