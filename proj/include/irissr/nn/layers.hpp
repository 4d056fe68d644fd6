#pragma once

#include <memory>
#include <string>

#include "irissr/nn/tensor.hpp"
#include "irissr/rng.hpp"

namespace irissr::nn {

enum class LayerKind : uint8_t {
    conv = 1,
    relu = 2,
    prelu = 3,
    leaky_relu = 4,
    batch_norm = 5,
    residual_add = 6,
    pixel_shuffle = 7,
    dense = 8,
    sigmoid = 9,
};

const char* layer_kind_name(LayerKind k);

// Serializable description of one layer; integer fields are kind-specific
// (conv: out,in,kernel,stride,pad; prelu/batch_norm: channels;
//  residual_add: source activation index; pixel_shuffle: r;
//  dense: in_features,units; leaky_relu: slope in f0).
struct LayerDesc {
    LayerKind kind{};
    int32_t i0 = 0, i1 = 0, i2 = 0, i3 = 0, i4 = 0;
    float f0 = 0.0f;
};

// Filter-bank geometry of a convolutional layer.
struct ConvSpec {
    int out_channels = 0;
    int in_channels = 0;
    int kernel = 0;
    int stride = 1;
    int padding = 0;
};

template <typename T>
struct ParamView {
    std::vector<T>* value = nullptr;
    std::vector<T>* grad = nullptr; // null for buffers (not optimized)
    std::string name;
};

enum class Mode { train, infer };

// ---- GEMM kernels (row-major). Loop orders keep the inner loop contiguous
// for vectorization and block the row dimension so the streamed operand is
// reused from cache instead of re-read from memory. ----

// C (m x n) += A (m x k) * B (k x n)
template <typename T>
void gemm_nn(int m, int k, int n, const T* A, const T* B, T* C) {
    constexpr int kRowBlock = 8;
    for (int i0 = 0; i0 < m; i0 += kRowBlock) {
        const int i1 = std::min(i0 + kRowBlock, m);
        for (int l = 0; l < k; ++l) {
            const T* b = B + size_t(l) * n;
            for (int i = i0; i < i1; ++i) {
                T av = A[size_t(i) * k + l];
                T* c = C + size_t(i) * n;
                for (int j = 0; j < n; ++j) c[j] += av * b[j];
            }
        }
    }
}

// C (m x n) += A (m x k) * B^T, with B (n x k). The dot product accumulates
// into a lane array so the reduction vectorizes without reassociation flags.
template <typename T>
void gemm_nt(int m, int k, int n, const T* A, const T* B, T* C) {
    constexpr int kLanes = 16;
    for (int j = 0; j < n; ++j) {
        const T* b = B + size_t(j) * k;
        for (int i = 0; i < m; ++i) {
            const T* a = A + size_t(i) * k;
            T lanes[kLanes] = {};
            int l = 0;
            for (; l + kLanes <= k; l += kLanes)
                for (int v = 0; v < kLanes; ++v) lanes[v] += a[l + v] * b[l + v];
            T acc = T(0);
            for (; l < k; ++l) acc += a[l] * b[l];
            for (int v = 0; v < kLanes; ++v) acc += lanes[v];
            C[size_t(i) * n + j] += acc;
        }
    }
}

// C (m x n) += A^T * B, with A (k x m), B (k x n)
template <typename T>
void gemm_tn(int m, int k, int n, const T* A, const T* B, T* C) {
    for (int i = 0; i < m; ++i) {
        T* c = C + size_t(i) * n;
        for (int l = 0; l < k; ++l) {
            T av = A[size_t(l) * m + i];
            const T* b = B + size_t(l) * n;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

template <typename T>
class LayerT {
public:
    virtual ~LayerT() = default;
    virtual LayerKind kind() const = 0;
    virtual LayerDesc desc() const = 0;
    virtual Shape out_shape(Shape in) const = 0;
    virtual void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode mode) = 0;
    // Accumulates parameter gradients; assigns the input gradient. `in` and
    // `out` are the cached activations from the preceding train-mode forward.
    virtual void backward(const Tensor4T<T>& in, const Tensor4T<T>& out,
                          const Tensor4T<T>& grad_out, Tensor4T<T>& grad_in) = 0;
    virtual std::vector<ParamView<T>> params() { return {}; }
    virtual void init_params(Rng&) {}
};

// ---- convolution ----

template <typename T>
class ConvLayer final : public LayerT<T> {
public:
    explicit ConvLayer(ConvSpec spec) : spec_(spec) {
        require(spec.out_channels >= 1 && spec.in_channels >= 1 && spec.kernel >= 1 &&
                    spec.stride >= 1 && spec.padding >= 0,
                "conv: invalid spec");
        size_t wn = size_t(spec.out_channels) * spec.in_channels * spec.kernel * spec.kernel;
        weight_.assign(wn, T(0));
        wgrad_.assign(wn, T(0));
        bias_.assign(spec.out_channels, T(0));
        bgrad_.assign(spec.out_channels, T(0));
    }

    LayerKind kind() const override { return LayerKind::conv; }
    LayerDesc desc() const override {
        return {LayerKind::conv, spec_.out_channels, spec_.in_channels, spec_.kernel,
                spec_.stride, spec_.padding, 0.0f};
    }
    const ConvSpec& spec() const { return spec_; }

    Shape out_shape(Shape in) const override {
        require(in.c == spec_.in_channels, "conv: channel mismatch");
        int oh = (in.h + 2 * spec_.padding - spec_.kernel) / spec_.stride + 1;
        int ow = (in.w + 2 * spec_.padding - spec_.kernel) / spec_.stride + 1;
        require(in.h + 2 * spec_.padding >= spec_.kernel && in.w + 2 * spec_.padding >= spec_.kernel,
                "conv: kernel exceeds padded input");
        return {spec_.out_channels, oh, ow};
    }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override {
        Shape os = out_shape({in.c, in.h, in.w});
        out = Tensor4T<T>(in.n, os.c, os.h, os.w);
        const int ohw = os.h * os.w;
        const int krows = spec_.in_channels * spec_.kernel * spec_.kernel;
        std::vector<T> col(size_t(krows) * ohw);
        for (int s = 0; s < in.n; ++s) {
            im2col(in.sample(s), in.c, in.h, in.w, os.h, os.w, col.data());
            T* o = out.sample(s);
            for (int k = 0; k < spec_.out_channels; ++k) {
                T b = bias_[k];
                T* row = o + size_t(k) * ohw;
                for (int j = 0; j < ohw; ++j) row[j] = b;
            }
            gemm_nn(spec_.out_channels, krows, ohw, weight_.data(), col.data(), o);
        }
    }

    void backward(const Tensor4T<T>& in, const Tensor4T<T>& out, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = Tensor4T<T>(in.n, in.c, in.h, in.w);
        const int ohw = out.h * out.w;
        const int krows = spec_.in_channels * spec_.kernel * spec_.kernel;
        std::vector<T> col(size_t(krows) * ohw);
        std::vector<T> dcol(size_t(krows) * ohw);
        for (int s = 0; s < in.n; ++s) {
            const T* g = grad_out.sample(s);
            im2col(in.sample(s), in.c, in.h, in.w, out.h, out.w, col.data());
            // dW += g * col^T ; db += row sums of g
            gemm_nt(spec_.out_channels, ohw, krows, g, col.data(), wgrad_.data());
            for (int k = 0; k < spec_.out_channels; ++k) {
                T acc = T(0);
                const T* row = g + size_t(k) * ohw;
                for (int j = 0; j < ohw; ++j) acc += row[j];
                bgrad_[k] += acc;
            }
            // dcol = W^T * g, scattered back to the input raster
            std::fill(dcol.begin(), dcol.end(), T(0));
            gemm_tn(krows, spec_.out_channels, ohw, weight_.data(), g, dcol.data());
            col2im(dcol.data(), in.c, in.h, in.w, out.h, out.w, grad_in.sample(s));
        }
    }

    std::vector<ParamView<T>> params() override {
        return {{&weight_, &wgrad_, "weight"}, {&bias_, &bgrad_, "bias"}};
    }

    void init_params(Rng& rng) override {
        double fan_in = double(spec_.in_channels) * spec_.kernel * spec_.kernel;
        double bound = std::sqrt(6.0 / fan_in);
        for (auto& v : weight_) v = T(rng.uniform(-bound, bound));
        std::fill(bias_.begin(), bias_.end(), T(0));
    }

    std::vector<T>& weight() { return weight_; }
    std::vector<T>& bias() { return bias_; }

private:
    void im2col(const T* src, int c, int h, int w, int oh, int ow, T* col) const {
        const int kk = spec_.kernel, st = spec_.stride, pd = spec_.padding;
        size_t r = 0;
        for (int ci = 0; ci < c; ++ci)
            for (int fy = 0; fy < kk; ++fy)
                for (int fx = 0; fx < kk; ++fx, ++r) {
                    T* dst = col + r * size_t(oh) * ow;
                    const T* plane = src + size_t(ci) * h * w;
                    for (int oy = 0; oy < oh; ++oy) {
                        int iy = oy * st - pd + fy;
                        T* drow = dst + size_t(oy) * ow;
                        if (iy < 0 || iy >= h) {
                            for (int ox = 0; ox < ow; ++ox) drow[ox] = T(0);
                            continue;
                        }
                        const T* srow = plane + size_t(iy) * w;
                        for (int ox = 0; ox < ow; ++ox) {
                            int ix = ox * st - pd + fx;
                            drow[ox] = (ix >= 0 && ix < w) ? srow[ix] : T(0);
                        }
                    }
                }
    }

    void col2im(const T* col, int c, int h, int w, int oh, int ow, T* dst) const {
        const int kk = spec_.kernel, st = spec_.stride, pd = spec_.padding;
        size_t r = 0;
        for (int ci = 0; ci < c; ++ci)
            for (int fy = 0; fy < kk; ++fy)
                for (int fx = 0; fx < kk; ++fx, ++r) {
                    const T* src = col + r * size_t(oh) * ow;
                    T* plane = dst + size_t(ci) * h * w;
                    for (int oy = 0; oy < oh; ++oy) {
                        int iy = oy * st - pd + fy;
                        if (iy < 0 || iy >= h) continue;
                        const T* srow = src + size_t(oy) * ow;
                        T* drow = plane + size_t(iy) * w;
                        for (int ox = 0; ox < ow; ++ox) {
                            int ix = ox * st - pd + fx;
                            if (ix >= 0 && ix < w) drow[ix] += srow[ox];
                        }
                    }
                }
    }

    ConvSpec spec_;
    std::vector<T> weight_, wgrad_, bias_, bgrad_;
};

// ---- elementwise activations ----

template <typename T>
class ReluLayer final : public LayerT<T> {
public:
    LayerKind kind() const override { return LayerKind::relu; }
    LayerDesc desc() const override { return {LayerKind::relu}; }
    Shape out_shape(Shape in) const override { return in; }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override {
        out = in;
        for (auto& v : out.data) v = v > T(0) ? v : T(0);
    }
    void backward(const Tensor4T<T>& in, const Tensor4T<T>&, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = grad_out;
        for (size_t i = 0; i < grad_in.data.size(); ++i)
            if (in.data[i] <= T(0)) grad_in.data[i] = T(0);
    }
};

template <typename T>
class LeakyReluLayer final : public LayerT<T> {
public:
    explicit LeakyReluLayer(T slope) : slope_(slope) {}
    LayerKind kind() const override { return LayerKind::leaky_relu; }
    LayerDesc desc() const override { return {LayerKind::leaky_relu, 0, 0, 0, 0, 0, float(slope_)}; }
    Shape out_shape(Shape in) const override { return in; }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override {
        out = in;
        for (auto& v : out.data)
            if (v < T(0)) v *= slope_;
    }
    void backward(const Tensor4T<T>& in, const Tensor4T<T>&, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = grad_out;
        for (size_t i = 0; i < grad_in.data.size(); ++i)
            if (in.data[i] < T(0)) grad_in.data[i] *= slope_;
    }

private:
    T slope_;
};

// Per-channel learnable negative slope.
template <typename T>
class PreluLayer final : public LayerT<T> {
public:
    explicit PreluLayer(int channels, T init = T(0.25))
        : channels_(channels), alpha_(channels, init), agrad_(channels, T(0)) {}

    LayerKind kind() const override { return LayerKind::prelu; }
    LayerDesc desc() const override { return {LayerKind::prelu, channels_}; }
    Shape out_shape(Shape in) const override {
        require(in.c == channels_, "prelu: channel mismatch");
        return in;
    }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override {
        out = in;
        const size_t plane = in.plane();
        for (int s = 0; s < in.n; ++s)
            for (int ci = 0; ci < in.c; ++ci) {
                T a = alpha_[ci];
                T* p = out.sample(s) + size_t(ci) * plane;
                for (size_t i = 0; i < plane; ++i)
                    if (p[i] < T(0)) p[i] *= a;
            }
    }
    void backward(const Tensor4T<T>& in, const Tensor4T<T>&, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = grad_out;
        const size_t plane = in.plane();
        for (int s = 0; s < in.n; ++s)
            for (int ci = 0; ci < in.c; ++ci) {
                T a = alpha_[ci];
                const T* x = in.sample(s) + size_t(ci) * plane;
                const T* g = grad_out.sample(s) + size_t(ci) * plane;
                T* gi = grad_in.sample(s) + size_t(ci) * plane;
                T da = T(0);
                for (size_t i = 0; i < plane; ++i)
                    if (x[i] < T(0)) {
                        da += g[i] * x[i];
                        gi[i] = g[i] * a;
                    }
                agrad_[ci] += da;
            }
    }

    std::vector<ParamView<T>> params() override { return {{&alpha_, &agrad_, "alpha"}}; }

private:
    int channels_;
    std::vector<T> alpha_, agrad_;
};

template <typename T>
class SigmoidLayer final : public LayerT<T> {
public:
    LayerKind kind() const override { return LayerKind::sigmoid; }
    LayerDesc desc() const override { return {LayerKind::sigmoid}; }
    Shape out_shape(Shape in) const override { return in; }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override {
        out = in;
        for (auto& v : out.data) v = T(1) / (T(1) + std::exp(-v));
    }
    void backward(const Tensor4T<T>&, const Tensor4T<T>& out, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = grad_out;
        for (size_t i = 0; i < grad_in.data.size(); ++i) {
            T y = out.data[i];
            grad_in.data[i] *= y * (T(1) - y);
        }
    }
};

// ---- batch normalization (per channel over batch and space) ----

template <typename T>
class BatchNormLayer final : public LayerT<T> {
public:
    explicit BatchNormLayer(int channels, T eps = T(1e-5), T momentum = T(0.9))
        : channels_(channels), eps_(eps), momentum_(momentum),
          gamma_(channels, T(1)), ggrad_(channels, T(0)),
          beta_(channels, T(0)), bgrad_(channels, T(0)),
          run_mean_(channels, T(0)), run_var_(channels, T(1)) {
        require(eps > T(0), "batch_norm: eps must be positive");
    }

    LayerKind kind() const override { return LayerKind::batch_norm; }
    LayerDesc desc() const override { return {LayerKind::batch_norm, channels_}; }
    Shape out_shape(Shape in) const override {
        require(in.c == channels_, "batch_norm: channel mismatch");
        return in;
    }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode mode) override {
        out = in;
        const size_t plane = in.plane();
        const double count = double(in.n) * double(plane);
        if (mode == Mode::train) {
            mu_.assign(channels_, T(0));
            inv_std_.assign(channels_, T(0));
            for (int ci = 0; ci < channels_; ++ci) {
                double sum = 0, sq = 0;
                for (int s = 0; s < in.n; ++s) {
                    const T* p = in.sample(s) + size_t(ci) * plane;
                    for (size_t i = 0; i < plane; ++i) {
                        sum += double(p[i]);
                        sq += double(p[i]) * double(p[i]);
                    }
                }
                double mean = sum / count;
                double var = std::max(sq / count - mean * mean, 0.0);
                mu_[ci] = T(mean);
                inv_std_[ci] = T(1.0 / std::sqrt(var + double(eps_)));
                run_mean_[ci] = momentum_ * run_mean_[ci] + (T(1) - momentum_) * T(mean);
                run_var_[ci] = momentum_ * run_var_[ci] + (T(1) - momentum_) * T(var);
            }
            apply(out, mu_, inv_std_);
        } else {
            std::vector<T> inv(channels_);
            for (int ci = 0; ci < channels_; ++ci)
                inv[ci] = T(1.0 / std::sqrt(double(run_var_[ci]) + double(eps_)));
            apply(out, run_mean_, inv);
        }
    }

    void backward(const Tensor4T<T>& in, const Tensor4T<T>&, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        require(!mu_.empty(), "batch_norm: backward without train-mode forward");
        grad_in = Tensor4T<T>(in.n, in.c, in.h, in.w);
        const size_t plane = in.plane();
        const double count = double(in.n) * double(plane);
        for (int ci = 0; ci < channels_; ++ci) {
            double dg = 0, db = 0;
            for (int s = 0; s < in.n; ++s) {
                const T* x = in.sample(s) + size_t(ci) * plane;
                const T* g = grad_out.sample(s) + size_t(ci) * plane;
                for (size_t i = 0; i < plane; ++i) {
                    double xh = (double(x[i]) - double(mu_[ci])) * double(inv_std_[ci]);
                    dg += double(g[i]) * xh;
                    db += double(g[i]);
                }
            }
            ggrad_[ci] += T(dg);
            bgrad_[ci] += T(db);
            const double scale = double(gamma_[ci]) * double(inv_std_[ci]) / count;
            for (int s = 0; s < in.n; ++s) {
                const T* x = in.sample(s) + size_t(ci) * plane;
                const T* g = grad_out.sample(s) + size_t(ci) * plane;
                T* gi = grad_in.sample(s) + size_t(ci) * plane;
                for (size_t i = 0; i < plane; ++i) {
                    double xh = (double(x[i]) - double(mu_[ci])) * double(inv_std_[ci]);
                    gi[i] = T(scale * (count * double(g[i]) - db - xh * dg));
                }
            }
        }
    }

    std::vector<ParamView<T>> params() override {
        return {{&gamma_, &ggrad_, "gamma"},
                {&beta_, &bgrad_, "beta"},
                {&run_mean_, nullptr, "running_mean"},
                {&run_var_, nullptr, "running_var"}};
    }

private:
    void apply(Tensor4T<T>& out, const std::vector<T>& mean, const std::vector<T>& inv) {
        const size_t plane = out.plane();
        for (int s = 0; s < out.n; ++s)
            for (int ci = 0; ci < channels_; ++ci) {
                T* p = out.sample(s) + size_t(ci) * plane;
                T m = mean[ci], iv = inv[ci], g = gamma_[ci], b = beta_[ci];
                for (size_t i = 0; i < plane; ++i) p[i] = (p[i] - m) * iv * g + b;
            }
    }

    int channels_;
    T eps_, momentum_;
    std::vector<T> gamma_, ggrad_, beta_, bgrad_, run_mean_, run_var_;
    std::vector<T> mu_, inv_std_; // batch statistics cached for backward
};

// ---- structural layers ----

// Marker layer; the network adds the source activation to this layer's input.
template <typename T>
class ResidualAddLayer final : public LayerT<T> {
public:
    explicit ResidualAddLayer(int source) : source_(source) {
        require(source >= 0, "residual_add: bad source index");
    }
    LayerKind kind() const override { return LayerKind::residual_add; }
    LayerDesc desc() const override { return {LayerKind::residual_add, source_}; }
    int source() const { return source_; }
    Shape out_shape(Shape in) const override { return in; }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override { out = in; }
    void backward(const Tensor4T<T>&, const Tensor4T<T>&, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = grad_out;
    }

private:
    int source_;
};

// Depth-to-space: (n, c*r^2, h, w) -> (n, c, h*r, w*r).
template <typename T>
class PixelShuffleLayer final : public LayerT<T> {
public:
    explicit PixelShuffleLayer(int r) : r_(r) { require(r >= 1, "pixel_shuffle: bad factor"); }
    LayerKind kind() const override { return LayerKind::pixel_shuffle; }
    LayerDesc desc() const override { return {LayerKind::pixel_shuffle, r_}; }
    Shape out_shape(Shape in) const override {
        require(in.c % (r_ * r_) == 0, "pixel_shuffle: channels not divisible by r^2");
        return {in.c / (r_ * r_), in.h * r_, in.w * r_};
    }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override {
        Shape os = out_shape({in.c, in.h, in.w});
        out = Tensor4T<T>(in.n, os.c, os.h, os.w);
        for (int s = 0; s < in.n; ++s)
            for (int oc = 0; oc < os.c; ++oc)
                for (int y = 0; y < os.h; ++y)
                    for (int x = 0; x < os.w; ++x)
                        out.at(s, oc, y, x) =
                            in.at(s, oc * r_ * r_ + (y % r_) * r_ + (x % r_), y / r_, x / r_);
    }
    void backward(const Tensor4T<T>& in, const Tensor4T<T>&, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = Tensor4T<T>(in.n, in.c, in.h, in.w);
        for (int s = 0; s < grad_out.n; ++s)
            for (int oc = 0; oc < grad_out.c; ++oc)
                for (int y = 0; y < grad_out.h; ++y)
                    for (int x = 0; x < grad_out.w; ++x)
                        grad_in.at(s, oc * r_ * r_ + (y % r_) * r_ + (x % r_), y / r_, x / r_) =
                            grad_out.at(s, oc, y, x);
    }

private:
    int r_;
};

// Fully connected over the flattened (c,h,w) features; output (n, units, 1, 1).
template <typename T>
class DenseLayer final : public LayerT<T> {
public:
    DenseLayer(int in_features, int units) : in_features_(in_features), units_(units) {
        require(in_features >= 1 && units >= 1, "dense: invalid sizes");
        weight_.assign(size_t(units) * in_features, T(0));
        wgrad_.assign(weight_.size(), T(0));
        bias_.assign(units, T(0));
        bgrad_.assign(units, T(0));
    }

    LayerKind kind() const override { return LayerKind::dense; }
    LayerDesc desc() const override { return {LayerKind::dense, in_features_, units_}; }
    Shape out_shape(Shape in) const override {
        require(in.c * in.h * in.w == in_features_, "dense: feature count mismatch");
        return {units_, 1, 1};
    }

    void forward(const Tensor4T<T>& in, Tensor4T<T>& out, Mode) override {
        require(int(in.sample_stride()) == in_features_, "dense: feature count mismatch");
        out = Tensor4T<T>(in.n, units_, 1, 1);
        for (int s = 0; s < in.n; ++s)
            for (int u = 0; u < units_; ++u) out.at(s, u, 0, 0) = bias_[u];
        gemm_nt(in.n, in_features_, units_, in.data.data(), weight_.data(), out.data.data());
    }
    void backward(const Tensor4T<T>& in, const Tensor4T<T>&, const Tensor4T<T>& grad_out,
                  Tensor4T<T>& grad_in) override {
        grad_in = Tensor4T<T>(in.n, in.c, in.h, in.w);
        // dW += g^T * x, db += column sums, dx = g * W
        gemm_tn(units_, in.n, in_features_, grad_out.data.data(), in.data.data(), wgrad_.data());
        for (int s = 0; s < in.n; ++s)
            for (int u = 0; u < units_; ++u) bgrad_[u] += grad_out.at(s, u, 0, 0);
        gemm_nn(in.n, units_, in_features_, grad_out.data.data(), weight_.data(),
                grad_in.data.data());
    }

    std::vector<ParamView<T>> params() override {
        return {{&weight_, &wgrad_, "weight"}, {&bias_, &bgrad_, "bias"}};
    }

    void init_params(Rng& rng) override {
        double bound = std::sqrt(6.0 / double(in_features_));
        for (auto& v : weight_) v = T(rng.uniform(-bound, bound));
        std::fill(bias_.begin(), bias_.end(), T(0));
    }

private:
    int in_features_, units_;
    std::vector<T> weight_, wgrad_, bias_, bgrad_;
};

} // namespace irissr::nn
