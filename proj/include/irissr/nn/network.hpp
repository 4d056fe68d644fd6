#pragma once

#include <memory>
#include <vector>

#include "irissr/nn/layers.hpp"

namespace irissr::nn {

// A linear chain of layers with optional skip connections. Skips are declared
// by residual_add layers whose `source` names an activation index: activation
// 0 is the network input, activation i+1 is the output of layer i.
template <typename T>
class NetworkT {
public:
    NetworkT() = default;
    NetworkT(NetworkT&&) noexcept = default;
    NetworkT& operator=(NetworkT&&) noexcept = default;

    NetworkT& add(std::unique_ptr<LayerT<T>> layer) {
        if (auto* res = dynamic_cast<ResidualAddLayer<T>*>(layer.get()))
            require(res->source() <= int(layers_.size()), "residual_add: source not yet produced");
        layers_.push_back(std::move(layer));
        return *this;
    }

    NetworkT& conv(int out_ch, int in_ch, int kernel, int stride = 1, int padding = 0) {
        return add(std::make_unique<ConvLayer<T>>(ConvSpec{out_ch, in_ch, kernel, stride, padding}));
    }
    NetworkT& relu() { return add(std::make_unique<ReluLayer<T>>()); }
    NetworkT& prelu(int channels, T init = T(0.25)) {
        return add(std::make_unique<PreluLayer<T>>(channels, init));
    }
    NetworkT& leaky_relu(T slope) { return add(std::make_unique<LeakyReluLayer<T>>(slope)); }
    NetworkT& batch_norm(int channels) { return add(std::make_unique<BatchNormLayer<T>>(channels)); }
    NetworkT& residual_add(int source) {
        return add(std::make_unique<ResidualAddLayer<T>>(source));
    }
    NetworkT& pixel_shuffle(int r) { return add(std::make_unique<PixelShuffleLayer<T>>(r)); }
    NetworkT& dense(int in_features, int units) {
        return add(std::make_unique<DenseLayer<T>>(in_features, units));
    }
    NetworkT& sigmoid() { return add(std::make_unique<SigmoidLayer<T>>()); }

    size_t layer_count() const { return layers_.size(); }
    LayerT<T>& layer(size_t i) { return *layers_[i]; }
    const LayerT<T>& layer(size_t i) const { return *layers_[i]; }

    // Index of the next activation to be produced; useful when declaring skips
    // while building: residual_add(source) with source = activation_cursor()
    // taken before adding the skipped block.
    int activation_cursor() const { return int(layers_.size()); }

    void init_he(Rng& rng) {
        for (auto& l : layers_) l->init_params(rng);
    }

    std::vector<ParamView<T>> params() {
        std::vector<ParamView<T>> out;
        for (auto& l : layers_)
            for (auto& p : l->params()) out.push_back(p);
        return out;
    }

    // Learnable parameters only (buffers like running statistics excluded).
    size_t param_count() {
        size_t n = 0;
        for (auto& p : params())
            if (p.grad) n += p.value->size();
        return n;
    }

    Shape infer_shape(Shape in) const {
        std::vector<Shape> shapes{in};
        for (auto& l : layers_) {
            Shape s = l->out_shape(shapes.back());
            if (auto* res = dynamic_cast<ResidualAddLayer<T>*>(l.get()))
                require(shapes[size_t(res->source())] == s,
                        "residual_add: endpoint shapes differ");
            shapes.push_back(s);
        }
        return shapes.back();
    }

    Tensor4T<T> forward(const Tensor4T<T>& input, Mode mode) {
        input.check_finite("forward input");
        infer_shape({input.c, input.h, input.w}); // validates chain + skips
        const bool train = mode == Mode::train;

        // In infer mode only activations referenced as skip sources are kept.
        std::vector<char> needed(layers_.size() + 1, 0);
        for (auto& l : layers_)
            if (auto* res = dynamic_cast<ResidualAddLayer<T>*>(l.get()))
                needed[size_t(res->source())] = 1;

        acts_.clear();
        std::vector<Tensor4T<T>> skip_cache(train ? 0 : layers_.size() + 1);

        Tensor4T<T> cur = input;
        if (train)
            acts_.push_back(cur);
        else if (needed[0])
            skip_cache[0] = cur;

        Tensor4T<T> next;
        for (size_t i = 0; i < layers_.size(); ++i) {
            auto& l = *layers_[i];
            l.forward(cur, next, mode);
            if (auto* res = dynamic_cast<ResidualAddLayer<T>*>(&l)) {
                const Tensor4T<T>& src =
                    train ? acts_[size_t(res->source())] : skip_cache[size_t(res->source())];
                require(next.same_shape(src), "residual_add: shape mismatch");
                for (size_t j = 0; j < next.data.size(); ++j) next.data[j] += src.data[j];
            }
            next.check_finite(layer_kind_name(l.kind()));
            cur = std::move(next);
            if (train)
                acts_.push_back(cur);
            else if (needed[i + 1])
                skip_cache[i + 1] = cur;
        }
        trained_forward_ = train;
        return cur;
    }

    // Accumulates parameter gradients, returns the gradient w.r.t. the input.
    // Requires a prior train-mode forward.
    Tensor4T<T> backward(const Tensor4T<T>& upstream) {
        require(trained_forward_ && acts_.size() == layers_.size() + 1,
                "backward without prior train-mode forward");
        require(upstream.same_shape(acts_.back()), "backward: upstream shape mismatch");

        std::vector<Tensor4T<T>> grads(acts_.size());
        grads.back() = upstream;
        for (size_t i = layers_.size(); i-- > 0;) {
            auto& l = *layers_[i];
            Tensor4T<T>& gout = grads[i + 1];
            if (gout.data.empty()) // activation never consumed (cannot happen in a chain)
                gout = Tensor4T<T>(acts_[i + 1].n, acts_[i + 1].c, acts_[i + 1].h, acts_[i + 1].w);
            Tensor4T<T> gin;
            l.backward(acts_[i], acts_[i + 1], gout, gin);
            if (auto* res = dynamic_cast<ResidualAddLayer<T>*>(&l)) {
                auto& skip = grads[size_t(res->source())];
                if (skip.data.empty())
                    skip = gout;
                else
                    for (size_t j = 0; j < skip.data.size(); ++j) skip.data[j] += gout.data[j];
            }
            if (grads[i].data.empty())
                grads[i] = std::move(gin);
            else
                for (size_t j = 0; j < grads[i].data.size(); ++j) grads[i].data[j] += gin.data[j];
        }
        grads_populated_ = true;
        return std::move(grads[0]);
    }

    bool gradients_populated() const { return grads_populated_; }

    // Activations cached by the last train-mode forward (index 0 = input).
    const std::vector<Tensor4T<T>>& cached_activations() const { return acts_; }

    void zero_grads() {
        for (auto& p : params())
            if (p.grad) std::fill(p.grad->begin(), p.grad->end(), T(0));
        grads_populated_ = false;
    }

    std::vector<LayerDesc> describe() const {
        std::vector<LayerDesc> d;
        for (auto& l : layers_) d.push_back(l->desc());
        return d;
    }

private:
    std::vector<std::unique_ptr<LayerT<T>>> layers_;
    std::vector<Tensor4T<T>> acts_;
    bool trained_forward_ = false;
    bool grads_populated_ = false;
};

using Network = NetworkT<float>;

// Builds a layer from its serialized description.
template <typename T>
std::unique_ptr<LayerT<T>> layer_from_desc(const LayerDesc& d) {
    switch (d.kind) {
        case LayerKind::conv:
            return std::make_unique<ConvLayer<T>>(ConvSpec{d.i0, d.i1, d.i2, d.i3, d.i4});
        case LayerKind::relu: return std::make_unique<ReluLayer<T>>();
        case LayerKind::prelu: return std::make_unique<PreluLayer<T>>(d.i0);
        case LayerKind::leaky_relu: return std::make_unique<LeakyReluLayer<T>>(T(d.f0));
        case LayerKind::batch_norm: return std::make_unique<BatchNormLayer<T>>(d.i0);
        case LayerKind::residual_add: return std::make_unique<ResidualAddLayer<T>>(d.i0);
        case LayerKind::pixel_shuffle: return std::make_unique<PixelShuffleLayer<T>>(d.i0);
        case LayerKind::dense: return std::make_unique<DenseLayer<T>>(d.i0, d.i1);
        case LayerKind::sigmoid: return std::make_unique<SigmoidLayer<T>>();
    }
    throw Error("unknown layer kind");
}

} // namespace irissr::nn
