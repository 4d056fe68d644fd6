#pragma once

#include "irissr/nn/network.hpp"

namespace irissr::nn {

struct SGDConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;     // in [0,1)
    double weight_decay = 0.0;
    double grad_clip = 0.0;    // per-tensor L2 norm clip; <= 0 disables
    int batch_size = 16;
    int epochs = 1;
    uint64_t seed = 1;

    void validate() const {
        require(learning_rate > 0, "sgd: learning_rate must be positive");
        require(momentum >= 0 && momentum < 1, "sgd: momentum must be in [0,1)");
        require(weight_decay >= 0, "sgd: weight_decay must be >= 0");
        require(batch_size >= 1 && epochs >= 1, "sgd: batch_size and epochs must be >= 1");
    }
};

template <typename T>
struct LossResult {
    double value = 0.0;
    Tensor4T<T> grad;
};

// loss = mean (pred - target)^2, grad = 2 (pred - target) / N.
template <typename T>
LossResult<T> mse_loss(const Tensor4T<T>& pred, const Tensor4T<T>& target) {
    require(pred.same_shape(target), "mse_loss: shape mismatch");
    LossResult<T> r;
    r.grad = Tensor4T<T>(pred.n, pred.c, pred.h, pred.w);
    const double inv_n = 1.0 / double(pred.size());
    double acc = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        double d = double(pred.data[i]) - double(target.data[i]);
        acc += d * d;
        r.grad.data[i] = T(2.0 * d * inv_n);
    }
    r.value = acc * inv_n;
    return r;
}

// Mean binary cross-entropy over a batch of probabilities (n,1,1,1).
// Probabilities are clamped to [1e-7, 1-1e-7] before the log.
template <typename T>
LossResult<T> bce_loss(const Tensor4T<T>& pred_prob, const std::vector<int>& labels) {
    require(pred_prob.c == 1 && pred_prob.h == 1 && pred_prob.w == 1,
            "bce_loss: expected (n,1,1,1) probabilities");
    require(labels.size() == size_t(pred_prob.n), "bce_loss: label count mismatch");
    constexpr double kEps = 1e-7;
    LossResult<T> r;
    r.grad = Tensor4T<T>(pred_prob.n, 1, 1, 1);
    const double inv_n = 1.0 / double(pred_prob.n);
    double acc = 0.0;
    for (int i = 0; i < pred_prob.n; ++i) {
        require(labels[i] == 0 || labels[i] == 1, "bce_loss: label outside {0,1}");
        double p = std::clamp(double(pred_prob.data[i]), kEps, 1.0 - kEps);
        double y = labels[i];
        acc += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        r.grad.data[i] = T((-y / p + (1.0 - y) / (1.0 - p)) * inv_n);
    }
    r.value = acc * inv_n;
    return r;
}

// Same objective against pre-sigmoid logits; gradient in the combined
// (sigmoid(z) - y) / n form.
template <typename T>
LossResult<T> bce_loss_logits(const Tensor4T<T>& logits, const std::vector<int>& labels) {
    require(logits.c == 1 && logits.h == 1 && logits.w == 1,
            "bce_loss_logits: expected (n,1,1,1) logits");
    require(labels.size() == size_t(logits.n), "bce_loss_logits: label count mismatch");
    LossResult<T> r;
    r.grad = Tensor4T<T>(logits.n, 1, 1, 1);
    const double inv_n = 1.0 / double(logits.n);
    double acc = 0.0;
    for (int i = 0; i < logits.n; ++i) {
        require(labels[i] == 0 || labels[i] == 1, "bce_loss_logits: label outside {0,1}");
        double z = logits.data[i];
        double y = labels[i];
        // log(1 + e^z) computed stably for either sign
        double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        acc += softplus - y * z;
        double s = 1.0 / (1.0 + std::exp(-z));
        r.grad.data[i] = T((s - y) * inv_n);
    }
    r.value = acc * inv_n;
    return r;
}

// Momentum SGD with optional weight decay and per-tensor gradient norm
// clipping: v <- m*v - lr*(g + wd*w); w <- w + v. Clears gradients after
// the update.
template <typename T>
class Sgd {
public:
    explicit Sgd(SGDConfig cfg) : cfg_(cfg) { cfg.validate(); }

    const SGDConfig& config() const { return cfg_; }

    // For schedules (warmup); velocity is preserved.
    void set_learning_rate(double lr) {
        require(lr > 0, "sgd: learning_rate must be positive");
        cfg_.learning_rate = lr;
    }

    void step(NetworkT<T>& net) {
        require(net.gradients_populated(), "sgd: update on empty gradients");
        auto params = net.params();
        if (velocity_.empty()) {
            for (auto& p : params)
                velocity_.push_back(std::vector<T>(p.grad ? p.value->size() : 0, T(0)));
        }
        require(velocity_.size() == params.size(), "sgd: parameter set changed");
        for (size_t i = 0; i < params.size(); ++i) {
            auto& p = params[i];
            if (!p.grad) continue; // buffers (running statistics)
            std::vector<T>& w = *p.value;
            std::vector<T>& g = *p.grad;
            std::vector<T>& v = velocity_[i];
            double scale = 1.0;
            if (cfg_.grad_clip > 0) {
                double norm2 = 0;
                for (T x : g) norm2 += double(x) * double(x);
                double norm = std::sqrt(norm2);
                if (norm > cfg_.grad_clip) scale = cfg_.grad_clip / norm;
            }
            for (size_t j = 0; j < w.size(); ++j) {
                double grad = double(g[j]) * scale + cfg_.weight_decay * double(w[j]);
                v[j] = T(cfg_.momentum * double(v[j]) - cfg_.learning_rate * grad);
                w[j] += v[j];
            }
        }
        net.zero_grads();
    }

private:
    SGDConfig cfg_;
    std::vector<std::vector<T>> velocity_;
};

} // namespace irissr::nn
