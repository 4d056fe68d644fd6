#include "irissr/sr/engine.hpp"

#include <cmath>
#include <fstream>

#include "irissr/nn/serialize.hpp"
#include "irissr/resize.hpp"

namespace irissr::sr {

using nn::Mode;
using nn::Network;
using nn::Tensor4;

const char* engine_kind_name(EngineKind k) {
    switch (k) {
        case EngineKind::bilinear: return "bilinear";
        case EngineKind::bicubic: return "bicubic";
        case EngineKind::srcnn: return "srcnn";
        case EngineKind::vdcnn: return "vdcnn";
        case EngineKind::srgan: return "srgan";
        case EngineKind::pca_eigenpatch: return "pca";
    }
    return "unknown";
}

EngineKind engine_kind_from_name(const std::string& name) {
    for (EngineKind k : {EngineKind::bilinear, EngineKind::bicubic, EngineKind::srcnn,
                         EngineKind::vdcnn, EngineKind::srgan, EngineKind::pca_eigenpatch})
        if (name == engine_kind_name(k)) return k;
    throw Error("unknown engine kind: " + name);
}

// ---- SREngine ----

SREngine SREngine::interpolation(EngineKind kind) {
    require(kind == EngineKind::bilinear || kind == EngineKind::bicubic,
            "interpolation engine must be bilinear or bicubic");
    SREngine e;
    e.kind_ = kind;
    return e;
}

SREngine SREngine::from_network(EngineKind kind, Network net, std::vector<int> factors,
                                std::vector<double> loss_history, Provenance prov) {
    require(kind == EngineKind::srcnn || kind == EngineKind::vdcnn || kind == EngineKind::srgan,
            "network engine kind mismatch");
    require(!factors.empty(), "network engine needs at least one trained factor");
    SREngine e;
    e.kind_ = kind;
    e.net_ = std::move(net);
    e.factors_ = std::move(factors);
    e.loss_history_ = std::move(loss_history);
    e.provenance_ = std::move(prov);
    return e;
}

SREngine SREngine::from_pca(PCAEigenPatchModel model, Provenance prov) {
    SREngine e;
    e.kind_ = EngineKind::pca_eigenpatch;
    e.factors_ = {model.factor};
    e.pca_ = std::move(model);
    e.provenance_ = std::move(prov);
    return e;
}

bool SREngine::supports(int factor) const {
    if (!trainable()) return factor >= 1;
    for (int f : factors_)
        if (f == factor) return true;
    return false;
}

Network& SREngine::network() const {
    require(net_.has_value(), "engine carries no network payload");
    return *net_;
}

const PCAEigenPatchModel& SREngine::pca() const {
    require(pca_.has_value(), "engine carries no PCA payload");
    return *pca_;
}

// ---- builders ----

Network build_srcnn() {
    Network net;
    net.conv(64, 1, 9, 1, 0).relu().conv(32, 64, 1, 1, 0).relu().conv(1, 32, 5, 1, 0);
    return net;
}

Network build_vdcnn(int depth) {
    require(depth >= 3, "vdcnn: depth must be >= 3");
    Network net;
    net.conv(64, 1, 3, 1, 1).relu();
    for (int i = 0; i < depth - 2; ++i) net.conv(64, 64, 3, 1, 1).relu();
    net.conv(1, 64, 3, 1, 1);
    return net;
}

SrganNets build_srgan(int n_res_blocks, int hr_size) {
    require(n_res_blocks >= 1, "srgan: need at least one residual block");
    require(hr_size >= 16 && hr_size % 16 == 0, "srgan: hr_size must be a multiple of 16");

    SrganNets nets;
    Network& g = nets.generator;
    g.conv(64, 1, 9, 1, 4).prelu(64);
    const int head_out = g.activation_cursor();
    for (int b = 0; b < n_res_blocks; ++b) {
        const int block_in = g.activation_cursor();
        g.conv(64, 64, 3, 1, 1).batch_norm(64).prelu(64).conv(64, 64, 3, 1, 1).batch_norm(64);
        g.residual_add(block_in);
    }
    g.conv(64, 64, 3, 1, 1).batch_norm(64).residual_add(head_out);
    for (int up = 0; up < 2; ++up) g.conv(256, 64, 3, 1, 1).pixel_shuffle(2).prelu(64);
    g.conv(1, 64, 9, 1, 4);

    Network& d = nets.discriminator;
    const float slope = 0.2f;
    int ch = 64, in = 1, size = hr_size;
    for (int i = 0; i < 8; ++i) {
        int stride = (i % 2 == 0) ? 1 : 2; // channel doubles 64 -> 512, stride alternates
        d.conv(ch, in, 3, stride, 1).leaky_relu(slope);
        if (stride == 2) size = (size + 2 - 3) / 2 + 1;
        in = ch;
        if (i % 2 == 1) ch *= 2;
    }
    d.dense(512 * size * size, 1).sigmoid();
    return nets;
}

// ---- training ----

nn::SGDConfig default_srcnn_config() {
    return {.learning_rate = 0.05, .momentum = 0.9, .weight_decay = 0.0, .grad_clip = 1.0,
            .batch_size = 8, .epochs = 100, .seed = 1};
}

nn::SGDConfig default_vdcnn_config() {
    return {.learning_rate = 0.1, .momentum = 0.9, .weight_decay = 0.0, .grad_clip = 1.0,
            .batch_size = 8, .epochs = 20, .seed = 1};
}

nn::SGDConfig default_srgan_config() {
    return {.learning_rate = 1e-3, .momentum = 0.9, .weight_decay = 0.0, .grad_clip = 1.0,
            .batch_size = 4, .epochs = 5, .seed = 1};
}

namespace {

// Linear ramp from 10% to the configured rate over the first tenth of the
// epochs; a cold random start at full rate can kill the ReLU stack.
double warmup_lr(const nn::SGDConfig& cfg, int epoch) {
    const int warm = std::max(1, cfg.epochs / 10);
    if (epoch >= warm) return cfg.learning_rate;
    return cfg.learning_rate * (0.1 + 0.9 * double(epoch) / double(warm));
}

Tensor4 batch_tensor(const std::vector<TrainingPair>& pairs, const std::vector<size_t>& idx,
                     size_t begin, size_t end, bool hr_side) {
    const GrayImage& first = hr_side ? pairs[idx[begin]].hr_patch : pairs[idx[begin]].lr_patch;
    Tensor4 t(int(end - begin), 1, first.height(), first.width());
    for (size_t b = begin; b < end; ++b) {
        const GrayImage& img = hr_side ? pairs[idx[b]].hr_patch : pairs[idx[b]].lr_patch;
        require(img.width() == first.width() && img.height() == first.height(),
                "training pairs must share patch dimensions");
        std::copy(img.pixels().begin(), img.pixels().end(), t.sample(int(b - begin)));
    }
    return t;
}

void check_hr_sized_pairs(const std::vector<TrainingPair>& pairs) {
    require(!pairs.empty(), "training requires a non-empty pair set");
    for (const auto& p : pairs)
        require(p.lr_patch.width() == p.hr_patch.width() &&
                    p.lr_patch.height() == p.hr_patch.height(),
                "pairs must hold both rasters at HR patch size");
}

std::vector<int> collect_factors(const std::vector<TrainingPair>& pairs) {
    std::vector<int> factors;
    for (const auto& p : pairs)
        if (std::find(factors.begin(), factors.end(), p.factor) == factors.end())
            factors.push_back(p.factor);
    std::sort(factors.begin(), factors.end());
    return factors;
}

} // namespace

SREngine train_srcnn(const std::vector<TrainingPair>& pairs, const TrainOptions& opt) {
    check_hr_sized_pairs(pairs);
    auto factors = collect_factors(pairs);
    require(factors.size() == 1, "srcnn trains a single factor per engine");
    opt.sgd.validate();

    Network net = build_srcnn();
    Rng rng(opt.sgd.seed);
    net.init_he(rng);

    const int p = pairs[0].hr_patch.width();
    nn::Shape out = net.infer_shape({1, p, p});
    require(out.h >= 1, "srcnn: patch too small for the receptive field");
    const int off = (p - out.h) / 2; // center crop of the target

    nn::Sgd<float> sgd(opt.sgd);
    std::vector<size_t> idx(pairs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    std::vector<double> history;
    for (int epoch = 0; epoch < opt.sgd.epochs; ++epoch) {
        sgd.set_learning_rate(warmup_lr(opt.sgd, epoch));
        rng.shuffle(idx);
        double epoch_loss = 0;
        size_t batches = 0;
        for (size_t begin = 0; begin < idx.size(); begin += size_t(opt.sgd.batch_size)) {
            size_t end = std::min(begin + size_t(opt.sgd.batch_size), idx.size());
            Tensor4 input = batch_tensor(pairs, idx, begin, end, false);
            Tensor4 target(int(end - begin), 1, out.h, out.w);
            for (size_t b = begin; b < end; ++b) {
                const GrayImage& hr = pairs[idx[b]].hr_patch;
                for (int y = 0; y < out.h; ++y)
                    for (int x = 0; x < out.w; ++x)
                        target.at(int(b - begin), 0, y, x) = hr.at(off + x, off + y);
            }
            Tensor4 pred = net.forward(input, Mode::train);
            auto loss = nn::mse_loss(pred, target);
            net.backward(loss.grad);
            sgd.step(net);
            epoch_loss += loss.value;
            ++batches;
        }
        history.push_back(epoch_loss / double(batches));
        if (opt.verbose)
            std::fprintf(stderr, "srcnn epoch %d loss %.6g\n", epoch, history.back());
    }
    return SREngine::from_network(EngineKind::srcnn, std::move(net), factors, history,
                                  opt.provenance);
}

SREngine train_vdcnn(const std::vector<TrainingPair>& pairs, const TrainOptions& opt, int depth) {
    check_hr_sized_pairs(pairs);
    auto factors = collect_factors(pairs);
    opt.sgd.validate();

    Network net = build_vdcnn(depth);
    Rng rng(opt.sgd.seed);
    net.init_he(rng);

    nn::Sgd<float> sgd(opt.sgd);
    std::vector<size_t> idx(pairs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    std::vector<double> history;
    for (int epoch = 0; epoch < opt.sgd.epochs; ++epoch) {
        sgd.set_learning_rate(warmup_lr(opt.sgd, epoch));
        rng.shuffle(idx);
        double epoch_loss = 0;
        size_t batches = 0;
        for (size_t begin = 0; begin < idx.size(); begin += size_t(opt.sgd.batch_size)) {
            size_t end = std::min(begin + size_t(opt.sgd.batch_size), idx.size());
            Tensor4 input = batch_tensor(pairs, idx, begin, end, false);
            Tensor4 target = batch_tensor(pairs, idx, begin, end, true);
            for (size_t i = 0; i < target.data.size(); ++i) target.data[i] -= input.data[i];

            Tensor4 pred = net.forward(input, Mode::train);
            auto loss = nn::mse_loss(pred, target);
            net.backward(loss.grad);
            sgd.step(net);
            epoch_loss += loss.value;
            ++batches;
        }
        history.push_back(epoch_loss / double(batches));
        if (opt.verbose)
            std::fprintf(stderr, "vdcnn epoch %d loss %.6g\n", epoch, history.back());
    }
    return SREngine::from_network(EngineKind::vdcnn, std::move(net), factors, history,
                                  opt.provenance);
}

SrganTrainResult train_srgan(const std::vector<TrainingPair>& pairs, const TrainOptions& opt,
                             double adv_weight, int n_res_blocks) {
    require(!pairs.empty(), "training requires a non-empty pair set");
    opt.sgd.validate();
    const int hr_size = pairs[0].hr_patch.width();
    for (const auto& p : pairs) {
        require(p.factor == 4, "srgan trains at factor 4");
        require(p.hr_patch.width() == hr_size && p.hr_patch.height() == hr_size,
                "srgan pairs must share the HR crop size");
        require(p.lr_patch.width() * 4 == hr_size && p.lr_patch.height() * 4 == hr_size,
                "srgan lr raster must be factor 4 smaller");
    }

    SrganNets nets = build_srgan(n_res_blocks, hr_size);
    Rng rng_g(opt.sgd.seed);
    Rng rng_d(opt.sgd.seed + 0x9e37);
    nets.generator.init_he(rng_g);
    nets.discriminator.init_he(rng_d);

    nn::Sgd<float> g_opt(opt.sgd);
    nn::Sgd<float> d_opt(opt.sgd);

    std::vector<size_t> idx(pairs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    std::vector<double> history;
    for (int epoch = 0; epoch < opt.sgd.epochs; ++epoch) {
        g_opt.set_learning_rate(warmup_lr(opt.sgd, epoch));
        d_opt.set_learning_rate(warmup_lr(opt.sgd, epoch));
        rng_g.shuffle(idx);
        double epoch_loss = 0;
        size_t batches = 0;
        for (size_t begin = 0; begin < idx.size(); begin += size_t(opt.sgd.batch_size)) {
            size_t end = std::min(begin + size_t(opt.sgd.batch_size), idx.size());
            const int b = int(end - begin);
            Tensor4 lr = batch_tensor(pairs, idx, begin, end, false);
            Tensor4 hr = batch_tensor(pairs, idx, begin, end, true);
            const std::vector<int> ones(size_t(b), 1), zeros(size_t(b), 0);

            Tensor4 fake = nets.generator.forward(lr, Mode::train);

            Tensor4 adv_grad;
            if (adv_weight > 0) {
                // discriminator: real up, fake down
                auto real_prob = nets.discriminator.forward(hr, Mode::train);
                auto real_loss = nn::bce_loss(real_prob, ones);
                nets.discriminator.backward(real_loss.grad);
                auto fake_prob = nets.discriminator.forward(fake, Mode::train);
                auto fake_loss = nn::bce_loss(fake_prob, zeros);
                nets.discriminator.backward(fake_loss.grad);
                d_opt.step(nets.discriminator);

                // adversarial gradient for the generator (label 1 on fakes)
                auto prob = nets.discriminator.forward(fake, Mode::train);
                auto adv = nn::bce_loss(prob, ones);
                adv_grad = nets.discriminator.backward(adv.grad);
                nets.discriminator.zero_grads();
                epoch_loss += adv_weight * adv.value;
            }

            auto content = nn::mse_loss(fake, hr);
            Tensor4 total = content.grad;
            if (adv_weight > 0)
                for (size_t i = 0; i < total.data.size(); ++i)
                    total.data[i] += float(adv_weight) * adv_grad.data[i];
            nets.generator.backward(total);
            g_opt.step(nets.generator);

            epoch_loss += content.value;
            ++batches;
        }
        history.push_back(epoch_loss / double(batches));
        if (opt.verbose)
            std::fprintf(stderr, "srgan epoch %d loss %.6g\n", epoch, history.back());
    }

    SrganTrainResult result{SREngine::from_network(EngineKind::srgan, std::move(nets.generator),
                                                   {4}, history, opt.provenance),
                            std::move(nets.discriminator)};
    return result;
}

// ---- reconstruction ----

namespace {

Tensor4 image_to_tensor(const GrayImage& img, int pad = 0) {
    Tensor4 t(1, 1, img.height() + 2 * pad, img.width() + 2 * pad);
    for (int y = 0; y < t.h; ++y)
        for (int x = 0; x < t.w; ++x)
            t.at(0, 0, y, x) = img.at_clamped(x - pad, y - pad); // replicate padding
    return t;
}

GrayImage tensor_to_image(const Tensor4& t) {
    require(t.n == 1 && t.c == 1, "tensor_to_image: expected single-channel sample");
    std::vector<float> data(t.data.begin(), t.data.end());
    return GrayImage::from_data_clamped(t.w, t.h, std::move(data));
}

} // namespace

GrayImage super_resolve(const SREngine& engine, const GrayImage& lr, int factor,
                        const SrOptions& opt) {
    require(factor >= 1, "super_resolve: factor must be >= 1");
    const int tw = opt.target_w > 0 ? opt.target_w : lr.width() * factor;
    const int th = opt.target_h > 0 ? opt.target_h : lr.height() * factor;

    switch (engine.kind()) {
        case EngineKind::bilinear: return resize(lr, tw, th, ResizeKernel::bilinear);
        case EngineKind::bicubic: return resize(lr, tw, th, ResizeKernel::bicubic);
        case EngineKind::srcnn: {
            require(engine.supports(factor), "srcnn engine does not support this factor");
            GrayImage up = resize(lr, tw, th, ResizeKernel::bicubic);
            Tensor4 in = image_to_tensor(up, 6); // 9x9 + 5x5 valid margins
            Tensor4 out = engine.network().forward(in, Mode::infer);
            require(out.w == tw && out.h == th, "srcnn: unexpected output size");
            return tensor_to_image(out);
        }
        case EngineKind::vdcnn: {
            require(engine.supports(factor), "vdcnn engine does not support this factor");
            GrayImage up = resize(lr, tw, th, ResizeKernel::bicubic);
            Tensor4 in = image_to_tensor(up);
            Tensor4 residual = engine.network().forward(in, Mode::infer);
            for (size_t i = 0; i < residual.data.size(); ++i) residual.data[i] += in.data[i];
            return tensor_to_image(residual);
        }
        case EngineKind::srgan: {
            if (factor != 4 && opt.warning)
                *opt.warning = "srgan engine trained at factor 4; rescaling its x4 output";
            Tensor4 in = image_to_tensor(lr);
            Tensor4 out = engine.network().forward(in, Mode::infer);
            GrayImage x4 = tensor_to_image(out);
            if (x4.width() == tw && x4.height() == th) return x4;
            return resize(x4, tw, th, ResizeKernel::bicubic);
        }
        case EngineKind::pca_eigenpatch: {
            require(engine.supports(factor), "pca engine does not support this factor");
            GrayImage out = pca_reconstruct(engine.pca(), lr);
            if (out.width() == tw && out.height() == th) return out;
            return resize(out, tw, th, ResizeKernel::bicubic);
        }
    }
    throw Error("unknown engine kind");
}

// ---- serialization ----

namespace {

constexpr char kMagic[8] = {'I', 'R', 'S', 'R', 'M', 'D', 'L', '1'};

template <typename T>
void wr(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T rd(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    require(in.good(), "model file: truncated");
    return v;
}
void wr_string(std::ostream& out, const std::string& s) {
    wr<uint32_t>(out, uint32_t(s.size()));
    out.write(s.data(), std::streamsize(s.size()));
}
std::string rd_string(std::istream& in) {
    uint32_t n = rd<uint32_t>(in);
    require(n < (1u << 20), "model file: implausible string length");
    std::string s(n, '\0');
    in.read(s.data(), n);
    require(in.good(), "model file: truncated string");
    return s;
}
void wr_floats(std::ostream& out, const std::vector<float>& v) {
    wr<uint64_t>(out, uint64_t(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * 4));
}
std::vector<float> rd_floats(std::istream& in) {
    uint64_t n = rd<uint64_t>(in);
    require(n < (1ull << 32), "model file: implausible array length");
    std::vector<float> v(n);
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(n * 4));
    require(in.good(), "model file: truncated array");
    return v;
}

} // namespace

void SREngine::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write model file: " + path.string());
    out.write(kMagic, 8);
    wr<uint8_t>(out, uint8_t(kind_));
    wr<uint32_t>(out, uint32_t(factors_.size()));
    for (int f : factors_) wr<int32_t>(out, f);
    wr_string(out, provenance_.manifest_digest);
    wr_string(out, provenance_.config);
    wr<uint32_t>(out, uint32_t(loss_history_.size()));
    for (double v : loss_history_) wr<double>(out, v);

    if (net_.has_value()) {
        wr<uint8_t>(out, 1);
        nn::write_network(out, *net_);
    } else if (pca_.has_value()) {
        wr<uint8_t>(out, 2);
        const auto& m = *pca_;
        for (int v : {m.factor, m.patch, m.overlap, m.lr_w, m.lr_h, m.hr_w, m.hr_h,
                      m.train_count, int(m.positions.size())})
            wr<int32_t>(out, v);
        for (const auto& pos : m.positions) {
            wr<int32_t>(out, pos.x);
            wr<int32_t>(out, pos.y);
            wr<int32_t>(out, pos.rank);
            wr_floats(out, pos.mean_lr);
            wr_floats(out, pos.eigen);
            wr_floats(out, pos.eigval);
            wr_floats(out, pos.proj);
        }
        for (const auto& img : m.hr_images) wr_floats(out, img);
        wr_string(out, m.warning);
    } else {
        wr<uint8_t>(out, 0);
    }
    require(out.good(), "model file: write failed");
}

SREngine SREngine::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open model file: " + path.string());
    char magic[8];
    in.read(magic, 8);
    require(in.good() && std::equal(magic, magic + 8, kMagic), "not a model file: " + path.string());

    SREngine e;
    e.kind_ = EngineKind(rd<uint8_t>(in));
    uint32_t nf = rd<uint32_t>(in);
    require(nf < 64, "model file: implausible factor count");
    for (uint32_t i = 0; i < nf; ++i) e.factors_.push_back(rd<int32_t>(in));
    e.provenance_.manifest_digest = rd_string(in);
    e.provenance_.config = rd_string(in);
    uint32_t nh = rd<uint32_t>(in);
    require(nh < (1u << 24), "model file: implausible history length");
    for (uint32_t i = 0; i < nh; ++i) e.loss_history_.push_back(rd<double>(in));

    uint8_t payload = rd<uint8_t>(in);
    if (payload == 1) {
        e.net_ = nn::read_network(in);
    } else if (payload == 2) {
        PCAEigenPatchModel m;
        m.factor = rd<int32_t>(in);
        m.patch = rd<int32_t>(in);
        m.overlap = rd<int32_t>(in);
        m.lr_w = rd<int32_t>(in);
        m.lr_h = rd<int32_t>(in);
        m.hr_w = rd<int32_t>(in);
        m.hr_h = rd<int32_t>(in);
        m.train_count = rd<int32_t>(in);
        int npos = rd<int32_t>(in);
        require(npos >= 0 && npos < (1 << 24), "model file: implausible position count");
        for (int i = 0; i < npos; ++i) {
            PCAEigenPatchModel::Position pos;
            pos.x = rd<int32_t>(in);
            pos.y = rd<int32_t>(in);
            pos.rank = rd<int32_t>(in);
            pos.mean_lr = rd_floats(in);
            pos.eigen = rd_floats(in);
            pos.eigval = rd_floats(in);
            pos.proj = rd_floats(in);
            m.positions.push_back(std::move(pos));
        }
        for (int i = 0; i < m.train_count; ++i) m.hr_images.push_back(rd_floats(in));
        m.warning = rd_string(in);
        e.pca_ = std::move(m);
    }
    return e;
}

} // namespace irissr::sr
