#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "irissr/image.hpp"
#include "irissr/nn/network.hpp"
#include "irissr/nn/train.hpp"
#include "irissr/sr/pairs.hpp"
#include "irissr/sr/pca.hpp"

namespace irissr::sr {

enum class EngineKind : uint8_t {
    bilinear = 1,
    bicubic = 2,
    srcnn = 3,
    vdcnn = 4,
    srgan = 5,
    pca_eigenpatch = 6,
};

const char* engine_kind_name(EngineKind k);
EngineKind engine_kind_from_name(const std::string& name);

// Recorded with every trained model so results can be traced back to the
// corpus and configuration that produced them.
struct Provenance {
    std::string manifest_digest;
    std::string config;
};

// A trained (or parameter-free) super-resolution engine with a uniform
// reconstruction interface. Interpolation kinds carry no payload and accept
// any factor; trained kinds only reconstruct at their trained factors.
class SREngine {
public:
    SREngine() = default;
    static SREngine interpolation(EngineKind kind);
    static SREngine from_network(EngineKind kind, nn::Network net, std::vector<int> factors,
                                 std::vector<double> loss_history, Provenance prov);
    static SREngine from_pca(PCAEigenPatchModel model, Provenance prov);

    EngineKind kind() const { return kind_; }
    const std::vector<int>& factors() const { return factors_; }
    bool supports(int factor) const;
    bool trainable() const {
        return kind_ != EngineKind::bilinear && kind_ != EngineKind::bicubic;
    }
    const std::vector<double>& loss_history() const { return loss_history_; }
    const Provenance& provenance() const { return provenance_; }
    // Forward passes cache activations inside the network, hence mutable
    // access even on a logically frozen engine.
    nn::Network& network() const;
    const PCAEigenPatchModel& pca() const;

    void save(const std::filesystem::path& path) const;
    static SREngine load(const std::filesystem::path& path);

private:
    EngineKind kind_ = EngineKind::bicubic;
    std::vector<int> factors_;
    mutable std::optional<nn::Network> net_; // srcnn / vdcnn / srgan generator
    std::optional<PCAEigenPatchModel> pca_;
    std::vector<double> loss_history_;
    Provenance provenance_;
};

// ---- architectures ----

// Three-layer chain: 64 9x9x1 filters, 32 1x1x64, one 5x5x32 filter, stride
// one and padding zero throughout, ReLU between the convolutions. A 33x33
// input yields a 21x21 output.
nn::Network build_srcnn();

// `depth` 3x3 conv layers (pad 1 preserves size): 1->64, (depth-2)x 64->64,
// 64->1, ReLU after all but the last. The network predicts the residual;
// reconstruction adds it to the input.
nn::Network build_vdcnn(int depth = 20);

struct SrganNets {
    nn::Network generator;
    nn::Network discriminator;
};

// Generator: 9x9 head with PReLU, n residual blocks (conv-bn-prelu-conv-bn
// with block skip), post conv-bn with a long skip, two x2 sub-pixel
// upsampling stages, 9x9 tail. Discriminator: eight 3x3 convs with channels
// doubling 64 -> 512 and alternating stride 1/2, leaky ReLU (0.2), then a
// single dense unit with sigmoid. `hr_size` fixes the dense layer geometry
// (must be divisible by 16).
SrganNets build_srgan(int n_res_blocks, int hr_size = 96);

// ---- training ----

struct TrainOptions {
    nn::SGDConfig sgd;
    Provenance provenance;
    bool verbose = false;
};

// Per-factor defaults for the desk-scale corpus; the reference work leaves
// optimizer settings unspecified.
nn::SGDConfig default_srcnn_config();
nn::SGDConfig default_vdcnn_config(); // gradient clipping on (norm 1.0)
nn::SGDConfig default_srgan_config();

// MSE against the center crop of hr_patch matching the valid output extent.
SREngine train_srcnn(const std::vector<TrainingPair>& pairs, const TrainOptions& opt);

// Residual target hr - lr; mixed factors train one engine for all of them.
SREngine train_vdcnn(const std::vector<TrainingPair>& pairs, const TrainOptions& opt,
                     int depth = 20);

struct SrganTrainResult {
    SREngine engine;           // carries the generator
    nn::Network discriminator; // training artifact, useful for inspection
};

// Alternating updates: the discriminator minimizes BCE on real-vs-generated;
// the generator minimizes pixel MSE plus adv_weight x BCE against the
// "real" label. adv_weight 0 skips the discriminator entirely and reduces to
// pure MSE training.
SrganTrainResult train_srgan(const std::vector<TrainingPair>& pairs, const TrainOptions& opt,
                             double adv_weight = 1e-3, int n_res_blocks = 4);

// ---- reconstruction ----

struct SrOptions {
    int target_w = 0; // 0 = lr width * factor
    int target_h = 0;
    std::string* warning = nullptr;
};

// Uniform reconstruction: interpolation resizes; srcnn/vdcnn upscale
// bicubically then run the network (srcnn with replicate padding so the
// output keeps the target size; vdcnn adds its residual); srgan runs the
// generator on the raw LR raster; pca runs the patch pipeline. Output values
// are clamped to [0,1].
GrayImage super_resolve(const SREngine& engine, const GrayImage& lr, int factor,
                        const SrOptions& opt = {});

} // namespace irissr::sr
