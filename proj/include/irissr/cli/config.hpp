#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "irissr/nn/train.hpp"
#include "irissr/sr/engine.hpp"

namespace irissr::cli {

// Minimal TOML reader covering what experiment configs use: top-level
// key = value pairs, [section] tables, [[array-of-table]] entries, with
// string / integer / float / boolean / homogeneous array values.
struct TomlValue {
    std::variant<std::string, int64_t, double, bool, std::vector<TomlValue>> v;

    const std::string& as_string() const;
    int64_t as_int() const;
    double as_double() const; // ints promote
    bool as_bool() const;
    const std::vector<TomlValue>& as_array() const;
};

struct TomlTable {
    std::map<std::string, TomlValue> values;
    std::map<std::string, std::vector<TomlTable>> table_arrays;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    const TomlValue& at(const std::string& key) const;
};

TomlTable parse_toml(const std::string& text);
TomlTable load_toml(const std::filesystem::path& path);

// Per-engine training setup; defaults come from the engine kind.
struct EngineSpec {
    sr::EngineKind kind = sr::EngineKind::bicubic;
    nn::SGDConfig sgd;
    int patch = 33;
    int stride = 14;
    size_t budget = 20000;
    int depth = 20;        // vdcnn
    int res_blocks = 4;    // srgan
    double adv_weight = 1e-3;
    int srgan_crop = 96;
    int pca_patch = 8;
    int pca_overlap = 4;
    std::filesystem::path model_file; // skip training when set
};

struct ExperimentConfig {
    std::vector<EngineSpec> engines;
    std::vector<int> factors;
    std::vector<std::string> matchers; // gabor, qsw, sift
    bool quality_metrics = true;
    int crop = 0; // optional square center crop of every image
    int max_shift = 8;
    uint64_t seed = 1;
    size_t impostor_sample = 0; // 0 = all pairs
    std::string segmentation = "auto"; // auto | sidecar
    std::filesystem::path out_dir;
    std::filesystem::path train_manifest;
    std::filesystem::path enroll_manifest;
    std::filesystem::path probe_manifest;
    std::string digest; // of the config file, embedded in reports

    void validate() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
EngineSpec engine_spec_from_table(const TomlTable& t);

} // namespace irissr::cli
