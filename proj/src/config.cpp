#include "irissr/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "irissr/cli/manifest.hpp"

namespace irissr::cli {

const std::string& TomlValue::as_string() const {
    require(std::holds_alternative<std::string>(v), "toml: expected a string value");
    return std::get<std::string>(v);
}
int64_t TomlValue::as_int() const {
    require(std::holds_alternative<int64_t>(v), "toml: expected an integer value");
    return std::get<int64_t>(v);
}
double TomlValue::as_double() const {
    if (std::holds_alternative<int64_t>(v)) return double(std::get<int64_t>(v));
    require(std::holds_alternative<double>(v), "toml: expected a number");
    return std::get<double>(v);
}
bool TomlValue::as_bool() const {
    require(std::holds_alternative<bool>(v), "toml: expected a boolean");
    return std::get<bool>(v);
}
const std::vector<TomlValue>& TomlValue::as_array() const {
    require(std::holds_alternative<std::vector<TomlValue>>(v), "toml: expected an array");
    return std::get<std::vector<TomlValue>>(v);
}

const TomlValue& TomlTable::at(const std::string& key) const {
    auto it = values.find(key);
    require(it != values.end(), "toml: missing key '" + key + "'");
    return it->second;
}

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

TomlValue parse_scalar(const std::string& raw);

TomlValue parse_array(const std::string& raw) {
    std::vector<TomlValue> items;
    std::string body = strip(raw.substr(1, raw.size() - 2));
    size_t pos = 0;
    while (pos < body.size()) {
        // split on commas outside quotes
        size_t end = pos;
        bool quoted = false;
        while (end < body.size() && (quoted || body[end] != ',')) {
            if (body[end] == '"') quoted = !quoted;
            ++end;
        }
        std::string item = strip(body.substr(pos, end - pos));
        if (!item.empty()) items.push_back(parse_scalar(item));
        pos = end + 1;
    }
    return TomlValue{std::move(items)};
}

TomlValue parse_scalar(const std::string& raw) {
    require(!raw.empty(), "toml: empty value");
    if (raw.front() == '[') {
        require(raw.back() == ']', "toml: unterminated array");
        return parse_array(raw);
    }
    if (raw.front() == '"') {
        require(raw.size() >= 2 && raw.back() == '"', "toml: unterminated string");
        return TomlValue{raw.substr(1, raw.size() - 2)};
    }
    if (raw == "true") return TomlValue{true};
    if (raw == "false") return TomlValue{false};
    // integer or float
    bool is_float = raw.find_first_of(".eE") != std::string::npos;
    size_t consumed = 0;
    if (is_float) {
        double d = std::stod(raw, &consumed);
        require(consumed == raw.size(), "toml: malformed number: " + raw);
        return TomlValue{d};
    }
    int64_t i = std::stoll(raw, &consumed);
    require(consumed == raw.size(), "toml: malformed integer: " + raw);
    return TomlValue{i};
}

} // namespace

TomlTable parse_toml(const std::string& text) {
    TomlTable root;
    TomlTable* current = &root;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        // strip comments outside quotes
        bool quoted = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = strip(line);
        if (line.empty()) continue;

        if (line.rfind("[[", 0) == 0) {
            require(line.size() > 4 && line.substr(line.size() - 2) == "]]",
                    "toml: malformed table array header: " + line);
            std::string name = strip(line.substr(2, line.size() - 4));
            root.table_arrays[name].push_back({});
            current = &root.table_arrays[name].back();
        } else if (line.front() == '[') {
            require(line.back() == ']', "toml: malformed table header: " + line);
            std::string name = strip(line.substr(1, line.size() - 2));
            root.table_arrays[name].push_back({});
            current = &root.table_arrays[name].back();
        } else {
            size_t eq = line.find('=');
            require(eq != std::string::npos, "toml: expected key = value: " + line);
            std::string key = strip(line.substr(0, eq));
            std::string value = strip(line.substr(eq + 1));
            require(!key.empty(), "toml: empty key: " + line);
            current->values[key] = parse_scalar(value);
        }
    }
    return root;
}

TomlTable load_toml(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_toml(text);
}

EngineSpec engine_spec_from_table(const TomlTable& t) {
    EngineSpec spec;
    spec.kind = sr::engine_kind_from_name(t.at("kind").as_string());
    switch (spec.kind) {
        case sr::EngineKind::srcnn: spec.sgd = sr::default_srcnn_config(); break;
        case sr::EngineKind::vdcnn: spec.sgd = sr::default_vdcnn_config(); break;
        case sr::EngineKind::srgan: spec.sgd = sr::default_srgan_config(); break;
        default: break;
    }
    if (t.has("learning_rate")) spec.sgd.learning_rate = t.at("learning_rate").as_double();
    if (t.has("momentum")) spec.sgd.momentum = t.at("momentum").as_double();
    if (t.has("weight_decay")) spec.sgd.weight_decay = t.at("weight_decay").as_double();
    if (t.has("grad_clip")) spec.sgd.grad_clip = t.at("grad_clip").as_double();
    if (t.has("batch")) spec.sgd.batch_size = int(t.at("batch").as_int());
    if (t.has("epochs")) spec.sgd.epochs = int(t.at("epochs").as_int());
    if (t.has("patch")) spec.patch = int(t.at("patch").as_int());
    if (t.has("stride")) spec.stride = int(t.at("stride").as_int());
    if (t.has("budget")) spec.budget = size_t(t.at("budget").as_int());
    if (t.has("depth")) spec.depth = int(t.at("depth").as_int());
    if (t.has("res_blocks")) spec.res_blocks = int(t.at("res_blocks").as_int());
    if (t.has("adv_weight")) spec.adv_weight = t.at("adv_weight").as_double();
    if (t.has("srgan_crop")) spec.srgan_crop = int(t.at("srgan_crop").as_int());
    if (t.has("pca_patch")) spec.pca_patch = int(t.at("pca_patch").as_int());
    if (t.has("pca_overlap")) spec.pca_overlap = int(t.at("pca_overlap").as_int());
    if (t.has("model_file")) spec.model_file = t.at("model_file").as_string();
    return spec;
}

void ExperimentConfig::validate() const {
    require(!engines.empty(), "config: at least one engine required");
    require(!factors.empty(), "config: at least one factor required");
    require(!matchers.empty(), "config: at least one matcher required");
    for (const auto& m : matchers)
        require(m == "gabor" || m == "qsw" || m == "sift", "config: unknown matcher " + m);
    require(segmentation == "auto" || segmentation == "sidecar",
            "config: segmentation must be auto or sidecar");
    require(!out_dir.empty(), "config: out_dir required");
    for (int f : factors) require(f >= 2, "config: factors must be >= 2");
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    TomlTable t = load_toml(path);
    ExperimentConfig cfg;
    cfg.digest = file_digest(path);
    const auto base = path.parent_path();
    auto resolve = [&base](const std::string& p) {
        return std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base / p;
    };

    require(t.has("out_dir"), "config: out_dir required");
    cfg.out_dir = resolve(t.at("out_dir").as_string());
    if (t.has("seed")) cfg.seed = uint64_t(t.at("seed").as_int());
    if (t.has("crop")) cfg.crop = int(t.at("crop").as_int());
    if (t.has("max_shift")) cfg.max_shift = int(t.at("max_shift").as_int());
    if (t.has("quality_metrics")) cfg.quality_metrics = t.at("quality_metrics").as_bool();
    if (t.has("impostor_sample")) cfg.impostor_sample = size_t(t.at("impostor_sample").as_int());
    if (t.has("segmentation")) cfg.segmentation = t.at("segmentation").as_string();
    if (t.has("train_manifest")) cfg.train_manifest = resolve(t.at("train_manifest").as_string());
    if (t.has("enroll_manifest"))
        cfg.enroll_manifest = resolve(t.at("enroll_manifest").as_string());
    if (t.has("probe_manifest")) cfg.probe_manifest = resolve(t.at("probe_manifest").as_string());

    for (const auto& f : t.at("factors").as_array()) cfg.factors.push_back(int(f.as_int()));
    for (const auto& m : t.at("matchers").as_array()) cfg.matchers.push_back(m.as_string());

    auto it = t.table_arrays.find("engine");
    require(it != t.table_arrays.end(), "config: at least one [[engine]] block required");
    for (const auto& et : it->second) cfg.engines.push_back(engine_spec_from_table(et));

    cfg.validate();
    return cfg;
}

} // namespace irissr::cli
