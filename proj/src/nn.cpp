#include "irissr/nn/serialize.hpp"

#include <istream>
#include <ostream>

namespace irissr::nn {

const char* layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::conv: return "conv";
        case LayerKind::relu: return "relu";
        case LayerKind::prelu: return "prelu";
        case LayerKind::leaky_relu: return "leaky_relu";
        case LayerKind::batch_norm: return "batch_norm";
        case LayerKind::residual_add: return "residual_add";
        case LayerKind::pixel_shuffle: return "pixel_shuffle";
        case LayerKind::dense: return "dense";
        case LayerKind::sigmoid: return "sigmoid";
    }
    return "unknown";
}

namespace {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    require(in.good(), "network blob: truncated");
    return v;
}

} // namespace

void write_network(std::ostream& out, Network& net) {
    auto descs = net.describe();
    write_pod<uint32_t>(out, uint32_t(descs.size()));
    for (const auto& d : descs) {
        write_pod<uint8_t>(out, uint8_t(d.kind));
        write_pod<int32_t>(out, d.i0);
        write_pod<int32_t>(out, d.i1);
        write_pod<int32_t>(out, d.i2);
        write_pod<int32_t>(out, d.i3);
        write_pod<int32_t>(out, d.i4);
        write_pod<float>(out, d.f0);
    }
    for (auto& p : net.params()) {
        write_pod<uint64_t>(out, uint64_t(p.value->size()));
        out.write(reinterpret_cast<const char*>(p.value->data()),
                  std::streamsize(p.value->size() * sizeof(float)));
    }
    require(out.good(), "network blob: write failed");
}

Network read_network(std::istream& in) {
    Network net;
    uint32_t count = read_pod<uint32_t>(in);
    require(count < 100000, "network blob: implausible layer count");
    for (uint32_t i = 0; i < count; ++i) {
        LayerDesc d;
        d.kind = LayerKind(read_pod<uint8_t>(in));
        d.i0 = read_pod<int32_t>(in);
        d.i1 = read_pod<int32_t>(in);
        d.i2 = read_pod<int32_t>(in);
        d.i3 = read_pod<int32_t>(in);
        d.i4 = read_pod<int32_t>(in);
        d.f0 = read_pod<float>(in);
        net.add(layer_from_desc<float>(d));
    }
    for (auto& p : net.params()) {
        uint64_t n = read_pod<uint64_t>(in);
        require(n == p.value->size(), "network blob: parameter size mismatch");
        in.read(reinterpret_cast<char*>(p.value->data()),
                std::streamsize(p.value->size() * sizeof(float)));
        require(in.good(), "network blob: truncated parameters");
    }
    return net;
}

} // namespace irissr::nn
