#include "irissr/iris/encode.hpp"

#include <cmath>
#include <complex>
#include <fstream>

namespace irissr::iris {

void IrisCode::set_bit(int plane, int col, bool v) {
    uint64_t& w = bits[size_t(plane) * words_per_plane() + col / 64];
    uint64_t m = uint64_t(1) << (col % 64);
    w = v ? (w | m) : (w & ~m);
}

void IrisCode::set_mask(int plane, int col, bool v) {
    uint64_t& w = mask[size_t(plane) * words_per_plane() + col / 64];
    uint64_t m = uint64_t(1) << (col % 64);
    w = v ? (w | m) : (w & ~m);
}

IrisCode IrisCode::empty(CodeScheme scheme, int bands, int columns, int filters) {
    require(bands >= 1 && filters >= 1 && columns >= 64 && columns % 64 == 0,
            "IrisCode: columns must be a positive multiple of 64");
    IrisCode c;
    c.scheme = scheme;
    c.bands = bands;
    c.columns = columns;
    c.filters = filters;
    c.bits.assign(size_t(c.planes()) * c.words_per_plane(), 0);
    c.mask.assign(c.bits.size(), 0);
    return c;
}

namespace {

// Band-averaged row signals with per-column usability. Unusable columns are
// filled with the band mean so they do not contaminate the convolution.
struct BandSignals {
    std::vector<std::vector<double>> value; // bands x columns
    std::vector<std::vector<uint8_t>> usable;
};

BandSignals band_average(const NormalizedIris& norm, int bands) {
    require(kNormRows % bands == 0, "encode: bands must divide 64");
    const int rows_per_band = kNormRows / bands;
    BandSignals sig;
    sig.value.assign(size_t(bands), std::vector<double>(kNormCols, 0.0));
    sig.usable.assign(size_t(bands), std::vector<uint8_t>(kNormCols, 0));
    for (int b = 0; b < bands; ++b) {
        double band_sum = 0;
        size_t band_n = 0;
        for (int c = 0; c < kNormCols; ++c) {
            double acc = 0;
            int n = 0;
            for (int r = b * rows_per_band; r < (b + 1) * rows_per_band; ++r)
                if (norm.usable(r, c)) {
                    acc += norm.texture.at(c, r);
                    ++n;
                }
            if (n > 0) {
                sig.value[b][c] = acc / n;
                sig.usable[b][c] = 1;
                band_sum += sig.value[b][c];
                ++band_n;
            }
        }
        const double fill = band_n ? band_sum / double(band_n) : 0.0;
        for (int c = 0; c < kNormCols; ++c)
            if (!sig.usable[b][c]) sig.value[b][c] = fill;
    }
    return sig;
}

} // namespace

IrisCode encode_gabor(const NormalizedIris& norm, const std::vector<double>& wavelengths,
                      int bands) {
    require(!wavelengths.empty(), "encode_gabor: need at least one wavelength");
    for (double w : wavelengths)
        require(w > 0 && w <= kNormCols, "encode_gabor: wavelength outside (0, 512]");

    IrisCode code = IrisCode::empty(CodeScheme::gabor, bands, kNormCols, int(wavelengths.size()));
    BandSignals sig = band_average(norm, bands);

    for (size_t f = 0; f < wavelengths.size(); ++f) {
        const double lambda = wavelengths[f];
        const double sigma = 0.5 * lambda;
        const int half = std::min(int(std::ceil(3.0 * sigma)), kNormCols / 2 - 1);
        std::vector<double> re(2 * half + 1), im(2 * half + 1);
        double re_sum = 0;
        for (int k = -half; k <= half; ++k) {
            double env = std::exp(-double(k) * k / (2.0 * sigma * sigma));
            re[size_t(k + half)] = env * std::cos(2.0 * M_PI * k / lambda);
            im[size_t(k + half)] = env * std::sin(2.0 * M_PI * k / lambda);
            re_sum += re[size_t(k + half)];
        }
        const double dc = re_sum / double(2 * half + 1); // zero-mean real part
        for (auto& v : re) v -= dc;

        for (int b = 0; b < bands; ++b) {
            for (int c = 0; c < kNormCols; ++c) {
                double r = 0, i = 0;
                for (int k = -half; k <= half; ++k) {
                    double x = sig.value[b][size_t((c - k + kNormCols) % kNormCols)];
                    r += re[size_t(k + half)] * x;
                    i += im[size_t(k + half)] * x;
                }
                const int plane = (b * code.filters + int(f)) * 2;
                code.set_bit(plane, c, r >= 0);
                code.set_bit(plane + 1, c, i >= 0);
                const bool ok = sig.usable[b][c] && std::hypot(r, i) >= 1e-4;
                code.set_mask(plane, c, ok);
                code.set_mask(plane + 1, c, ok);
            }
        }
    }
    return code;
}

IrisCode encode_qsw(const NormalizedIris& norm, int bands) {
    constexpr int kScales = 4;
    IrisCode code = IrisCode::empty(CodeScheme::qsw, bands, kNormCols, kScales);
    BandSignals sig = band_average(norm, bands);

    // quadratic spline pair: smoothing (0.125, 0.375, 0.375, 0.125), detail (-2, 2)
    const double h[4] = {0.125, 0.375, 0.375, 0.125};
    for (int b = 0; b < bands; ++b) {
        std::vector<double> approx = sig.value[size_t(b)];
        for (int s = 0; s < kScales; ++s) {
            const int hop = 1 << s;
            std::vector<double> detail(kNormCols), next(kNormCols, 0.0);
            for (int c = 0; c < kNormCols; ++c) {
                detail[size_t(c)] =
                    2.0 * (approx[size_t((c + hop) % kNormCols)] - approx[size_t(c)]);
                for (int k = -1; k <= 2; ++k)
                    next[size_t(c)] +=
                        h[size_t(k + 1)] * approx[size_t((c + k * hop + 8 * kNormCols) % kNormCols)];
            }
            const int plane = (b * kScales + s) * 2;
            for (int c = 0; c < kNormCols; ++c) {
                double d = detail[size_t(c)];
                double dd = detail[size_t((c + 1) % kNormCols)] - d;
                code.set_bit(plane, c, d >= 0);
                code.set_bit(plane + 1, c, dd >= 0);
                const bool ok = sig.usable[size_t(b)][size_t(c)] && std::fabs(d) >= 1e-4;
                code.set_mask(plane, c, ok);
                code.set_mask(plane + 1, c, ok);
            }
            approx = std::move(next);
        }
    }
    return code;
}

// ---- template file ----

namespace {
constexpr char kTplMagic[8] = {'I', 'R', 'T', 'P', 'L', '0', '1', '\0'};
}

void IrisCode::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write template: " + path.string());
    out.write(kTplMagic, 8);
    uint8_t s = uint8_t(scheme);
    out.write(reinterpret_cast<const char*>(&s), 1);
    int32_t geo[3] = {bands, columns, filters};
    out.write(reinterpret_cast<const char*>(geo), sizeof(geo));
    out.write(reinterpret_cast<const char*>(bits.data()), std::streamsize(bits.size() * 8));
    out.write(reinterpret_cast<const char*>(mask.data()), std::streamsize(mask.size() * 8));
    require(out.good(), "template write failed: " + path.string());
}

IrisCode IrisCode::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open template: " + path.string());
    char magic[8];
    in.read(magic, 8);
    require(in.good() && std::equal(magic, magic + 8, kTplMagic),
            "not a template file: " + path.string());
    uint8_t s = 0;
    in.read(reinterpret_cast<char*>(&s), 1);
    int32_t geo[3];
    in.read(reinterpret_cast<char*>(geo), sizeof(geo));
    require(in.good(), "template truncated: " + path.string());
    IrisCode code = IrisCode::empty(CodeScheme(s), geo[0], geo[1], geo[2]);
    in.read(reinterpret_cast<char*>(code.bits.data()), std::streamsize(code.bits.size() * 8));
    in.read(reinterpret_cast<char*>(code.mask.data()), std::streamsize(code.mask.size() * 8));
    require(in.good(), "template truncated: " + path.string());
    return code;
}

} // namespace irissr::iris
