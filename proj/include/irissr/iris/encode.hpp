#pragma once

#include <filesystem>
#include <span>

#include "irissr/iris/normalize.hpp"

namespace irissr::iris {

enum class CodeScheme : uint8_t { gabor = 1, qsw = 2 };

// Phase-quantized template: packed bit planes plus a validity mask of the
// same shape. Layout: plane index (band*filters + filter)*2 + component,
// each plane holding `columns` bits packed in 64-bit words (column c lives
// in word c/64, bit c%64). Total bits = bands * columns * filters * 2.
struct IrisCode {
    CodeScheme scheme = CodeScheme::gabor;
    int bands = 0;
    int columns = 0;
    int filters = 0;
    std::vector<uint64_t> bits;
    std::vector<uint64_t> mask;

    int planes() const { return bands * filters * 2; }
    int words_per_plane() const { return columns / 64; }
    size_t total_bits() const { return size_t(planes()) * columns; }

    bool get_bit(int plane, int col) const {
        return (bits[size_t(plane) * words_per_plane() + col / 64] >> (col % 64)) & 1;
    }
    bool get_mask(int plane, int col) const {
        return (mask[size_t(plane) * words_per_plane() + col / 64] >> (col % 64)) & 1;
    }
    void set_bit(int plane, int col, bool v);
    void set_mask(int plane, int col, bool v);

    static IrisCode empty(CodeScheme scheme, int bands, int columns, int filters);

    void save(const std::filesystem::path& path) const;
    static IrisCode load(const std::filesystem::path& path);
};

inline constexpr int kGaborBands = 4;
inline const std::vector<double> kDefaultWavelengths{8, 12, 16, 24, 32, 48, 64, 96};

// Complex Gabor bank over band-averaged rows: each of the 8 wavelengths
// contributes 2 bits per (band, column) from the response quadrant. Mask is
// cleared where the response magnitude falls below 1e-4 or the source is
// unusable.
IrisCode encode_gabor(const NormalizedIris& norm,
                      const std::vector<double>& wavelengths = kDefaultWavelengths,
                      int bands = kGaborBands);

// Quadratic-spline wavelet details at dyadic scales 2^1..2^4; sign of the
// detail and of its circular first difference give 2 bits per (band, column,
// scale).
IrisCode encode_qsw(const NormalizedIris& norm, int bands = kGaborBands);

} // namespace irissr::iris
