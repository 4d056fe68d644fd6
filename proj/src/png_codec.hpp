#pragma once

// Minimal PNG codec for the subset this toolkit needs: 8-bit depth,
// color types gray / RGB / gray+alpha / RGBA, no interlacing. DEFLATE is
// delegated to zlib. Writer emits 8-bit grayscale, filter type 0.

#include <cstdint>
#include <vector>

namespace irissr::detail {

struct PngImage {
    uint32_t width = 0;
    uint32_t height = 0;
    int channels = 0;           // 1, 2, 3 or 4
    std::vector<uint8_t> bytes; // interleaved, row-major
};

// Throws irissr::Error on malformed / unsupported input.
PngImage decode_png(const std::vector<uint8_t>& file);

std::vector<uint8_t> encode_png_gray8(uint32_t width, uint32_t height,
                                      const std::vector<uint8_t>& gray);

bool looks_like_png(const std::vector<uint8_t>& file);

} // namespace irissr::detail
