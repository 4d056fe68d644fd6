#include "png_codec.hpp"

#include <cstring>
#include <zlib.h>

#include "irissr/common.hpp"

namespace irissr::detail {

namespace {

const uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

uint32_t read_u32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void write_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

std::vector<uint8_t> inflate_all(const std::vector<uint8_t>& in, size_t expected) {
    std::vector<uint8_t> out(expected);
    z_stream zs{};
    require(inflateInit(&zs) == Z_OK, "png: zlib init failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    require(rc == Z_STREAM_END && zs.avail_out == 0, "png: truncated or corrupt image data");
    return out;
}

} // namespace

bool looks_like_png(const std::vector<uint8_t>& file) {
    return file.size() >= 8 && std::memcmp(file.data(), kSignature, 8) == 0;
}

PngImage decode_png(const std::vector<uint8_t>& file) {
    require(looks_like_png(file), "png: bad signature");

    PngImage img;
    int bit_depth = 0, color_type = -1;
    std::vector<uint8_t> idat;
    bool saw_ihdr = false, saw_iend = false;

    size_t pos = 8;
    while (pos + 8 <= file.size()) {
        uint32_t len = read_u32(&file[pos]);
        require(pos + 12 + len <= file.size(), "png: truncated chunk");
        const char* type = reinterpret_cast<const char*>(&file[pos + 4]);
        const uint8_t* data = &file[pos + 8];

        if (std::memcmp(type, "IHDR", 4) == 0) {
            require(len == 13, "png: bad IHDR");
            img.width = read_u32(data);
            img.height = read_u32(data + 4);
            bit_depth = data[8];
            color_type = data[9];
            require(data[10] == 0 && data[11] == 0, "png: unsupported compression/filter method");
            require(data[12] == 0, "png: interlaced images unsupported");
            require(img.width > 0 && img.height > 0, "png: zero-dimension image");
            require(bit_depth == 8, "png: only 8-bit depth supported");
            switch (color_type) {
                case 0: img.channels = 1; break;
                case 2: img.channels = 3; break;
                case 4: img.channels = 2; break;
                case 6: img.channels = 4; break;
                default: throw Error("png: unsupported color type (palette?)");
            }
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            require(saw_ihdr, "png: IDAT before IHDR");
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
            break;
        }
        // ancillary chunks skipped; CRCs not verified
        pos += 12 + len;
    }
    require(saw_ihdr && saw_iend && !idat.empty(), "png: missing required chunks");

    const size_t stride = size_t(img.width) * img.channels;
    std::vector<uint8_t> raw = inflate_all(idat, (stride + 1) * img.height);

    img.bytes.resize(stride * img.height);
    const int bpp = img.channels;
    for (uint32_t y = 0; y < img.height; ++y) {
        const uint8_t filter = raw[y * (stride + 1)];
        const uint8_t* src = &raw[y * (stride + 1) + 1];
        uint8_t* cur = &img.bytes[y * stride];
        const uint8_t* up = y ? &img.bytes[(y - 1) * stride] : nullptr;
        for (size_t x = 0; x < stride; ++x) {
            int a = x >= size_t(bpp) ? cur[x - bpp] : 0;
            int b = up ? up[x] : 0;
            int c = (up && x >= size_t(bpp)) ? up[x - bpp] : 0;
            int v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default: throw Error("png: bad filter type");
            }
            cur[x] = uint8_t(v & 0xff);
        }
    }
    return img;
}

std::vector<uint8_t> encode_png_gray8(uint32_t width, uint32_t height,
                                      const std::vector<uint8_t>& gray) {
    require(gray.size() == size_t(width) * height, "png: pixel buffer size mismatch");

    std::vector<uint8_t> raw((size_t(width) + 1) * height);
    for (uint32_t y = 0; y < height; ++y) {
        raw[y * (width + 1)] = 0; // filter: none
        std::memcpy(&raw[y * (width + 1) + 1], &gray[y * size_t(width)], width);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> compressed(bound);
    require(compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                      Z_DEFAULT_COMPRESSION) == Z_OK,
            "png: compression failed");
    compressed.resize(bound);

    std::vector<uint8_t> out(kSignature, kSignature + 8);
    auto chunk = [&out](const char* type, const std::vector<uint8_t>& payload) {
        write_u32(out, static_cast<uint32_t>(payload.size()));
        size_t start = out.size();
        out.insert(out.end(), type, type + 4);
        out.insert(out.end(), payload.begin(), payload.end());
        uint32_t crc = static_cast<uint32_t>(
            crc32(0, out.data() + start, static_cast<uInt>(out.size() - start)));
        write_u32(out, crc);
    };

    std::vector<uint8_t> ihdr;
    write_u32(ihdr, width);
    write_u32(ihdr, height);
    ihdr.push_back(8); // bit depth
    ihdr.push_back(0); // grayscale
    ihdr.push_back(0); // compression
    ihdr.push_back(0); // filter
    ihdr.push_back(0); // no interlace
    chunk("IHDR", ihdr);
    chunk("IDAT", compressed);
    chunk("IEND", {});
    return out;
}

} // namespace irissr::detail
