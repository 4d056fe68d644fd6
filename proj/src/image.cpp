#include "irissr/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "png_codec.hpp"

namespace irissr {

namespace {

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open file: " + path.string());
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::filesystem::path& path, const void* data, size_t n) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write file: " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    require(out.good(), "write failed: " + path.string());
}

// Next whitespace-delimited token of a PGM header, skipping '#' comments.
size_t pgm_token(const std::vector<uint8_t>& b, size_t pos, std::string& tok) {
    tok.clear();
    while (pos < b.size()) {
        if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else if (std::isspace(b[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    while (pos < b.size() && !std::isspace(b[pos]) && b[pos] != '#') tok.push_back(char(b[pos++]));
    return pos;
}

GrayImage decode_pgm(const std::vector<uint8_t>& bytes, const std::string& name) {
    std::string tok;
    size_t pos = pgm_token(bytes, 0, tok);
    require(tok == "P5", "pgm: not a binary PGM (P5): " + name);
    pos = pgm_token(bytes, pos, tok);
    int w = std::atoi(tok.c_str());
    pos = pgm_token(bytes, pos, tok);
    int h = std::atoi(tok.c_str());
    pos = pgm_token(bytes, pos, tok);
    int maxval = std::atoi(tok.c_str());
    require(w >= 1 && h >= 1, "pgm: zero-dimension image: " + name);
    require(maxval == 255, "pgm: only maxval 255 supported: " + name);
    require(pos < bytes.size(), "pgm: truncated header: " + name);
    ++pos; // single whitespace byte after maxval
    size_t n = size_t(w) * size_t(h);
    require(bytes.size() - pos >= n, "pgm: truncated pixel data: " + name);

    std::vector<float> data(n);
    for (size_t i = 0; i < n; ++i) data[i] = float(bytes[pos + i]) * (1.0f / 255.0f);
    return GrayImage::from_data(w, h, std::move(data));
}

} // namespace

GrayImage load_image(const std::filesystem::path& path) {
    require(std::filesystem::exists(path), "missing file: " + path.string());
    std::vector<uint8_t> bytes = read_file(path);
    require(!bytes.empty(), "empty file: " + path.string());

    if (detail::looks_like_png(bytes)) {
        detail::PngImage png = detail::decode_png(bytes);
        size_t n = size_t(png.width) * png.height;
        std::vector<float> data(n);
        const uint8_t* p = png.bytes.data();
        switch (png.channels) {
            case 1:
                for (size_t i = 0; i < n; ++i) data[i] = float(p[i]) * (1.0f / 255.0f);
                break;
            case 2: // gray + alpha, alpha ignored
                for (size_t i = 0; i < n; ++i) data[i] = float(p[2 * i]) * (1.0f / 255.0f);
                break;
            case 3:
            case 4: { // BT.601 luma, alpha ignored
                int c = png.channels;
                for (size_t i = 0; i < n; ++i) {
                    float y = 0.299f * p[c * i] + 0.587f * p[c * i + 1] + 0.114f * p[c * i + 2];
                    data[i] = std::min(y * (1.0f / 255.0f), 1.0f);
                }
                break;
            }
            default: throw Error("png: unexpected channel count");
        }
        return GrayImage::from_data(int(png.width), int(png.height), std::move(data));
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
        return decode_pgm(bytes, path.string());
    throw Error("unsupported image format: " + path.string());
}

namespace {
std::vector<uint8_t> quantize(const GrayImage& img) {
    std::vector<uint8_t> q(img.size());
    auto px = img.pixels();
    for (size_t i = 0; i < q.size(); ++i)
        q[i] = uint8_t(std::lround(std::clamp(px[i], 0.0f, 1.0f) * 255.0f));
    return q;
}
} // namespace

GrayImage quantized(const GrayImage& img) {
    auto q = quantize(img);
    std::vector<float> data(q.size());
    for (size_t i = 0; i < q.size(); ++i) data[i] = float(q[i]) * (1.0f / 255.0f);
    return GrayImage::from_data(img.width(), img.height(), std::move(data));
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
    require(!img.empty(), "save_png: empty image");
    auto bytes = detail::encode_png_gray8(uint32_t(img.width()), uint32_t(img.height()),
                                          quantize(img));
    write_file(path, bytes.data(), bytes.size());
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    require(!img.empty(), "save_pgm: empty image");
    std::string header = "P5\n" + std::to_string(img.width()) + " " +
                         std::to_string(img.height()) + "\n255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    auto q = quantize(img);
    out.insert(out.end(), q.begin(), q.end());
    write_file(path, out.data(), out.size());
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".pgm" || ext == ".PGM")
        save_pgm(img, path);
    else
        save_png(img, path);
}

} // namespace irissr
