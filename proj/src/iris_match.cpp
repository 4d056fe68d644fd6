#include "irissr/iris/match.hpp"

#include <bit>

namespace irissr::iris {

namespace {

// Rotates one packed plane left by `shift` columns: out bit c = in bit
// (c + shift) mod columns.
void rotate_plane(const uint64_t* in, uint64_t* out, int words, int shift) {
    const int columns = words * 64;
    shift = ((shift % columns) + columns) % columns;
    const int wq = shift / 64, br = shift % 64;
    for (int i = 0; i < words; ++i) {
        uint64_t lo = in[(i + wq) % words];
        uint64_t hi = in[(i + wq + 1) % words];
        out[i] = br == 0 ? lo : (lo >> br) | (hi << (64 - br));
    }
}

} // namespace

double hamming_distance(const IrisCode& a, const IrisCode& b, int max_shift) {
    require(a.scheme == b.scheme, "hamming_distance: scheme mismatch");
    require(a.bands == b.bands && a.columns == b.columns && a.filters == b.filters,
            "hamming_distance: geometry mismatch");
    require(max_shift >= 0, "hamming_distance: negative shift budget");

    const int words = a.words_per_plane();
    const int planes = a.planes();
    std::vector<uint64_t> rb(size_t(words), 0), rm(size_t(words), 0);

    double best = 1.0;
    bool any = false;
    for (int shift = -max_shift; shift <= max_shift; ++shift) {
        uint64_t disagree = 0, joint = 0;
        for (int p = 0; p < planes; ++p) {
            const uint64_t* ab = &a.bits[size_t(p) * words];
            const uint64_t* am = &a.mask[size_t(p) * words];
            rotate_plane(&b.bits[size_t(p) * words], rb.data(), words, shift);
            rotate_plane(&b.mask[size_t(p) * words], rm.data(), words, shift);
            for (int w = 0; w < words; ++w) {
                uint64_t m = am[w] & rm[w];
                disagree += uint64_t(std::popcount((ab[w] ^ rb[w]) & m));
                joint += uint64_t(std::popcount(m));
            }
        }
        if (joint == 0) continue;
        any = true;
        best = std::min(best, double(disagree) / double(joint));
    }
    return any ? best : 1.0;
}

} // namespace irissr::iris
