#include "irissr/iris/sift.hpp"

#include <cmath>

namespace irissr::iris {

namespace {

constexpr int kScalesPerOctave = 3;
constexpr double kSigma0 = 1.6;
constexpr double kContrastThreshold = 0.03;
constexpr double kEdgeRatio = 10.0;
constexpr int kOriBins = 36;
constexpr int kDescWidth = 4;
constexpr int kDescBins = 8;

struct Plane {
    int w = 0, h = 0;
    std::vector<float> v;
    float at(int x, int y) const {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return v[size_t(y) * w + x];
    }
};

Plane gaussian_blur(const Plane& src, double sigma) {
    int half = std::max(1, int(std::ceil(3.0 * sigma)));
    std::vector<double> k(size_t(2 * half + 1));
    double sum = 0;
    for (int i = -half; i <= half; ++i) {
        k[size_t(i + half)] = std::exp(-double(i) * i / (2 * sigma * sigma));
        sum += k[size_t(i + half)];
    }
    for (auto& x : k) x /= sum;

    Plane tmp{src.w, src.h, std::vector<float>(src.v.size())};
    for (int y = 0; y < src.h; ++y)
        for (int x = 0; x < src.w; ++x) {
            double acc = 0;
            for (int i = -half; i <= half; ++i) acc += k[size_t(i + half)] * src.at(x + i, y);
            tmp.v[size_t(y) * src.w + x] = float(acc);
        }
    Plane out{src.w, src.h, std::vector<float>(src.v.size())};
    for (int y = 0; y < src.h; ++y)
        for (int x = 0; x < src.w; ++x) {
            double acc = 0;
            for (int i = -half; i <= half; ++i) acc += k[size_t(i + half)] * tmp.at(x, y + i);
            out.v[size_t(y) * src.w + x] = float(acc);
        }
    return out;
}

Plane half_size(const Plane& src) {
    Plane out{src.w / 2, src.h / 2, {}};
    out.v.resize(size_t(out.w) * out.h);
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x) out.v[size_t(y) * out.w + x] = src.at(2 * x, 2 * y);
    return out;
}

struct OctaveData {
    std::vector<Plane> gauss; // kScalesPerOctave + 3 images
    std::vector<Plane> dog;   // one fewer
};

OctaveData build_octave(Plane base) {
    const double k = std::pow(2.0, 1.0 / kScalesPerOctave);
    OctaveData oct;
    oct.gauss.push_back(std::move(base));
    for (int i = 1; i < kScalesPerOctave + 3; ++i) {
        double sig_prev = kSigma0 * std::pow(k, i - 1);
        double sig_inc = sig_prev * std::sqrt(k * k - 1.0);
        oct.gauss.push_back(gaussian_blur(oct.gauss.back(), sig_inc));
    }
    for (size_t i = 0; i + 1 < oct.gauss.size(); ++i) {
        Plane d{oct.gauss[i].w, oct.gauss[i].h, std::vector<float>(oct.gauss[i].v.size())};
        for (size_t j = 0; j < d.v.size(); ++j) d.v[j] = oct.gauss[i + 1].v[j] - oct.gauss[i].v[j];
        oct.dog.push_back(std::move(d));
    }
    return oct;
}

// gradient magnitude/angle on a Gaussian plane
void gradient(const Plane& p, int x, int y, double& mag, double& ang) {
    double dx = 0.5 * (p.at(x + 1, y) - p.at(x - 1, y));
    double dy = 0.5 * (p.at(x, y + 1) - p.at(x, y - 1));
    mag = std::hypot(dx, dy);
    ang = std::atan2(dy, dx);
}

struct Candidate {
    int x, y, s;        // dog indices
    double ox, oy, os;  // sub-pixel offset
};

bool refine(const OctaveData& oct, Candidate& c) {
    const Plane& d0 = oct.dog[size_t(c.s - 1)];
    const Plane& d1 = oct.dog[size_t(c.s)];
    const Plane& d2 = oct.dog[size_t(c.s + 1)];
    int x = c.x, y = c.y;

    double gx = 0.5 * (d1.at(x + 1, y) - d1.at(x - 1, y));
    double gy = 0.5 * (d1.at(x, y + 1) - d1.at(x, y - 1));
    double gs = 0.5 * (d2.at(x, y) - d0.at(x, y));
    double hxx = d1.at(x + 1, y) - 2.0 * d1.at(x, y) + d1.at(x - 1, y);
    double hyy = d1.at(x, y + 1) - 2.0 * d1.at(x, y) + d1.at(x, y - 1);
    double hss = d2.at(x, y) - 2.0 * d1.at(x, y) + d0.at(x, y);
    double hxy = 0.25 * (d1.at(x + 1, y + 1) - d1.at(x - 1, y + 1) - d1.at(x + 1, y - 1) +
                         d1.at(x - 1, y - 1));
    double hxs = 0.25 * (d2.at(x + 1, y) - d2.at(x - 1, y) - d0.at(x + 1, y) + d0.at(x - 1, y));
    double hys = 0.25 * (d2.at(x, y + 1) - d2.at(x, y - 1) - d0.at(x, y + 1) + d0.at(x, y - 1));

    // solve H * off = -g (3x3 Cramer)
    double det = hxx * (hyy * hss - hys * hys) - hxy * (hxy * hss - hys * hxs) +
                 hxs * (hxy * hys - hyy * hxs);
    if (std::fabs(det) < 1e-12) return false;
    double bx = -gx, by = -gy, bs = -gs;
    c.ox = (bx * (hyy * hss - hys * hys) - hxy * (by * hss - bs * hys) +
            hxs * (by * hys - bs * hyy)) / det;
    c.oy = (hxx * (by * hss - bs * hys) - bx * (hxy * hss - hys * hxs) +
            hxs * (hxy * bs - by * hxs)) / det;
    c.os = (hxx * (hyy * bs - by * hys) - hxy * (hxy * bs - by * hxs) +
            bx * (hxy * hys - hyy * hxs)) / det;
    if (std::fabs(c.ox) > 1.5 || std::fabs(c.oy) > 1.5 || std::fabs(c.os) > 1.5) return false;

    double refined = d1.at(x, y) + 0.5 * (gx * c.ox + gy * c.oy + gs * c.os);
    if (std::fabs(refined) < kContrastThreshold) return false;

    // edge response on the spatial Hessian
    double tr = hxx + hyy;
    double det2 = hxx * hyy - hxy * hxy;
    if (det2 <= 0) return false;
    double r1 = (kEdgeRatio + 1) * (kEdgeRatio + 1) / kEdgeRatio;
    return tr * tr / det2 < r1;
}

std::vector<double> orientations(const Plane& g, double x, double y, double sigma) {
    double hist[kOriBins] = {};
    const double wsigma = 1.5 * sigma;
    const int radius = std::max(1, int(std::lround(3.0 * wsigma)));
    const int cx = int(std::lround(x)), cy = int(std::lround(y));
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            int px = cx + dx, py = cy + dy;
            if (px < 1 || py < 1 || px >= g.w - 1 || py >= g.h - 1) continue;
            double mag, ang;
            gradient(g, px, py, mag, ang);
            double w = std::exp(-(double(dx) * dx + double(dy) * dy) / (2 * wsigma * wsigma));
            int bin = int(std::floor((ang + M_PI) / (2 * M_PI) * kOriBins)) % kOriBins;
            hist[bin] += w * mag;
        }
    // circular smoothing
    for (int pass = 0; pass < 2; ++pass) {
        double prev = hist[kOriBins - 1];
        double first = hist[0];
        for (int i = 0; i < kOriBins; ++i) {
            double cur = hist[i];
            double next = i + 1 < kOriBins ? hist[i + 1] : first;
            hist[i] = (prev + cur + next) / 3.0;
            prev = cur;
        }
    }
    double peak = *std::max_element(hist, hist + kOriBins);
    std::vector<double> out;
    if (peak <= 0) return out;
    for (int i = 0; i < kOriBins; ++i) {
        double l = hist[(i + kOriBins - 1) % kOriBins];
        double r = hist[(i + 1) % kOriBins];
        if (hist[i] >= 0.8 * peak && hist[i] > l && hist[i] > r) {
            double interp = 0.5 * (l - r) / (l - 2 * hist[i] + r);
            double bin = i + interp;
            out.push_back((bin + 0.5) / kOriBins * 2 * M_PI - M_PI);
        }
    }
    return out;
}

std::array<float, 128> descriptor(const Plane& g, double x, double y, double sigma,
                                  double theta) {
    const double hist_width = 3.0 * sigma;
    const int radius =
        int(std::lround(hist_width * std::sqrt(2.0) * (kDescWidth + 1) * 0.5));
    const double cos_t = std::cos(-theta), sin_t = std::sin(-theta);
    double hist[kDescWidth][kDescWidth][kDescBins] = {};

    const int cx = int(std::lround(x)), cy = int(std::lround(y));
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            int px = cx + dx, py = cy + dy;
            if (px < 1 || py < 1 || px >= g.w - 1 || py >= g.h - 1) continue;
            // rotated, bin-normalized coordinates
            double rx = (cos_t * dx - sin_t * dy) / hist_width + kDescWidth / 2.0 - 0.5;
            double ry = (sin_t * dx + cos_t * dy) / hist_width + kDescWidth / 2.0 - 0.5;
            if (rx <= -1 || rx >= kDescWidth || ry <= -1 || ry >= kDescWidth) continue;
            double mag, ang;
            gradient(g, px, py, mag, ang);
            double rel = ang - theta;
            while (rel < 0) rel += 2 * M_PI;
            while (rel >= 2 * M_PI) rel -= 2 * M_PI;
            double ob = rel / (2 * M_PI) * kDescBins;
            double w = std::exp(-(rx * rx + ry * ry) / (0.5 * kDescWidth * kDescWidth));

            int x0 = int(std::floor(rx)), y0 = int(std::floor(ry)), o0 = int(std::floor(ob));
            double fx = rx - x0, fy = ry - y0, fo = ob - o0;
            for (int iy = 0; iy <= 1; ++iy)
                for (int ix = 0; ix <= 1; ++ix)
                    for (int io = 0; io <= 1; ++io) {
                        int bx = x0 + ix, by = y0 + iy, bo = (o0 + io) % kDescBins;
                        if (bx < 0 || bx >= kDescWidth || by < 0 || by >= kDescWidth) continue;
                        double weight = w * mag * (ix ? fx : 1 - fx) * (iy ? fy : 1 - fy) *
                                        (io ? fo : 1 - fo);
                        hist[by][bx][bo] += weight;
                    }
        }

    std::array<float, 128> desc{};
    int i = 0;
    for (int by = 0; by < kDescWidth; ++by)
        for (int bx = 0; bx < kDescWidth; ++bx)
            for (int bo = 0; bo < kDescBins; ++bo) desc[size_t(i++)] = float(hist[by][bx][bo]);

    auto normalize_desc = [&desc] {
        double norm = 0;
        for (float v : desc) norm += double(v) * v;
        norm = std::sqrt(norm);
        if (norm > 1e-12)
            for (auto& v : desc) v = float(v / norm);
    };
    normalize_desc();
    for (auto& v : desc) v = std::min(v, 0.2f);
    normalize_desc();
    return desc;
}

} // namespace

KeypointSet sift_extract(const GrayImage& img) {
    KeypointSet set;
    if (img.width() < 32 || img.height() < 32) return set;

    Plane base{img.width(), img.height(), std::vector<float>(img.pixels().begin(),
                                                             img.pixels().end())};
    // assume 0.5 of capture blur; lift the base to sigma0
    base = gaussian_blur(base, std::sqrt(kSigma0 * kSigma0 - 0.25));

    const double prefilter = 0.5 * kContrastThreshold / kScalesPerOctave;
    for (int octave = 0; octave < 5 && std::min(base.w, base.h) >= 16; ++octave) {
        OctaveData oct = build_octave(std::move(base));
        base = half_size(oct.gauss[kScalesPerOctave]);

        for (int s = 1; s <= kScalesPerOctave; ++s) {
            const Plane& d = oct.dog[size_t(s)];
            for (int y = 1; y < d.h - 1; ++y)
                for (int x = 1; x < d.w - 1; ++x) {
                    float v = d.at(x, y);
                    if (std::fabs(v) < prefilter) continue;
                    bool is_max = true, is_min = true;
                    for (int ds = -1; ds <= 1 && (is_max || is_min); ++ds)
                        for (int dy = -1; dy <= 1; ++dy)
                            for (int dx = -1; dx <= 1; ++dx) {
                                if (ds == 0 && dy == 0 && dx == 0) continue;
                                float n = oct.dog[size_t(s + ds)].at(x + dx, y + dy);
                                if (n >= v) is_max = false;
                                if (n <= v) is_min = false;
                            }
                    if (!is_max && !is_min) continue;

                    Candidate c{x, y, s, 0, 0, 0};
                    if (!refine(oct, c)) continue;

                    const double scale_oct = kSigma0 * std::pow(2.0, (s + c.os) / kScalesPerOctave);
                    const double px = (x + c.ox);
                    const double py = (y + c.oy);
                    const Plane& gplane = oct.gauss[size_t(s)];
                    for (double theta : orientations(gplane, px, py, scale_oct)) {
                        Keypoint kp;
                        kp.x = px * std::pow(2.0, octave);
                        kp.y = py * std::pow(2.0, octave);
                        kp.scale = scale_oct * std::pow(2.0, octave);
                        kp.orientation = theta;
                        set.keypoints.push_back(kp);
                        set.descriptors.push_back(descriptor(gplane, px, py, scale_oct, theta));
                    }
                }
        }
    }
    return set;
}

double sift_match(const KeypointSet& a, const KeypointSet& b) {
    if (a.descriptors.empty() || b.descriptors.empty()) return 0.0;
    size_t matches = 0;
    for (const auto& da : a.descriptors) {
        double best = 1e30, second = 1e30;
        for (const auto& db : b.descriptors) {
            double d = 0;
            for (int i = 0; i < 128; ++i) {
                double diff = double(da[size_t(i)]) - double(db[size_t(i)]);
                d += diff * diff;
            }
            if (d < best) {
                second = best;
                best = d;
            } else if (d < second) {
                second = d;
            }
        }
        // squared-distance ratio test; exact duplicates always match
        if (best == 0.0 || best < 0.64 * second) ++matches;
    }
    return double(matches) / double(std::min(a.descriptors.size(), b.descriptors.size()));
}

} // namespace irissr::iris
