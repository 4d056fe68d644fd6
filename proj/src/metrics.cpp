#include "irissr/metrics.hpp"

#include <cmath>
#include <limits>

#include "irissr/fft.hpp"

namespace irissr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_same_dims(const GrayImage& a, const GrayImage& b, const char* who) {
    require(a.width() == b.width() && a.height() == b.height(),
            std::string(who) + ": dimension mismatch");
}

} // namespace

double psnr(const GrayImage& ref, const GrayImage& test) {
    require_same_dims(ref, test, "psnr");
    double mse = 0.0;
    auto pa = ref.pixels(), pb = test.pixels();
    for (size_t i = 0; i < pa.size(); ++i) {
        double d = double(pa[i]) - double(pb[i]);
        mse += d * d;
    }
    mse /= double(pa.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

namespace {

// Separable convolution with an odd symmetric kernel, zero padding. Only the
// interior (full-support) region is ever read by the SSIM pooling below.
std::vector<double> sep_filter(const std::vector<double>& img, int w, int h,
                               const std::vector<double>& k) {
    const int r = int(k.size()) / 2;
    std::vector<double> tmp(img.size(), 0.0), out(img.size(), 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                int xx = x + t;
                if (xx >= 0 && xx < w) acc += k[t + r] * img[size_t(y) * w + xx];
            }
            tmp[size_t(y) * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                int yy = y + t;
                if (yy >= 0 && yy < h) acc += k[t + r] * tmp[size_t(yy) * w + x];
            }
            out[size_t(y) * w + x] = acc;
        }
    return out;
}

} // namespace

double ssim(const GrayImage& ref, const GrayImage& test) {
    require_same_dims(ref, test, "ssim");
    constexpr int kWin = 11;
    constexpr double kSigma = 1.5;
    constexpr double kC1 = 0.01 * 0.01;
    constexpr double kC2 = 0.03 * 0.03;
    const int w = ref.width(), h = ref.height();
    require(w >= kWin && h >= kWin, "ssim: image smaller than 11x11 window");

    std::vector<double> kernel(kWin);
    double ksum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        double d = i - (kWin - 1) / 2.0;
        kernel[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        ksum += kernel[i];
    }
    for (auto& v : kernel) v /= ksum;

    const size_t n = size_t(w) * h;
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    auto pa = ref.pixels(), pb = test.pixels();
    for (size_t i = 0; i < n; ++i) {
        x[i] = pa[i];
        y[i] = pb[i];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    auto mx = sep_filter(x, w, h, kernel);
    auto my = sep_filter(y, w, h, kernel);
    auto mxx = sep_filter(xx, w, h, kernel);
    auto myy = sep_filter(yy, w, h, kernel);
    auto mxy = sep_filter(xy, w, h, kernel);

    const int r = kWin / 2;
    double acc = 0.0;
    size_t count = 0;
    for (int yy_ = r; yy_ < h - r; ++yy_)
        for (int xx_ = r; xx_ < w - r; ++xx_) {
            size_t i = size_t(yy_) * w + xx_;
            double ux = mx[i], uy = my[i];
            double vx = mxx[i] - ux * ux;
            double vy = myy[i] - uy * uy;
            double cxy = mxy[i] - ux * uy;
            // 2.0*(ux*uy) keeps the expression bitwise symmetric in (ref, test)
            double s = ((2.0 * (ux * uy) + kC1) * (2.0 * cxy + kC2)) /
                       ((ux * ux + uy * uy + kC1) * (vx + vy + kC2));
            acc += s;
            ++count;
        }
    return acc / double(count);
}

namespace {

// ---- FSIM internals ----

struct FsimMaps {
    std::vector<double> pc;   // phase congruency in [0,1]
    std::vector<double> grad; // Scharr gradient magnitude
};

// Phase congruency from a 4-scale x 4-orientation log-Gabor bank:
//   PC(x) = sum_o |sum_s e_so(x)| / (sum_o sum_s |e_so(x)| + eps)
// with radial log-Gabor (min wavelength 6, mult 2, sigmaOnF 0.55) and a
// Gaussian angular spread (sigma = pi/4 / 1.2) on a one-sided frequency plane.
std::vector<double> phase_congruency(const GrayImage& img) {
    const int w = img.width(), h = img.height();
    const size_t n = size_t(w) * h;
    constexpr int kScales = 4;
    constexpr int kOrients = 4;
    constexpr double kMinWavelength = 6.0;
    constexpr double kMult = 2.0;
    constexpr double kSigmaOnF = 0.55;
    constexpr double kEps = 1e-4;

    std::vector<Cplx> freq(n);
    auto px = img.pixels();
    for (size_t i = 0; i < n; ++i) freq[i] = Cplx(px[i], 0.0);
    fft2(freq, w, h, false);

    // normalized frequency grid
    std::vector<double> radius(n), theta(n);
    for (int y = 0; y < h; ++y) {
        double fy = (y <= h / 2 ? y : y - h) / double(h);
        for (int x = 0; x < w; ++x) {
            double fx = (x <= w / 2 ? x : x - w) / double(w);
            size_t i = size_t(y) * w + x;
            radius[i] = std::sqrt(fx * fx + fy * fy);
            theta[i] = std::atan2(-fy, fx);
        }
    }
    radius[0] = 1.0; // avoid log(0); DC is zeroed explicitly below

    const double log_sigma = std::log(kSigmaOnF);
    const double theta_sigma = kPi / kOrients / 1.2;

    std::vector<double> sum_energy(n, 0.0), sum_amp(n, 0.0);
    std::vector<Cplx> band(n), resp(n);
    std::vector<double> re_acc(n), im_acc(n);

    for (int o = 0; o < kOrients; ++o) {
        const double angle = o * kPi / kOrients;
        std::vector<double> spread(n);
        for (size_t i = 0; i < n; ++i) {
            double ds = std::sin(theta[i] - angle);
            double dc = std::cos(theta[i] - angle);
            double dt = std::atan2(ds, dc);
            spread[i] = std::exp(-dt * dt / (2.0 * theta_sigma * theta_sigma));
        }
        std::fill(re_acc.begin(), re_acc.end(), 0.0);
        std::fill(im_acc.begin(), im_acc.end(), 0.0);
        for (int s = 0; s < kScales; ++s) {
            const double f0 = 1.0 / (kMinWavelength * std::pow(kMult, s));
            for (size_t i = 0; i < n; ++i) {
                double lg = std::log(radius[i] / f0);
                double radial = std::exp(-lg * lg / (2.0 * log_sigma * log_sigma));
                band[i] = freq[i] * (radial * spread[i]);
            }
            band[0] = Cplx(0.0, 0.0);
            resp = band;
            fft2(resp, w, h, true);
            for (size_t i = 0; i < n; ++i) {
                re_acc[i] += resp[i].real();
                im_acc[i] += resp[i].imag();
                sum_amp[i] += std::abs(resp[i]);
            }
        }
        for (size_t i = 0; i < n; ++i)
            sum_energy[i] += std::sqrt(re_acc[i] * re_acc[i] + im_acc[i] * im_acc[i]);
    }

    std::vector<double> pc(n);
    for (size_t i = 0; i < n; ++i) pc[i] = sum_energy[i] / (sum_amp[i] + kEps);
    return pc;
}

std::vector<double> scharr_magnitude(const GrayImage& img) {
    const int w = img.width(), h = img.height();
    std::vector<double> g(size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto v = [&](int dx, int dy) { return double(img.at_clamped(x + dx, y + dy)); };
            double gx = (3.0 * v(1, -1) + 10.0 * v(1, 0) + 3.0 * v(1, 1) -
                         3.0 * v(-1, -1) - 10.0 * v(-1, 0) - 3.0 * v(-1, 1)) / 16.0;
            double gy = (3.0 * v(-1, 1) + 10.0 * v(0, 1) + 3.0 * v(1, 1) -
                         3.0 * v(-1, -1) - 10.0 * v(0, -1) - 3.0 * v(1, -1)) / 16.0;
            g[size_t(y) * w + x] = std::sqrt(gx * gx + gy * gy);
        }
    return g;
}

} // namespace

double fsim(const GrayImage& ref, const GrayImage& test) {
    require_same_dims(ref, test, "fsim");
    require(std::min(ref.width(), ref.height()) >= 32, "fsim: image too small (min dim 32)");
    constexpr double kT1 = 0.85;
    constexpr double kT2 = 160.0 / (255.0 * 255.0); // gradient term rescaled to unit range

    auto pc1 = phase_congruency(ref);
    auto pc2 = phase_congruency(test);
    auto g1 = scharr_magnitude(ref);
    auto g2 = scharr_magnitude(test);

    double num = 0.0, den = 0.0, plain = 0.0;
    const size_t n = pc1.size();
    for (size_t i = 0; i < n; ++i) {
        double spc = (2.0 * (pc1[i] * pc2[i]) + kT1) / (pc1[i] * pc1[i] + pc2[i] * pc2[i] + kT1);
        double sg = (2.0 * (g1[i] * g2[i]) + kT2) / (g1[i] * g1[i] + g2[i] * g2[i] + kT2);
        double s = spc * sg;
        double wgt = std::max(pc1[i], pc2[i]);
        num += s * wgt;
        den += wgt;
        plain += s;
    }
    // featureless pair (both PC maps ~zero): fall back to the unweighted mean
    if (den < 1e-12) return plain / double(n);
    return num / den;
}

QualityTriple quality_triple(const GrayImage& ref, const GrayImage& test) {
    return QualityTriple{psnr(ref, test), ssim(ref, test), fsim(ref, test)};
}

} // namespace irissr
