#include "irissr/iris/segment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace irissr::iris {

namespace {

constexpr double kTwoPi = 6.283185307179586;

double bilinear(const GrayImage& img, double x, double y) {
    int x0 = int(std::floor(x)), y0 = int(std::floor(y));
    double fx = x - x0, fy = y - y0;
    auto v = [&](int xx, int yy) { return double(img.at_clamped(xx, yy)); };
    return (1 - fx) * (1 - fy) * v(x0, y0) + fx * (1 - fy) * v(x0 + 1, y0) +
           (1 - fx) * fy * v(x0, y0 + 1) + fx * fy * v(x0 + 1, y0 + 1);
}

// Mean radial intensity jump across the circle boundary, sampled at `n`
// angles; the boundary vote both searches drive.
double boundary_score(const GrayImage& img, double cx, double cy, double r, int n = 64) {
    double acc = 0;
    int used = 0;
    for (int a = 0; a < n; ++a) {
        double ang = kTwoPi * a / n;
        double ux = std::cos(ang), uy = std::sin(ang);
        double xo = cx + (r + 1.5) * ux, yo = cy + (r + 1.5) * uy;
        double xi = cx + (r - 1.5) * ux, yi = cy + (r - 1.5) * uy;
        if (xo < 0 || yo < 0 || xo > img.width() - 1 || yo > img.height() - 1) continue;
        acc += bilinear(img, xo, yo) - bilinear(img, xi, yi);
        ++used;
    }
    return used > n / 2 ? acc / used : 0.0;
}

} // namespace

SegmentationResult segment(const GrayImage& img) {
    SegmentationResult out;
    if (img.width() < 64 || img.height() < 64) return out;

    // dark threshold from the intensity statistics
    double lo = 1.0, mean = 0.0;
    for (float v : img.pixels()) {
        lo = std::min(lo, double(v));
        mean += v;
    }
    mean /= double(img.size());
    const double threshold = lo + 0.25 * (mean - lo);

    // candidate pupil from the dark mask
    double sx = 0, sy = 0;
    size_t count = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (img.at(x, y) <= threshold) {
                sx += x;
                sy += y;
                ++count;
            }
    if (count < 16 || count > img.size() / 2) return out; // blank or saturated image
    const double cx0 = sx / double(count), cy0 = sy / double(count);
    const double r0 = std::sqrt(double(count) / M_PI);

    // local vote over center and radius around the mask estimate
    double best = 0;
    Circle pupil;
    for (double r = std::max(2.0, 0.6 * r0); r <= 1.4 * r0 + 1; r += 1.0)
        for (int dy = -6; dy <= 6; dy += 2)
            for (int dx = -6; dx <= 6; dx += 2) {
                double score = boundary_score(img, cx0 + dx, cy0 + dy, r);
                if (score > best) {
                    best = score;
                    pupil = {cx0 + dx, cy0 + dy, r};
                }
            }
    // refine center at single-pixel steps
    for (int pass = 0; pass < 2 && best > 0; ++pass) {
        Circle base = pupil;
        for (double r = base.r - 1; r <= base.r + 1; r += 0.5)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    double score = boundary_score(img, base.cx + dx, base.cy + dy, r, 128);
                    if (score > best) {
                        best = score;
                        pupil = {base.cx + dx, base.cy + dy, r};
                    }
                }
    }
    if (best < 0.05) return out; // no convincing pupil boundary

    // iris boundary: integro-differential search around the pupil center
    double ibest = 0;
    Circle limbus;
    const double rmax = 0.48 * std::min(img.width(), img.height());
    for (int dy = -3; dy <= 3; dy += 3)
        for (int dx = -3; dx <= 3; dx += 3)
            for (double r = std::max(pupil.r * 1.15, pupil.r + 3); r <= rmax; r += 1.0) {
                double score = boundary_score(img, pupil.cx + dx, pupil.cy + dy, r, 128);
                if (score > ibest) {
                    ibest = score;
                    limbus = {pupil.cx + dx, pupil.cy + dy, r};
                }
            }
    if (ibest < 0.02 || limbus.r <= pupil.r) return out;

    // pupil center must sit inside the iris circle
    double dc = std::hypot(pupil.cx - limbus.cx, pupil.cy - limbus.cy);
    if (dc >= limbus.r) return out;

    out.pupil = pupil;
    out.iris = limbus;
    out.usable = true;
    return out;
}

namespace {

Circle parse_circle(const std::string& line, const std::string& file) {
    std::istringstream ss(line);
    Circle c;
    char comma1 = 0, comma2 = 0;
    ss >> c.cx >> comma1 >> c.cy >> comma2 >> c.r;
    require(!ss.fail() && comma1 == ',' && comma2 == ',',
            "segmentation sidecar: malformed line in " + file + ": " + line);
    return c;
}

} // namespace

SegmentationResult load_segmentation(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "missing segmentation sidecar: " + path.string());
    std::string l1, l2;
    require(bool(std::getline(in, l1)) && bool(std::getline(in, l2)),
            "segmentation sidecar needs two lines: " + path.string());
    SegmentationResult seg;
    seg.pupil = parse_circle(l1, path.string());
    seg.iris = parse_circle(l2, path.string());
    require(seg.pupil.r > 0 && seg.iris.r > 0, "segmentation sidecar: radii must be positive");
    require(seg.pupil.r < seg.iris.r, "segmentation sidecar: pupil radius must be below iris");
    require(std::hypot(seg.pupil.cx - seg.iris.cx, seg.pupil.cy - seg.iris.cy) < seg.iris.r,
            "segmentation sidecar: pupil center outside iris circle");
    seg.usable = true;
    return seg;
}

void save_segmentation(const SegmentationResult& seg, const std::filesystem::path& path) {
    std::ofstream out(path);
    require(out.good(), "cannot write segmentation sidecar: " + path.string());
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f\n%.3f,%.3f,%.3f\n", seg.pupil.cx,
                  seg.pupil.cy, seg.pupil.r, seg.iris.cx, seg.iris.cy, seg.iris.r);
    out << buf;
}

} // namespace irissr::iris
