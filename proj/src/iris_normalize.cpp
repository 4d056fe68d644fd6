#include "irissr/iris/normalize.hpp"

#include <cmath>

namespace irissr::iris {

NormalizedIris normalize(const GrayImage& img, const SegmentationResult& seg) {
    require(seg.usable, "normalize: segmentation is not usable");
    // the iris circle must intersect the image at all
    require(seg.iris.cx + seg.iris.r > 0 && seg.iris.cy + seg.iris.r > 0 &&
                seg.iris.cx - seg.iris.r < img.width() - 1 &&
                seg.iris.cy - seg.iris.r < img.height() - 1,
            "normalize: segmentation circles entirely outside the image");

    NormalizedIris out;
    out.texture = GrayImage(kNormCols, kNormRows, 0.0f);
    out.mask.assign(size_t(kNormRows) * kNormCols, 0);

    for (int col = 0; col < kNormCols; ++col) {
        const double theta = 2.0 * M_PI * col / kNormCols;
        const double ux = std::cos(theta), uy = std::sin(theta);
        const double px = seg.pupil.cx + seg.pupil.r * ux;
        const double py = seg.pupil.cy + seg.pupil.r * uy;
        const double ix = seg.iris.cx + seg.iris.r * ux;
        const double iy = seg.iris.cy + seg.iris.r * uy;
        for (int row = 0; row < kNormRows; ++row) {
            const double t = (row + 0.5) / kNormRows;
            const double x = (1.0 - t) * px + t * ix;
            const double y = (1.0 - t) * py + t * iy;
            const bool inside_image =
                x >= 0.0 && y >= 0.0 && x <= img.width() - 1.0 && y <= img.height() - 1.0;
            const bool inside_pupil =
                std::hypot(x - seg.pupil.cx, y - seg.pupil.cy) < seg.pupil.r - 1e-9;
            if (!inside_image || inside_pupil) continue;

            int x0 = int(std::floor(x)), y0 = int(std::floor(y));
            double fx = x - x0, fy = y - y0;
            auto v = [&](int xx, int yy) { return double(img.at_clamped(xx, yy)); };
            double sample = (1 - fx) * (1 - fy) * v(x0, y0) + fx * (1 - fy) * v(x0 + 1, y0) +
                            (1 - fx) * fy * v(x0, y0 + 1) + fx * fy * v(x0 + 1, y0 + 1);
            out.texture.at(col, row) = float(std::clamp(sample, 0.0, 1.0));
            out.mask[size_t(row) * kNormCols + col] = 1;
        }
    }
    return out;
}

} // namespace irissr::iris
