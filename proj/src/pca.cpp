#include "irissr/sr/pca.hpp"

#include <cmath>

#include "irissr/resize.hpp"

namespace irissr::sr {

void symmetric_eigen(std::vector<double>& a, int n, std::vector<double>& values,
                     std::vector<double>& vecs) {
    require(int(a.size()) == n * n, "symmetric_eigen: bad matrix size");
    vecs.assign(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vecs[size_t(i) * n + i] = 1.0;

    auto at = [&a, n](int r, int c) -> double& { return a[size_t(r) * n + c]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = vecs[size_t(k) * n + p], vkq = vecs[size_t(k) * n + q];
                    vecs[size_t(k) * n + p] = c * vkp - s * vkq;
                    vecs[size_t(k) * n + q] = s * vkp + c * vkq;
                }
            }
    }
    values.resize(n);
    for (int i = 0; i < n; ++i) values[i] = at(i, i);

    // sort descending, reordering columns
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return values[x] > values[y]; });
    std::vector<double> sv(n), svecs(size_t(n) * n);
    for (int i = 0; i < n; ++i) {
        sv[i] = values[order[i]];
        for (int r = 0; r < n; ++r) svecs[size_t(r) * n + i] = vecs[size_t(r) * n + order[i]];
    }
    values = std::move(sv);
    vecs = std::move(svecs);
}

namespace {

// Grid origins covering [0, extent-patch] at the overlap-determined step; the
// final origin is clamped so the grid always reaches the far edge.
std::vector<int> grid_origins(int extent, int patch, int step) {
    std::vector<int> xs;
    for (int x = 0;; x += step) {
        if (x + patch >= extent) {
            xs.push_back(extent - patch);
            break;
        }
        xs.push_back(x);
    }
    return xs;
}

} // namespace

PCAEigenPatchModel pca_train(const std::vector<GrayImage>& hr_images, int factor, int patch,
                             int overlap) {
    require(!hr_images.empty(), "pca_train: no training images");
    require(factor >= 2, "pca_train: factor must be >= 2");
    require(overlap >= 0 && overlap < patch, "pca_train: overlap must be in [0, patch)");
    const int M = int(hr_images.size());
    const int hw = hr_images[0].width(), hh = hr_images[0].height();
    for (const auto& img : hr_images)
        require(img.width() == hw && img.height() == hh,
                "pca_train: training images must share dimensions");
    require(hw % factor == 0 && hh % factor == 0,
            "pca_train: image dimensions must be divisible by the factor");

    PCAEigenPatchModel model;
    model.factor = factor;
    model.patch = patch;
    model.overlap = overlap;
    model.hr_w = hw;
    model.hr_h = hh;
    model.lr_w = hw / factor;
    model.lr_h = hh / factor;
    model.train_count = M;
    require(patch <= model.lr_w && patch <= model.lr_h, "pca_train: patch exceeds LR raster");
    if (M == 1) model.warning = "single training image: rank-0 model reproduces it verbatim";

    for (const auto& img : hr_images) {
        const auto px = img.pixels();
        model.hr_images.emplace_back(px.begin(), px.end());
    }

    // LR rasters of the training set
    std::vector<GrayImage> lows;
    lows.reserve(M);
    for (const auto& img : hr_images) lows.push_back(degrade_full(img, factor).low);

    const int step = patch - overlap;
    const auto xs = grid_origins(model.lr_w, patch, step);
    const auto ys = grid_origins(model.lr_h, patch, step);
    const int pp = patch * patch;

    for (int gy : ys)
        for (int gx : xs) {
            PCAEigenPatchModel::Position pos;
            pos.x = gx;
            pos.y = gy;

            // centered LR patch matrix C (pp x M), double for the eigen step
            std::vector<double> C(size_t(pp) * M);
            std::vector<double> mean(pp, 0.0);
            for (int m = 0; m < M; ++m)
                for (int i = 0; i < pp; ++i) {
                    double v = lows[m].at(gx + i % patch, gy + i / patch);
                    C[size_t(i) * M + m] = v;
                    mean[i] += v / M;
                }
            for (int m = 0; m < M; ++m)
                for (int i = 0; i < pp; ++i) C[size_t(i) * M + m] -= mean[i];

            // Gram matrix and its eigen-decomposition
            std::vector<double> gram(size_t(M) * M, 0.0);
            for (int mj = 0; mj < M; ++mj)
                for (int mk = mj; mk < M; ++mk) {
                    double acc = 0.0;
                    for (int i = 0; i < pp; ++i) acc += C[size_t(i) * M + mj] * C[size_t(i) * M + mk];
                    gram[size_t(mj) * M + mk] = acc;
                    gram[size_t(mk) * M + mj] = acc;
                }
            std::vector<double> lambda, V;
            symmetric_eigen(gram, M, lambda, V);

            const double tol = std::max(lambda.empty() ? 0.0 : lambda[0], 1.0) * 1e-12;
            int rank = 0;
            while (rank < M && lambda[rank] > tol) ++rank;
            pos.rank = rank;

            pos.mean_lr.assign(mean.begin(), mean.end());
            pos.eigen.resize(size_t(rank) * pp);
            pos.eigval.resize(rank);
            pos.proj.resize(size_t(rank) * M);
            for (int j = 0; j < rank; ++j) {
                pos.eigval[j] = float(lambda[j]);
                const double inv_sqrt = 1.0 / std::sqrt(lambda[j]);
                // eigen-patch u_j = C * v_j / sqrt(lambda_j)
                for (int i = 0; i < pp; ++i) {
                    double acc = 0.0;
                    for (int m = 0; m < M; ++m) acc += C[size_t(i) * M + m] * V[size_t(m) * M + j];
                    pos.eigen[size_t(j) * pp + i] = float(acc * inv_sqrt);
                }
                // projections of the training patches: w_j(m) = sqrt(lambda_j) * v_j(m)
                for (int m = 0; m < M; ++m)
                    pos.proj[size_t(j) * M + m] = float(std::sqrt(lambda[j]) * V[size_t(m) * M + j]);
            }
            model.positions.push_back(std::move(pos));
        }
    return model;
}

GrayImage pca_reconstruct(const PCAEigenPatchModel& model, const GrayImage& lr_image) {
    require(lr_image.width() == model.lr_w && lr_image.height() == model.lr_h,
            "pca_reconstruct: LR geometry mismatch");
    const int M = model.train_count;
    const int pp = model.patch * model.patch;
    const int f = model.factor;
    const int hp = model.patch * f; // HR patch side

    std::vector<double> acc(size_t(model.hr_w) * model.hr_h, 0.0);
    std::vector<double> weight(acc.size(), 0.0);

    std::vector<double> centered(pp), eig_w, comb(M);
    std::vector<double> mean_hr(size_t(hp) * hp);
    for (const auto& pos : model.positions) {
        for (int i = 0; i < pp; ++i)
            centered[i] =
                double(lr_image.at(pos.x + i % model.patch, pos.y + i / model.patch)) -
                double(pos.mean_lr[i]);

        // eigen-space weights, then combination weights over training patches
        eig_w.assign(pos.rank, 0.0);
        for (int j = 0; j < pos.rank; ++j) {
            double acc_w = 0.0;
            const float* u = pos.eigen.data() + size_t(j) * pp;
            for (int i = 0; i < pp; ++i) acc_w += double(u[i]) * centered[i];
            eig_w[j] = acc_w;
        }
        std::fill(comb.begin(), comb.end(), 0.0);
        for (int j = 0; j < pos.rank; ++j) {
            const double scaled = eig_w[j] / double(pos.eigval[j]);
            const float* pj = pos.proj.data() + size_t(j) * M;
            for (int m = 0; m < M; ++m) comb[m] += scaled * double(pj[m]);
        }

        // y = mean_H + sum_m c_m (h_m - mean_H), blended into the output
        const int hx = pos.x * f, hy = pos.y * f;
        std::fill(mean_hr.begin(), mean_hr.end(), 0.0);
        for (int m = 0; m < M; ++m) {
            const auto& img = model.hr_images[m];
            for (int i = 0; i < hp * hp; ++i)
                mean_hr[i] += img[size_t(hy + i / hp) * model.hr_w + hx + i % hp] / double(M);
        }
        for (int i = 0; i < hp * hp; ++i) {
            double y = mean_hr[i];
            for (int m = 0; m < M; ++m) {
                const auto& img = model.hr_images[m];
                y += comb[m] *
                     (double(img[size_t(hy + i / hp) * model.hr_w + hx + i % hp]) - mean_hr[i]);
            }
            size_t out_idx = size_t(hy + i / hp) * model.hr_w + hx + i % hp;
            acc[out_idx] += y;
            weight[out_idx] += 1.0;
        }
    }

    std::vector<float> out(acc.size());
    for (size_t i = 0; i < acc.size(); ++i)
        out[i] = float(weight[i] > 0 ? acc[i] / weight[i] : 0.0);
    return GrayImage::from_data_clamped(model.hr_w, model.hr_h, std::move(out));
}

} // namespace irissr::sr
