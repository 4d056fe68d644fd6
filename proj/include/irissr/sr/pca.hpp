#pragma once

#include <string>
#include <vector>

#include "irissr/image.hpp"

namespace irissr::sr {

// Position-wise PCA dictionaries for eigen-patch hallucination. The LR
// raster of every training image is cut into overlapping patches on a fixed
// grid; each grid position i keeps the PCA basis of its LR patches plus the
// projections of the training patches. HR counterparts are read from the
// stored training images at the collocated (factor-scaled) position.
struct PCAEigenPatchModel {
    int factor = 0;
    int patch = 8;   // LR-scale patch side
    int overlap = 4; // LR-scale overlap between neighboring patches
    int lr_w = 0, lr_h = 0;
    int hr_w = 0, hr_h = 0;
    int train_count = 0; // M

    struct Position {
        int x = 0, y = 0;           // LR patch origin
        int rank = 0;               // kept eigen-patches r (<= M)
        std::vector<float> mean_lr; // patch*patch
        std::vector<float> eigen;   // r vectors of length patch*patch, concatenated
        std::vector<float> eigval;  // r, descending
        std::vector<float> proj;    // r x M projections of the training patches
    };
    std::vector<Position> positions;

    // Training HR images, row-major hr_w x hr_h each; H_i patches are views
    // into these.
    std::vector<std::vector<float>> hr_images;

    std::string warning; // set for degenerate training sets (single image)
};

// Eigen-decomposition of the per-position LR patch sets via the M x M Gram
// matrix. HR images must share dimensions divisible by `factor`.
PCAEigenPatchModel pca_train(const std::vector<GrayImage>& hr_images, int factor,
                             int patch = 8, int overlap = 4);

// Projects each LR patch of the input onto the position's eigen-patches,
// converts the eigen-space weights to combination weights over the training
// patches, and blends the same weighting of collocated HR patches; overlaps
// are averaged uniformly.
GrayImage pca_reconstruct(const PCAEigenPatchModel& model, const GrayImage& lr_image);

// Symmetric eigensolver (cyclic Jacobi) used by pca_train; exposed for
// reuse. `a` is n x n row-major and is destroyed. Returns eigenvalues
// descending with matching columns in `vecs` (row-major n x n: vecs[r*n+c]
// is component r of eigenvector c).
void symmetric_eigen(std::vector<double>& a, int n, std::vector<double>& values,
                     std::vector<double>& vecs);

} // namespace irissr::sr
