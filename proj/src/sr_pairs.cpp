#include "irissr/sr/pairs.hpp"

#include "irissr/resize.hpp"
#include "irissr/rng.hpp"

namespace irissr::sr {

std::vector<TrainingPair> prepare_pairs(const std::vector<GrayImage>& images,
                                        const PairOptions& opt) {
    require(!images.empty(), "prepare_pairs: empty image set");
    require(!opt.factors.empty(), "prepare_pairs: no factors requested");
    require(opt.patch >= 1 && opt.stride >= 1, "prepare_pairs: bad patch geometry");
    for (int f : opt.factors) {
        require(f >= 2, "prepare_pairs: factor must be >= 2");
        if (opt.srgan_mode)
            require(opt.patch % f == 0, "prepare_pairs: srgan patch must be divisible by factor");
        require(opt.patch / f >= 1, "prepare_pairs: patch smaller than factor");
    }

    struct Slot {
        int image, x, y, factor;
    };
    std::vector<Slot> slots;
    for (size_t i = 0; i < images.size(); ++i) {
        const auto& img = images[i];
        require(opt.patch <= std::min(img.width(), img.height()),
                "prepare_pairs: patch exceeds image " + std::to_string(i));
        for (int y = 0; y + opt.patch <= img.height(); y += opt.stride)
            for (int x = 0; x + opt.patch <= img.width(); x += opt.stride)
                for (int f : opt.factors) slots.push_back({int(i), x, y, f});
    }

    Rng rng(opt.seed);
    rng.shuffle(slots);
    if (opt.budget > 0 && slots.size() > opt.budget) slots.resize(opt.budget);

    std::vector<TrainingPair> pairs;
    pairs.reserve(slots.size());
    for (const auto& s : slots) {
        TrainingPair p;
        p.hr_patch = images[size_t(s.image)].crop(s.x, s.y, opt.patch, opt.patch);
        p.factor = s.factor;
        if (opt.srgan_mode)
            p.lr_patch = degrade_full(p.hr_patch, s.factor).low;
        else
            p.lr_patch = degrade(p.hr_patch, s.factor);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

} // namespace irissr::sr
