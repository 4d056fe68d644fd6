// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "irissr/cli/experiment.hpp"
#include "irissr/cli/fixtures.hpp"
#include "irissr/eval/eval.hpp"
#include "irissr/iris/encode.hpp"
#include "irissr/iris/match.hpp"
#include "irissr/metrics.hpp"
#include "irissr/resize.hpp"
#include "irissr/sr/engine.hpp"
#include "nn_gradcheck.hpp"

using namespace irissr;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool pass = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& info) {
        detail += (detail.empty() ? "" : "; ") + info;
    }
};

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "irissr_acceptance";
    fs::create_directories(dir);
    return dir;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

// ---- criterion 1: finite-difference gradients across every layer kind ----
Check criterion_gradients() {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    std::set<nn::LayerKind> seen;
    for (int i = 0; i < 50; ++i) {
        auto tiny = gradcheck::make_conditioned_tiny_net(1000 + uint64_t(i) * 37, i % 5);
        for (size_t l = 0; l < tiny.net.layer_count(); ++l) seen.insert(tiny.net.layer(l).kind());
        auto res = gradcheck::check_gradients(tiny, 1e-3);
        worst = std::max(worst, res.max_rel_err);
        if (res.max_rel_err >= 1e-3) {
            c.expect(false, "net " + std::to_string(i) + " rel err " + fmt(res.max_rel_err, 6) +
                                " at " + res.worst);
            break;
        }
    }
    for (auto kind : {nn::LayerKind::conv, nn::LayerKind::relu, nn::LayerKind::prelu,
                      nn::LayerKind::leaky_relu, nn::LayerKind::batch_norm,
                      nn::LayerKind::residual_add, nn::LayerKind::pixel_shuffle,
                      nn::LayerKind::dense, nn::LayerKind::sigmoid})
        c.expect(seen.count(kind) == 1,
                 std::string("layer kind not covered: ") + nn::layer_kind_name(kind));
    double dt = elapsed_s(t0);
    c.expect(dt < 120.0, "runtime " + fmt(dt, 1) + "s exceeds 2 min");
    c.note("50 nets, max rel err " + fmt(worst, 6) + ", " + fmt(dt, 1) + "s");
    return c;
}

// ---- criterion 2: architecture fidelity ----
Check criterion_architecture() {
    Check c;
    nn::Network srcnn = sr::build_srcnn();
    c.expect(srcnn.param_count() == 8129,
             "srcnn params " + std::to_string(srcnn.param_count()) + " != 8129");
    auto out = srcnn.infer_shape({1, 33, 33});
    c.expect(out.h == 21 && out.w == 21, "srcnn 33x33 output not 21x21");

    nn::Network vdcnn = sr::build_vdcnn(20);
    int convs = 0;
    bool all3 = true;
    for (size_t i = 0; i < vdcnn.layer_count(); ++i)
        if (vdcnn.layer(i).kind() == nn::LayerKind::conv) {
            ++convs;
            all3 &= vdcnn.layer(i).desc().i2 == 3;
        }
    c.expect(convs == 20, "vdcnn conv layers " + std::to_string(convs) + " != 20");
    c.expect(all3, "vdcnn kernel size not 3x3 throughout");

    sr::SrganNets nets = sr::build_srgan(4, 96);
    std::vector<int> channels;
    for (size_t i = 0; i < nets.discriminator.layer_count(); ++i)
        if (nets.discriminator.layer(i).kind() == nn::LayerKind::conv)
            channels.push_back(nets.discriminator.layer(i).desc().i0);
    c.expect(channels == std::vector<int>{64, 64, 128, 128, 256, 256, 512, 512},
             "discriminator channel schedule is not 64..512 doubling");
    c.note("srcnn 8129 params / 21x21; vdcnn 20 convs 3x3; disc 64->512");
    return c;
}

// ---- criterion 3: SR efficacy ordering at desk scale ----
Check criterion_efficacy(sr::SREngine* srcnn_out) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();

    std::vector<GrayImage> train, held;
    for (int i = 0; i < 24; ++i) train.push_back(cli::make_texture(64, 64, 500 + uint64_t(i)));
    for (int i = 0; i < 8; ++i) held.push_back(cli::make_texture(64, 64, 900 + uint64_t(i)));

    auto pairs = sr::prepare_pairs(
        train, {.factors = {2}, .patch = 25, .stride = 5, .budget = 500, .seed = 1});
    c.expect(pairs.size() <= 20000, "pair budget exceeded");

    sr::TrainOptions sopt;
    sopt.sgd = sr::default_srcnn_config();
    sopt.sgd.epochs = 20;
    sr::SREngine srcnn = sr::train_srcnn(pairs, sopt);

    sr::TrainOptions vopt;
    vopt.sgd = sr::default_vdcnn_config();
    vopt.sgd.epochs = 16;
    sr::SREngine vdcnn = sr::train_vdcnn(pairs, vopt, 8); // desk-scale depth

    sr::SREngine bicubic = sr::SREngine::interpolation(sr::EngineKind::bicubic);
    double pb = 0, ps = 0, pv = 0;
    for (const auto& img : held) {
        GrayImage low = degrade_full(img, 2).low;
        sr::SrOptions opt{.target_w = 64, .target_h = 64};
        pb += psnr(img, super_resolve(bicubic, low, 2, opt));
        ps += psnr(img, super_resolve(srcnn, low, 2, opt));
        pv += psnr(img, super_resolve(vdcnn, low, 2, opt));
    }
    pb /= 8;
    ps /= 8;
    pv /= 8;

    c.expect(ps >= pb + 0.3, "srcnn " + fmt(ps) + " not >= bicubic " + fmt(pb) + " + 0.3");
    c.expect(pv >= ps - 0.1, "vdcnn " + fmt(pv) + " not >= srcnn " + fmt(ps) + " - 0.1");
    double dt = elapsed_s(t0);
    c.expect(dt < 1800.0, "runtime " + fmt(dt, 1) + "s exceeds 30 min");
    c.note("psnr bicubic " + fmt(pb) + " srcnn " + fmt(ps) + " vdcnn " + fmt(pv) + ", " +
           fmt(dt, 1) + "s");
    if (srcnn_out) *srcnn_out = std::move(srcnn);
    return c;
}

// ---- criterion 4: residual identity ----
Check criterion_residual_identity() {
    Check c;
    nn::Network net = sr::build_vdcnn(6);
    Rng rng(5);
    net.init_he(rng);
    auto params = net.params();
    std::fill(params[params.size() - 2].value->begin(), params[params.size() - 2].value->end(),
              0.0f);
    std::fill(params[params.size() - 1].value->begin(), params[params.size() - 1].value->end(),
              0.0f);
    sr::SREngine engine = sr::SREngine::from_network(sr::EngineKind::vdcnn, std::move(net), {2},
                                                     {}, {});

    GrayImage img = cli::make_texture(48, 48, 77);
    GrayImage low = degrade_full(img, 2).low;
    GrayImage up = resize(low, 48, 48, ResizeKernel::bicubic);
    GrayImage rec = super_resolve(engine, low, 2);
    size_t mismatches = 0;
    for (size_t i = 0; i < up.size(); ++i) mismatches += rec.pixels()[i] != up.pixels()[i];
    c.expect(mismatches == 0,
             std::to_string(mismatches) + " pixels differ from the bicubic upscale");
    c.note("bitwise identical to bicubic upscale");
    return c;
}

// ---- criterion 5: PCA eigen-patch exactness ----
Check criterion_pca() {
    Check c;
    std::vector<GrayImage> imgs;
    for (int i = 0; i < 10; ++i) imgs.push_back(cli::make_texture(32, 32, 1300 + uint64_t(i)));
    auto model = sr::pca_train(imgs, 2, 8, 4);

    auto rms = [](const GrayImage& a, const GrayImage& b) {
        double acc = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            double d = double(a.pixels()[i]) - double(b.pixels()[i]);
            acc += d * d;
        }
        return std::sqrt(acc / double(a.size()));
    };
    double worst = 0;
    for (int j = 0; j < 10; ++j) {
        GrayImage rec = sr::pca_reconstruct(model, degrade_full(imgs[size_t(j)], 2).low);
        worst = std::max(worst, rms(rec, imgs[size_t(j)]));
    }
    c.expect(worst < 1e-4, "training-image recovery rms " + fmt(worst, 7));

    GrayImage la = degrade_full(imgs[2], 2).low;
    GrayImage lb = degrade_full(imgs[7], 2).low;
    std::vector<float> mix(la.size());
    for (size_t i = 0; i < mix.size(); ++i) mix[i] = 0.5f * (la.pixels()[i] + lb.pixels()[i]);
    GrayImage rec =
        sr::pca_reconstruct(model, GrayImage::from_data(16, 16, std::move(mix)));
    std::vector<float> expect(rec.size());
    for (size_t i = 0; i < expect.size(); ++i)
        expect[i] = 0.5f * (imgs[2].pixels()[i] + imgs[7].pixels()[i]);
    double lin = rms(rec, GrayImage::from_data_clamped(32, 32, std::move(expect)));
    c.expect(lin < 1e-4, "linearity rms " + fmt(lin, 7));
    c.note("recovery rms " + fmt(worst, 7) + ", linearity rms " + fmt(lin, 7));
    return c;
}

// ---- criterion 6: metric oracles ----
Check criterion_metrics() {
    Check c;
    GrayImage half(16, 16, 0.5f), quarter(16, 16, 0.25f);
    double p = psnr(half, quarter);
    c.expect(std::fabs(p - 12.0412) <= 1e-3, "psnr(0.5,0.25) = " + fmt(p, 6));

    GrayImage tex = cli::make_texture(48, 48, 4242);
    c.expect(ssim(tex, tex) == 1.0, "ssim(identical) != 1.0");
    c.expect(fsim(tex, tex) == 1.0, "fsim(identical) != 1.0");

    GrayImage zero(20, 20, 0.0f), one(20, 20, 1.0f);
    double s = ssim(zero, one);
    c.expect(std::fabs(s - 9.999e-5) <= 1e-7, "ssim(0,1) = " + fmt(s, 10));

    GrayImage other = degrade(tex, 2);
    c.expect(std::fabs(psnr(tex, other) - psnr(other, tex)) <= 1e-9, "psnr asymmetric");
    c.expect(std::fabs(ssim(tex, other) - ssim(other, tex)) <= 1e-9, "ssim asymmetric");
    c.expect(std::fabs(fsim(tex, other) - fsim(other, tex)) <= 1e-9, "fsim asymmetric");
    c.note("psnr " + fmt(p, 5) + ", ssim(0,1) " + fmt(s, 9));
    return c;
}

// ---- criterion 7: matcher statistics ----
Check criterion_matcher() {
    Check c;
    Rng rng(2024);
    auto random_code = [&rng] {
        iris::IrisCode code = iris::IrisCode::empty(iris::CodeScheme::gabor, 4, 512, 8);
        for (auto& w : code.bits) w = rng.next_u64();
        for (auto& w : code.mask) w = ~uint64_t(0);
        return code;
    };

    iris::IrisCode a = random_code();
    c.expect(iris::hamming_distance(a, a, 0) == 0.0, "identical codes HD != 0");
    iris::IrisCode b = a;
    for (auto& w : b.bits) w = ~w;
    c.expect(iris::hamming_distance(a, b, 0) == 1.0, "complementary codes HD != 1");

    double lo = 1, hi = 0;
    for (int trial = 0; trial < 100; ++trial) {
        iris::IrisCode x = random_code();
        iris::IrisCode y = random_code();
        double hd = iris::hamming_distance(x, y, 0);
        lo = std::min(lo, hd);
        hi = std::max(hi, hd);
    }
    c.expect(lo >= 0.5 - 0.0083 && hi <= 0.5 + 0.0083,
             "random-code HD range [" + fmt(lo, 5) + ", " + fmt(hi, 5) + "] outside 0.5 +- 0.0083");

    iris::IrisCode x = random_code(), y = random_code();
    double prev = 2;
    bool monotone = true;
    for (int s : {0, 1, 2, 4, 8, 16}) {
        double hd = iris::hamming_distance(x, y, s);
        monotone &= hd <= prev;
        prev = hd;
    }
    c.expect(monotone, "shift-minimum not monotone in the shift budget");
    c.note("random HD in [" + fmt(lo, 5) + ", " + fmt(hi, 5) + "]");
    return c;
}

// ---- criterion 8: EER correctness ----
double eer_oracle(const eval::ScoreSet& s) {
    auto dist = [&](double v) { return s.polarity == eval::Polarity::distance ? v : -v; };
    std::vector<double> distinct;
    for (double v : s.genuine) distinct.push_back(dist(v));
    for (double v : s.impostor) distinct.push_back(dist(v));
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<double> ts;
    ts.push_back(-std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < distinct.size(); ++i) {
        ts.push_back(distinct[i]);
        if (i + 1 < distinct.size()) ts.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    }
    ts.push_back(std::numeric_limits<double>::infinity());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::vector<double> fars, frrs;
    for (double t : ts) {
        double fa = 0, fr = 0;
        for (double v : s.impostor) fa += dist(v) < t ? 1.0 : (dist(v) == t ? 0.5 : 0.0);
        for (double v : s.genuine) fr += dist(v) > t ? 1.0 : (dist(v) == t ? 0.5 : 0.0);
        fars.push_back(fa / double(s.impostor.size()));
        frrs.push_back(fr / double(s.genuine.size()));
    }
    for (size_t i = 0; i + 1 < fars.size(); ++i) {
        double d0 = frrs[i] - fars[i], d1 = frrs[i + 1] - fars[i + 1];
        if (d0 >= 0 && d1 <= 0) {
            if (d0 == d1) return fars[i];
            double alpha = d0 / (d0 - d1);
            return fars[i] + alpha * (fars[i + 1] - fars[i]);
        }
    }
    return 0.5;
}

Check criterion_eer() {
    Check c;
    eval::ScoreSet sep{{0.1, 0.2}, {0.3, 0.4}, eval::Polarity::distance};
    c.expect(eval::compute_eer(sep) == 0.0, "perfect separation EER != 0");

    eval::ScoreSet same;
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        double v = rng.uniform(0, 1);
        same.genuine.push_back(v);
        same.impostor.push_back(v);
    }
    double es = eval::compute_eer(same);
    c.expect(std::fabs(es - 0.5) <= 1.0 / 500, "identical distributions EER " + fmt(es, 5));

    eval::ScoreSet gauss;
    for (int i = 0; i < 100000; ++i) {
        gauss.genuine.push_back(rng.normal());
        gauss.impostor.push_back(rng.normal() + 2.0);
    }
    double eg = eval::compute_eer(gauss);
    c.expect(std::fabs(eg - 0.158655) <= 0.01, "gaussian EER " + fmt(eg, 5) + " != 0.1587 +- 0.01");

    double worst = 0;
    for (int trial = 0; trial < 6; ++trial) {
        eval::ScoreSet s;
        s.polarity = trial % 2 ? eval::Polarity::similarity : eval::Polarity::distance;
        int ng = rng.uniform_int(10, 1000), ni = rng.uniform_int(10, 1000);
        for (int i = 0; i < ng; ++i) s.genuine.push_back(std::round(rng.uniform(0, 1) * 50) / 50);
        for (int i = 0; i < ni; ++i) s.impostor.push_back(std::round(rng.uniform(0, 1) * 50) / 50);
        worst = std::max(worst, std::fabs(eval::compute_eer(s) - eer_oracle(s)));
    }
    c.expect(worst <= 1e-12, "sweep deviates from brute force by " + fmt(worst, 15));
    c.note("gaussian EER " + fmt(eg, 5) + ", oracle gap " + fmt(worst, 15));
    return c;
}

// ---- criterion 9 and 10: end-to-end verification, determinism, round trip ----
struct EndToEnd {
    Check c9, c10;
};

EndToEnd criteria_end_to_end(sr::SREngine* srcnn_model) {
    EndToEnd result;
    Check& c = result.c9;
    auto t0 = std::chrono::steady_clock::now();

    fs::path dir = work_dir() / "e2e";
    fs::remove_all(dir);
    fs::create_directories(dir);
    cli::generate_eye_corpus(dir / "eyes", 20, 4, 128, 90);

    // original-resolution pipeline with automatic segmentation
    cli::VerifyResult orig = cli::cmd_verify(dir / "eyes" / "enroll.csv",
                                             dir / "eyes" / "probe.csv", "gabor", "auto",
                                             dir / "verify_orig");
    c.expect(orig.eer < 0.10, "original-resolution EER " + fmt(orig.eer, 4) + " not < 0.10");

    // degradation sweep
    {
        std::ofstream out(dir / "sweep.toml");
        out << "out_dir = \"sweep_out\"\nseed = 11\nfactors = [2, 16]\nmatchers = [\"gabor\"]\n"
            << "segmentation = \"sidecar\"\n"
            << "enroll_manifest = \"eyes/enroll.csv\"\nprobe_manifest = \"eyes/probe.csv\"\n"
            << "[[engine]]\nkind = \"bicubic\"\n";
    }
    cli::ExperimentConfig cfg = cli::load_experiment_config(dir / "sweep.toml");
    cli::ExperimentResult sweep = cli::run_experiment(cfg);
    double eer2 = -1, eer16 = -1;
    for (const auto& row : sweep.rows) {
        if (row.factor == 2) eer2 = row.eer;
        if (row.factor == 16) eer16 = row.eer;
    }
    c.expect(eer2 >= 0 && eer16 >= 0, "sweep rows missing");
    c.expect(eer16 >= eer2, "EER(16) " + fmt(eer16, 4) + " < EER(2) " + fmt(eer2, 4));
    double dt = elapsed_s(t0);
    c.expect(dt < 600.0, "runtime " + fmt(dt, 1) + "s exceeds 10 min");
    c.note("EER orig " + fmt(orig.eer, 4) + ", f2 " + fmt(eer2, 4) + ", f16 " + fmt(eer16, 4) +
           ", " + fmt(dt, 1) + "s");

    // criterion 10: repeat the seeded experiment, byte-compare the report
    Check& d = result.c10;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    std::string first = slurp(dir / "sweep_out" / "report.csv");
    fs::remove_all(dir / "sweep_out");
    cli::run_experiment(cfg);
    std::string second = slurp(dir / "sweep_out" / "report.csv");
    d.expect(!first.empty() && first == second, "repeated runs differ in report.csv");

    // model file round trip must keep reconstructions bitwise identical
    if (srcnn_model && srcnn_model->trainable()) {
        fs::path model_path = dir / "srcnn.model";
        srcnn_model->save(model_path);
        sr::SREngine back = sr::SREngine::load(model_path);
        GrayImage probe = degrade_full(cli::make_texture(48, 48, 7007), 2).low;
        GrayImage r1 = super_resolve(*srcnn_model, probe, 2);
        GrayImage r2 = super_resolve(back, probe, 2);
        size_t diff = 0;
        for (size_t i = 0; i < r1.size(); ++i) diff += r1.pixels()[i] != r2.pixels()[i];
        d.expect(diff == 0, "model round trip changed " + std::to_string(diff) + " pixels");
    } else {
        d.expect(false, "no trained model available for the round-trip check");
    }
    d.note("byte-identical report.csv; bitwise round-trip reconstruction");
    return result;
}

// ---- criterion 11: pair-count formula ----
Check criterion_pair_counts() {
    Check c;
    std::vector<std::pair<std::string, int>> templates;
    int cls = 0;
    auto add = [&](int classes, int samples) {
        for (int i = 0; i < classes; ++i, ++cls)
            for (int k = 0; k < samples; ++k) templates.push_back({"c" + std::to_string(cls), 0});
    };
    add(269, 3);
    add(41, 5);
    add(86, 10);
    c.expect(templates.size() == 1872, "template count != 1872");
    c.expect(cls == 396, "class count != 396");

    std::function<double(const int&, const int&)> matcher = [](const int&, const int&) {
        return 0.5;
    };
    eval::ScoreSet s = eval::pair_scores<int>(templates, matcher, eval::Polarity::distance);
    c.expect(s.genuine.size() == 5087,
             "genuine " + std::to_string(s.genuine.size()) + " != 5087");
    c.expect(s.impostor.size() == 1746169,
             "impostor " + std::to_string(s.impostor.size()) + " != 1746169");
    c.note(std::to_string(s.genuine.size()) + " genuine / " + std::to_string(s.impostor.size()) +
           " impostor");
    return c;
}

int report(int id, const char* name, const Check& c) {
    std::printf("[%s] criterion %2d: %s%s%s\n", c.pass ? "PASS" : "FAIL", id, name,
                c.detail.empty() ? "" : " — ", c.detail.c_str());
    std::fflush(stdout);
    return c.pass ? 0 : 1;
}

} // namespace

int main() {
    int failures = 0;
    failures += report(1, "gradient correctness", criterion_gradients());
    failures += report(2, "architecture fidelity", criterion_architecture());

    sr::SREngine srcnn;
    failures += report(3, "SR efficacy ordering", criterion_efficacy(&srcnn));
    failures += report(4, "residual identity", criterion_residual_identity());
    failures += report(5, "PCA eigen-patch exactness", criterion_pca());
    failures += report(6, "metric oracles", criterion_metrics());
    failures += report(7, "matcher statistics", criterion_matcher());
    failures += report(8, "EER correctness", criterion_eer());

    EndToEnd e2e = criteria_end_to_end(&srcnn);
    failures += report(9, "end-to-end synthetic verification", e2e.c9);
    failures += report(10, "determinism and round-trip", e2e.c10);
    failures += report(11, "pair-count formula", criterion_pair_counts());

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAILURE" : "SUCCESS", failures);
    return failures ? 1 : 0;
}
