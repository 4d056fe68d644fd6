// Command-line front end: fixtures | train | sr | assess | verify | experiment.

#include <CLI11.hpp>
#include <cstdio>

#include "irissr/cli/experiment.hpp"
#include "irissr/cli/fixtures.hpp"

using namespace irissr;
using namespace irissr::cli;

int main(int argc, char** argv) {
    CLI::App app{"iris super-resolution benchmarking toolkit"};
    app.require_subcommand(1);

    // ---- fixtures ----
    auto* fixtures = app.add_subcommand("fixtures", "generate synthetic data");
    std::string fix_kind = "eyes";
    std::string fix_out = "fixtures";
    int fix_count = 16, fix_subjects = 20, fix_samples = 4, fix_size = 128;
    uint64_t fix_seed = 1;
    fixtures->add_option("kind", fix_kind, "textures or eyes")->required();
    fixtures->add_option("--out", fix_out, "output directory");
    fixtures->add_option("--count", fix_count, "texture count");
    fixtures->add_option("--subjects", fix_subjects, "eye subjects");
    fixtures->add_option("--samples", fix_samples, "samples per subject");
    fixtures->add_option("--size", fix_size, "image side in pixels");
    fixtures->add_option("--seed", fix_seed, "generator seed");

    // ---- train ----
    auto* train = app.add_subcommand("train", "train a super-resolution engine");
    std::string tr_manifest, tr_engine = "srcnn", tr_out = "model.bin";
    std::vector<int> tr_factors;
    EngineSpec tr_spec;
    double tr_lr = -1, tr_clip = -1, tr_momentum = -1, tr_adv = -1;
    int tr_epochs = -1, tr_batch = -1, tr_patch = -1, tr_stride = -1, tr_depth = -1;
    long long tr_budget = -1;
    uint64_t tr_seed = 1;
    bool tr_verbose = false;
    train->add_option("--manifest", tr_manifest, "training manifest CSV")->required();
    train->add_option("--engine", tr_engine, "srcnn | vdcnn | srgan | pca")->required();
    train->add_option("--factor", tr_factors, "downscaling factor(s)")->required();
    train->add_option("--out", tr_out, "model file to write");
    train->add_option("--lr", tr_lr, "learning rate");
    train->add_option("--momentum", tr_momentum, "SGD momentum");
    train->add_option("--clip", tr_clip, "gradient norm clip (0 disables)");
    train->add_option("--epochs", tr_epochs, "epochs");
    train->add_option("--batch", tr_batch, "batch size");
    train->add_option("--patch", tr_patch, "patch size");
    train->add_option("--stride", tr_stride, "patch stride");
    train->add_option("--budget", tr_budget, "max training pairs");
    train->add_option("--depth", tr_depth, "vdcnn depth");
    train->add_option("--adv-weight", tr_adv, "srgan adversarial weight");
    train->add_option("--seed", tr_seed, "training seed");
    train->add_flag("--verbose", tr_verbose, "log per-epoch losses");

    // ---- sr ----
    auto* srcmd = app.add_subcommand("sr", "super-resolve a manifest of images");
    std::string sr_manifest, sr_model, sr_engine_name, sr_out = "recon";
    int sr_factor = 2;
    bool sr_simulate = false;
    srcmd->add_option("--manifest", sr_manifest, "input manifest CSV")->required();
    srcmd->add_option("--model", sr_model, "trained model file");
    srcmd->add_option("--engine", sr_engine_name, "bilinear or bicubic (no model needed)");
    srcmd->add_option("--factor", sr_factor, "upscaling factor")->required();
    srcmd->add_option("--out", sr_out, "output directory");
    srcmd->add_flag("--simulate", sr_simulate,
                    "inputs are HR references: degrade first, reconstruct to original size");

    // ---- assess ----
    auto* assess = app.add_subcommand("assess", "full-reference quality of two directories");
    std::string as_ref, as_test, as_out = "quality.csv";
    assess->add_option("--reference", as_ref, "reference image directory")->required();
    assess->add_option("--test", as_test, "test image directory")->required();
    assess->add_option("--out", as_out, "CSV to write");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "enroll-vs-probe verification");
    std::string vf_enroll, vf_probe, vf_matcher = "gabor", vf_seg = "auto", vf_out = "verify_out";
    int vf_shift = 8;
    verify->add_option("--enroll", vf_enroll, "enrollment manifest")->required();
    verify->add_option("--probe", vf_probe, "probe manifest")->required();
    verify->add_option("--matcher", vf_matcher, "gabor | qsw | sift");
    verify->add_option("--segmentation", vf_seg, "auto | sidecar");
    verify->add_option("--out", vf_out, "output directory");
    verify->add_option("--max-shift", vf_shift, "circular shift budget in columns");

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "run a full configured sweep");
    std::string ex_config;
    exp->add_option("--config", ex_config, "experiment TOML")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fixtures) {
            if (fix_kind == "textures")
                generate_texture_corpus(fix_out, fix_count, fix_size, fix_seed);
            else if (fix_kind == "eyes")
                generate_eye_corpus(fix_out, fix_subjects, fix_samples, fix_size, fix_seed);
            else
                throw Error("fixtures kind must be 'textures' or 'eyes'");
            std::printf("fixtures written to %s\n", fix_out.c_str());
        } else if (*train) {
            tr_spec.kind = sr::engine_kind_from_name(tr_engine);
            switch (tr_spec.kind) {
                case sr::EngineKind::srcnn: tr_spec.sgd = sr::default_srcnn_config(); break;
                case sr::EngineKind::vdcnn: tr_spec.sgd = sr::default_vdcnn_config(); break;
                case sr::EngineKind::srgan: tr_spec.sgd = sr::default_srgan_config(); break;
                default: break;
            }
            if (tr_lr >= 0) tr_spec.sgd.learning_rate = tr_lr;
            if (tr_momentum >= 0) tr_spec.sgd.momentum = tr_momentum;
            if (tr_clip >= 0) tr_spec.sgd.grad_clip = tr_clip;
            if (tr_epochs >= 0) tr_spec.sgd.epochs = tr_epochs;
            if (tr_batch >= 0) tr_spec.sgd.batch_size = tr_batch;
            if (tr_patch >= 0) tr_spec.patch = tr_patch;
            if (tr_stride >= 0) tr_spec.stride = tr_stride;
            if (tr_budget >= 0) tr_spec.budget = size_t(tr_budget);
            if (tr_depth >= 0) tr_spec.depth = tr_depth;
            if (tr_adv >= 0) tr_spec.adv_weight = tr_adv;
            tr_spec.sgd.seed = tr_seed;
            sr::SREngine engine = cmd_train(tr_manifest, tr_spec, tr_factors, tr_out, tr_verbose);
            std::printf("model written to %s (%zu factors)\n", tr_out.c_str(),
                        engine.factors().size());
        } else if (*srcmd) {
            sr::SREngine engine;
            if (!sr_model.empty())
                engine = sr::SREngine::load(sr_model);
            else if (!sr_engine_name.empty())
                engine = sr::SREngine::interpolation(sr::engine_kind_from_name(sr_engine_name));
            else
                throw Error("sr: provide --model or --engine");
            std::vector<FailureRecord> failures;
            cmd_sr(sr_manifest, engine, sr_factor, sr_out, sr_simulate, &failures);
            for (const auto& f : failures)
                std::fprintf(stderr, "failed: %s: %s\n", f.path.c_str(), f.message.c_str());
            std::printf("reconstructions written to %s\n", sr_out.c_str());
            return failures.empty() ? 0 : 1;
        } else if (*assess) {
            AssessResult r = cmd_assess(as_ref, as_test, as_out);
            for (const auto& u : r.unmatched) std::fprintf(stderr, "unmatched: %s\n", u.c_str());
            std::printf("mean psnr %.4f ssim %.4f fsim %.4f over %zu pairs -> %s\n",
                        r.stats.mean.psnr, r.stats.mean.ssim, r.stats.mean.fsim,
                        r.matched.size(), as_out.c_str());
            return r.unmatched.empty() ? 0 : 1;
        } else if (*verify) {
            VerifyResult r = cmd_verify(vf_enroll, vf_probe, vf_matcher, vf_seg, vf_out, vf_shift);
            for (const auto& f : r.failures)
                std::fprintf(stderr, "excluded: %s: %s\n", f.path.c_str(), f.message.c_str());
            std::printf("eer %.6f (%zu genuine, %zu impostor, %zu excluded) -> %s\n", r.eer,
                        r.scores.genuine.size(), r.scores.impostor.size(), r.excluded,
                        vf_out.c_str());
            return r.failures.empty() ? 0 : 1;
        } else if (*exp) {
            ExperimentResult r = run_experiment(load_experiment_config(ex_config));
            std::printf("%zu report rows -> %s\n", r.rows.size(), r.report_csv.string().c_str());
            for (const auto& f : r.failures)
                std::fprintf(stderr, "failure: %s %s: %s\n", f.stage.c_str(), f.path.c_str(),
                             f.message.c_str());
            return r.failures.empty() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
