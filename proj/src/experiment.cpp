#include "irissr/cli/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "irissr/cli/svg.hpp"
#include "irissr/iris/encode.hpp"
#include "irissr/iris/match.hpp"
#include "irissr/iris/normalize.hpp"
#include "irissr/iris/segment.hpp"
#include "irissr/iris/sift.hpp"
#include "irissr/resize.hpp"

namespace irissr::cli {

namespace fs = std::filesystem;
using eval::Polarity;
using eval::ScoreSet;

namespace {

int thread_budget() {
    if (const char* env = std::getenv("IRIS_SR_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

// Indexed worker pool; callers write results into per-index slots so the
// output order never depends on scheduling.
void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
    size_t threads = std::min(size_t(thread_budget()), count);
    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

std::string fmt_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct WorkItem {
    std::string key;  // subject identity
    std::string name; // filename, for reports
    GrayImage image;
    fs::path sidecar; // empty = automatic segmentation
};

struct TemplateBank {
    bool sift = false;
    std::vector<std::pair<std::string, iris::IrisCode>> codes;
    std::vector<std::pair<std::string, iris::KeypointSet>> keys;
    size_t size() const { return sift ? keys.size() : codes.size(); }
};

TemplateBank build_templates(const std::vector<WorkItem>& items, const std::string& matcher,
                             std::vector<FailureRecord>& failures) {
    TemplateBank bank;
    bank.sift = matcher == "sift";

    struct Slot {
        bool ok = false;
        std::string error;
        iris::IrisCode code;
        iris::KeypointSet keys;
    };
    std::vector<Slot> slots(items.size());
    parallel_for(items.size(), [&](size_t i) {
        Slot& slot = slots[i];
        try {
            const WorkItem& item = items[i];
            if (bank.sift) {
                // SIFT runs on the eye crop directly, no segmentation stage
                slot.keys = iris::sift_extract(item.image);
            } else {
                iris::SegmentationResult seg = item.sidecar.empty()
                                                   ? iris::segment(item.image)
                                                   : iris::load_segmentation(item.sidecar);
                require(seg.usable, "segmentation unusable");
                iris::NormalizedIris norm = iris::normalize(item.image, seg);
                slot.code = matcher == "gabor" ? iris::encode_gabor(norm) : iris::encode_qsw(norm);
            }
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });
    for (size_t i = 0; i < items.size(); ++i) {
        if (!slots[i].ok) {
            failures.push_back({"template/" + matcher, items[i].name, slots[i].error});
            continue;
        }
        if (bank.sift)
            bank.keys.push_back({items[i].key, std::move(slots[i].keys)});
        else
            bank.codes.push_back({items[i].key, std::move(slots[i].code)});
    }
    return bank;
}

// Probe-major, enrollment-minor enumeration; identities out for persistence.
struct ScoredPair {
    std::string enroll_key, probe_key;
    bool genuine = false;
    double score = 0;
};

ScoreSet score_banks(const TemplateBank& enroll, const TemplateBank& probe, int max_shift,
                     std::vector<ScoredPair>* pairs_out, size_t impostor_sample = 0,
                     uint64_t seed = 1) {
    // optional seeded reservoir over impostor pair indices keeps big sweeps fast
    const size_t np = probe.size(), ne = enroll.size();
    std::vector<uint8_t> keep;
    if (impostor_sample > 0) {
        std::vector<size_t> impostors;
        for (size_t p = 0; p < np; ++p)
            for (size_t e = 0; e < ne; ++e) {
                const std::string& pk = probe.sift ? probe.keys[p].first : probe.codes[p].first;
                const std::string& ek = enroll.sift ? enroll.keys[e].first : enroll.codes[e].first;
                if (pk != ek) impostors.push_back(p * ne + e);
            }
        Rng rng(seed);
        size_t k = std::min(impostor_sample, impostors.size());
        std::vector<size_t> sampled(impostors.begin(), impostors.begin() + k);
        for (size_t i = k; i < impostors.size(); ++i) {
            size_t j = size_t(rng.uniform_index(i + 1));
            if (j < k) sampled[j] = impostors[i];
        }
        keep.assign(np * ne, 0);
        for (size_t idx : sampled) keep[idx] = 1;
    }

    ScoreSet set;
    set.polarity = enroll.sift ? Polarity::similarity : Polarity::distance;
    auto record = [&](size_t p, size_t e, const std::string& ek, const std::string& pk,
                      double score) {
        bool genuine = ek == pk;
        if (!genuine && !keep.empty() && !keep[p * ne + e]) return;
        (genuine ? set.genuine : set.impostor).push_back(score);
        if (pairs_out) pairs_out->push_back({ek, pk, genuine, score});
    };
    if (enroll.sift) {
        for (size_t p = 0; p < np; ++p)
            for (size_t e = 0; e < ne; ++e) {
                if (!keep.empty() && probe.keys[p].first != enroll.keys[e].first &&
                    !keep[p * ne + e])
                    continue;
                record(p, e, enroll.keys[e].first, probe.keys[p].first,
                       iris::sift_match(enroll.keys[e].second, probe.keys[p].second));
            }
    } else {
        for (size_t p = 0; p < np; ++p)
            for (size_t e = 0; e < ne; ++e) {
                if (!keep.empty() && probe.codes[p].first != enroll.codes[e].first &&
                    !keep[p * ne + e])
                    continue;
                record(p, e, enroll.codes[e].first, probe.codes[p].first,
                       iris::hamming_distance(enroll.codes[e].second, probe.codes[p].second,
                                              max_shift));
            }
    }
    return set;
}

GrayImage load_item_image(const fs::path& path, int crop) {
    GrayImage img = load_image(path);
    if (crop > 0) {
        require(img.width() >= crop && img.height() >= crop,
                "image smaller than configured crop: " + path.string());
        img = img.crop((img.width() - crop) / 2, (img.height() - crop) / 2, crop, crop);
    }
    return img;
}

std::vector<WorkItem> manifest_items(const Manifest& m, int crop, const std::string& segmentation,
                                     std::vector<FailureRecord>& failures) {
    std::vector<WorkItem> items;
    for (const auto& e : m.entries) {
        try {
            WorkItem item;
            item.key = e.subject_key();
            item.name = e.path.filename().string();
            item.image = load_item_image(e.path, crop);
            if (segmentation == "sidecar") item.sidecar = e.path.string() + ".seg.csv";
            items.push_back(std::move(item));
        } catch (const std::exception& ex) {
            failures.push_back({"load", e.path.string(), ex.what()});
        }
    }
    return items;
}

std::string render_spec(const EngineSpec& spec, const std::vector<int>& factors) {
    std::string s = std::string("kind=") + sr::engine_kind_name(spec.kind) + " factors=";
    for (size_t i = 0; i < factors.size(); ++i)
        s += (i ? "," : "") + std::to_string(factors[i]);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  " lr=%g momentum=%g clip=%g batch=%d epochs=%d seed=%llu patch=%d stride=%d "
                  "budget=%zu",
                  spec.sgd.learning_rate, spec.sgd.momentum, spec.sgd.grad_clip,
                  spec.sgd.batch_size, spec.sgd.epochs,
                  static_cast<unsigned long long>(spec.sgd.seed), spec.patch, spec.stride,
                  spec.budget);
    return s + buf;
}

} // namespace

sr::SREngine cmd_train(const fs::path& manifest_path, const EngineSpec& spec,
                       const std::vector<int>& factors, const fs::path& model_out, bool verbose) {
    require(spec.kind != sr::EngineKind::bilinear && spec.kind != sr::EngineKind::bicubic,
            "interpolation engines carry no model; nothing to train");
    require(!factors.empty(), "cmd_train: at least one factor required");

    Manifest m = load_manifest(manifest_path);
    std::vector<GrayImage> images;
    images.reserve(m.entries.size());
    for (const auto& e : m.entries) images.push_back(load_image(e.path));

    sr::Provenance prov{file_digest(manifest_path), render_spec(spec, factors)};
    sr::TrainOptions opt;
    opt.sgd = spec.sgd;
    opt.provenance = prov;
    opt.verbose = verbose;

    sr::SREngine engine;
    switch (spec.kind) {
        case sr::EngineKind::srcnn: {
            require(factors.size() == 1, "srcnn trains one factor per engine");
            auto pairs = sr::prepare_pairs(images, {.factors = factors, .patch = spec.patch,
                                                    .stride = spec.stride, .budget = spec.budget,
                                                    .seed = spec.sgd.seed});
            engine = sr::train_srcnn(pairs, opt);
            break;
        }
        case sr::EngineKind::vdcnn: {
            auto pairs = sr::prepare_pairs(images, {.factors = factors, .patch = spec.patch,
                                                    .stride = spec.stride, .budget = spec.budget,
                                                    .seed = spec.sgd.seed});
            engine = sr::train_vdcnn(pairs, opt, spec.depth);
            break;
        }
        case sr::EngineKind::srgan: {
            auto pairs = sr::prepare_pairs(images, {.factors = {4}, .patch = spec.srgan_crop,
                                                    .stride = spec.stride, .budget = spec.budget,
                                                    .seed = spec.sgd.seed, .srgan_mode = true});
            engine = sr::train_srgan(pairs, opt, spec.adv_weight, spec.res_blocks).engine;
            break;
        }
        case sr::EngineKind::pca_eigenpatch: {
            require(factors.size() == 1, "pca trains one factor per model");
            auto model = sr::pca_train(images, factors[0], spec.pca_patch, spec.pca_overlap);
            if (!model.warning.empty()) std::fprintf(stderr, "pca: %s\n", model.warning.c_str());
            engine = sr::SREngine::from_pca(std::move(model), prov);
            break;
        }
        default: throw Error("cmd_train: unsupported engine kind");
    }
    if (!model_out.empty()) {
        fs::create_directories(model_out.parent_path().empty() ? "." : model_out.parent_path());
        engine.save(model_out);
    }
    return engine;
}

void cmd_sr(const fs::path& manifest_path, const sr::SREngine& engine, int factor,
            const fs::path& out_dir, bool simulate, std::vector<FailureRecord>* failures) {
    Manifest m = load_manifest(manifest_path);
    fs::create_directories(out_dir);

    Manifest out_manifest;
    for (const auto& e : m.entries) {
        try {
            GrayImage input = load_image(e.path);
            GrayImage rec;
            std::string warning;
            if (simulate) {
                GrayImage low = degrade_full(input, factor).low;
                rec = super_resolve(engine, low, factor,
                                    {.target_w = input.width(), .target_h = input.height(),
                                     .warning = &warning});
            } else {
                rec = super_resolve(engine, input, factor, {.warning = &warning});
            }
            if (!warning.empty()) std::fprintf(stderr, "%s: %s\n", e.path.c_str(), warning.c_str());

            fs::path out_name = e.path.filename().replace_extension(".png");
            save_png(rec, out_dir / out_name);
            fs::path sidecar = e.path.string() + ".seg.csv";
            if (fs::exists(sidecar))
                fs::copy_file(sidecar, out_dir / (out_name.string() + ".seg.csv"),
                              fs::copy_options::overwrite_existing);
            out_manifest.entries.push_back({out_dir / out_name, e.subject, e.eye, e.sample});
        } catch (const std::exception& ex) {
            if (failures)
                failures->push_back({"sr", e.path.string(), ex.what()});
            else
                throw;
        }
    }
    require(!out_manifest.entries.empty(), "cmd_sr: every input failed");
    save_manifest(out_manifest, out_dir / "manifest.csv");
}

AssessResult cmd_assess(const fs::path& reference_dir, const fs::path& test_dir,
                        const fs::path& out_csv) {
    auto list_images = [](const fs::path& dir) {
        std::set<std::string> names;
        require(fs::is_directory(dir), "not a directory: " + dir.string());
        for (const auto& entry : fs::directory_iterator(dir)) {
            auto ext = entry.path().extension().string();
            if (ext == ".png" || ext == ".pgm") names.insert(entry.path().filename().string());
        }
        return names;
    };
    auto ref_names = list_images(reference_dir);
    auto test_names = list_images(test_dir);

    AssessResult result;
    std::vector<std::pair<GrayImage, GrayImage>> pairs;
    for (const auto& name : ref_names) {
        if (test_names.count(name)) {
            result.matched.push_back(name);
            pairs.push_back({load_image(reference_dir / name), load_image(test_dir / name)});
        } else {
            result.unmatched.push_back(name + " (reference only)");
        }
    }
    for (const auto& name : test_names)
        if (!ref_names.count(name)) result.unmatched.push_back(name + " (test only)");

    require(!pairs.empty(), "cmd_assess: no matched files between the directories");
    result.stats = eval::quality_report(pairs);

    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        require(out.good(), "cannot write: " + out_csv.string());
        out << "file,psnr,ssim,fsim\n";
        for (size_t i = 0; i < result.matched.size(); ++i) {
            const auto& q = result.stats.per_pair[i];
            out << result.matched[i] << ',' << fmt_metric(q.psnr) << ',' << fmt_metric(q.ssim)
                << ',' << fmt_metric(q.fsim) << '\n';
        }
        out << "__mean__," << fmt_metric(result.stats.mean.psnr) << ','
            << fmt_metric(result.stats.mean.ssim) << ',' << fmt_metric(result.stats.mean.fsim)
            << '\n';
        out << "__stddev__," << fmt_metric(result.stats.stddev.psnr) << ','
            << fmt_metric(result.stats.stddev.ssim) << ','
            << fmt_metric(result.stats.stddev.fsim) << '\n';
        for (const auto& u : result.unmatched) out << "__unmatched__," << u << ",,\n";
    }
    return result;
}

VerifyResult cmd_verify(const fs::path& enroll_manifest, const fs::path& probe_manifest,
                        const std::string& matcher, const std::string& segmentation,
                        const fs::path& out_dir, int max_shift) {
    require(matcher == "gabor" || matcher == "qsw" || matcher == "sift",
            "cmd_verify: unknown matcher " + matcher);
    fs::create_directories(out_dir);

    VerifyResult result;
    Manifest em = load_manifest(enroll_manifest);
    Manifest pm = load_manifest(probe_manifest);
    auto enroll_items = manifest_items(em, 0, segmentation, result.failures);
    auto probe_items = manifest_items(pm, 0, segmentation, result.failures);

    TemplateBank enroll = build_templates(enroll_items, matcher, result.failures);
    TemplateBank probe = build_templates(probe_items, matcher, result.failures);
    result.excluded = (em.entries.size() - enroll.size()) + (pm.entries.size() - probe.size());

    std::vector<ScoredPair> pairs;
    result.scores = score_banks(enroll, probe, max_shift, &pairs);
    result.eer = eval::compute_eer(result.scores);

    std::ofstream sc(out_dir / "scores.csv");
    require(sc.good(), "cannot write scores.csv");
    sc << "kind,enroll,probe,score\n";
    for (const auto& p : pairs)
        sc << (p.genuine ? "genuine" : "impostor") << ',' << p.enroll_key << ',' << p.probe_key
           << ',' << fmt_metric(p.score) << '\n';

    std::ofstream summary(out_dir / "verify.csv");
    summary << "matcher,eer,n_genuine,n_impostor,excluded\n";
    summary << matcher << ',' << fmt_metric(result.eer) << ',' << result.scores.genuine.size()
            << ',' << result.scores.impostor.size() << ',' << result.excluded << '\n';

    write_histogram_svg(eval::histogram(result.scores), matcher + " score distribution",
                        out_dir / "hist.svg");
    write_roc_svg(eval::roc_curve(result.scores), matcher + " ROC", out_dir / "roc.svg");
    return result;
}

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& config_digest,
                      const fs::path& path) {
    std::ofstream out(path);
    require(out.good(), "cannot write report: " + path.string());
    out << "# config_digest=" << config_digest << '\n';
    out << "engine,train_corpus,factor,matcher,eer,mean_psnr,mean_ssim,mean_fsim,n_genuine,"
           "n_impostor\n";
    for (const auto& r : rows)
        out << r.engine << ',' << r.train_corpus << ',' << r.factor << ',' << r.matcher << ','
            << fmt_metric(r.eer) << ',' << fmt_metric(r.mean_psnr) << ','
            << fmt_metric(r.mean_ssim) << ',' << fmt_metric(r.mean_fsim) << ',' << r.n_genuine
            << ',' << r.n_impostor << '\n';
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    ExperimentResult result;

    require(!config.enroll_manifest.empty() && !config.probe_manifest.empty(),
            "experiment: enroll and probe manifests required");
    Manifest enroll_m = load_manifest(config.enroll_manifest);
    Manifest probe_m = load_manifest(config.probe_manifest);

    // enrollment templates are shared by every engine x factor sweep
    auto enroll_items = manifest_items(enroll_m, config.crop, config.segmentation, result.failures);
    std::map<std::string, TemplateBank> enroll_banks;
    for (const auto& matcher : config.matchers)
        enroll_banks[matcher] = build_templates(enroll_items, matcher, result.failures);

    // training corpus, loaded once if any engine needs it
    std::vector<GrayImage> train_images;
    std::string train_digest = "none";
    bool any_trainable = false;
    for (const auto& spec : config.engines)
        any_trainable |= spec.kind != sr::EngineKind::bilinear &&
                         spec.kind != sr::EngineKind::bicubic && spec.model_file.empty();
    if (any_trainable) {
        require(!config.train_manifest.empty(), "experiment: trainable engines need a train manifest");
        Manifest tm = load_manifest(config.train_manifest);
        for (const auto& e : tm.entries)
            train_images.push_back(load_item_image(e.path, config.crop));
        train_digest = file_digest(config.train_manifest);
    }

    fs::create_directories(config.out_dir / "models");

    for (const auto& spec : config.engines) {
        const std::string engine_name = sr::engine_kind_name(spec.kind);
        const bool interpolation =
            spec.kind == sr::EngineKind::bilinear || spec.kind == sr::EngineKind::bicubic;

        // engines per factor (srcnn/pca are single-factor; vdcnn/srgan shared)
        std::map<int, sr::SREngine> engines;
        std::string corpus = interpolation ? "none" : train_digest;
        try {
            if (!spec.model_file.empty()) {
                sr::SREngine loaded = sr::SREngine::load(spec.model_file);
                corpus = loaded.provenance().manifest_digest.empty()
                             ? "model"
                             : loaded.provenance().manifest_digest;
                for (int f : config.factors) engines.emplace(f, sr::SREngine::load(spec.model_file));
            } else if (interpolation) {
                for (int f : config.factors) engines.emplace(f, sr::SREngine::interpolation(spec.kind));
            } else {
                sr::Provenance prov{train_digest, render_spec(spec, config.factors)};
                sr::TrainOptions opt{spec.sgd, prov, false};
                switch (spec.kind) {
                    case sr::EngineKind::srcnn:
                    case sr::EngineKind::pca_eigenpatch:
                        for (int f : config.factors) {
                            sr::SREngine e;
                            if (spec.kind == sr::EngineKind::srcnn) {
                                auto pairs = sr::prepare_pairs(
                                    train_images, {.factors = {f}, .patch = spec.patch,
                                                   .stride = spec.stride, .budget = spec.budget,
                                                   .seed = spec.sgd.seed});
                                e = sr::train_srcnn(pairs, opt);
                            } else {
                                e = sr::SREngine::from_pca(
                                    sr::pca_train(train_images, f, spec.pca_patch,
                                                  spec.pca_overlap),
                                    prov);
                            }
                            e.save(config.out_dir / "models" /
                                   (engine_name + "_f" + std::to_string(f) + ".model"));
                            engines.emplace(f, std::move(e));
                        }
                        break;
                    case sr::EngineKind::vdcnn: {
                        auto pairs = sr::prepare_pairs(
                            train_images, {.factors = config.factors, .patch = spec.patch,
                                           .stride = spec.stride, .budget = spec.budget,
                                           .seed = spec.sgd.seed});
                        sr::SREngine e = sr::train_vdcnn(pairs, opt, spec.depth);
                        e.save(config.out_dir / "models" / (engine_name + ".model"));
                        for (int f : config.factors)
                            engines.emplace(f, sr::SREngine::load(config.out_dir / "models" /
                                                                  (engine_name + ".model")));
                        break;
                    }
                    case sr::EngineKind::srgan: {
                        auto pairs = sr::prepare_pairs(
                            train_images, {.factors = {4}, .patch = spec.srgan_crop,
                                           .stride = spec.stride, .budget = spec.budget,
                                           .seed = spec.sgd.seed, .srgan_mode = true});
                        sr::SREngine e =
                            sr::train_srgan(pairs, opt, spec.adv_weight, spec.res_blocks).engine;
                        e.save(config.out_dir / "models" / (engine_name + ".model"));
                        for (int f : config.factors)
                            engines.emplace(f, sr::SREngine::load(config.out_dir / "models" /
                                                                  (engine_name + ".model")));
                        break;
                    }
                    default: break;
                }
            }
        } catch (const std::exception& ex) {
            result.failures.push_back({"train/" + engine_name, "", ex.what()});
            continue;
        }

        for (int factor : config.factors) {
            const sr::SREngine& engine = engines.at(factor);
            fs::path recon_dir =
                config.out_dir / "recon" / (engine_name + "_f" + std::to_string(factor));
            fs::create_directories(recon_dir);

            struct ReconSlot {
                bool ok = false;
                std::string error;
                WorkItem item;
                GrayImage original;
            };
            std::vector<ReconSlot> slots(probe_m.entries.size());
            parallel_for(probe_m.entries.size(), [&](size_t i) {
                ReconSlot& slot = slots[i];
                const auto& entry = probe_m.entries[i];
                try {
                    GrayImage orig = load_item_image(entry.path, config.crop);
                    GrayImage low = degrade_full(orig, factor).low;
                    std::string warning;
                    GrayImage rec = super_resolve(engine, low, factor,
                                                  {.target_w = orig.width(),
                                                   .target_h = orig.height(),
                                                   .warning = &warning});
                    GrayImage q = quantized(rec);
                    fs::path out_name = entry.path.filename().replace_extension(".png");
                    save_png(q, recon_dir / out_name);
                    slot.item.key = entry.subject_key();
                    slot.item.name = out_name.string();
                    slot.item.image = std::move(q);
                    if (config.segmentation == "sidecar")
                        slot.item.sidecar = entry.path.string() + ".seg.csv";
                    slot.original = std::move(orig);
                    slot.ok = true;
                } catch (const std::exception& ex) {
                    slot.error = ex.what();
                }
            });

            std::vector<WorkItem> probe_items;
            std::vector<std::pair<GrayImage, GrayImage>> quality_pairs;
            for (size_t i = 0; i < slots.size(); ++i) {
                if (!slots[i].ok) {
                    result.failures.push_back({"reconstruct/" + engine_name,
                                               probe_m.entries[i].path.string(), slots[i].error});
                    continue;
                }
                quality_pairs.push_back({slots[i].original, slots[i].item.image});
                probe_items.push_back(std::move(slots[i].item));
            }
            if (probe_items.empty()) {
                result.failures.push_back(
                    {"reconstruct/" + engine_name, "", "no probe survived reconstruction"});
                continue;
            }

            QualityTriple mean{};
            if (config.quality_metrics) {
                auto stats = eval::quality_report(quality_pairs);
                mean = stats.mean;
            }

            for (const auto& matcher : config.matchers) {
                try {
                    TemplateBank probe_bank =
                        build_templates(probe_items, matcher, result.failures);
                    ScoreSet scores = score_banks(enroll_banks.at(matcher), probe_bank,
                                                  config.max_shift, nullptr,
                                                  config.impostor_sample, config.seed);
                    double eer = eval::compute_eer(scores);

                    std::string tag =
                        engine_name + "_f" + std::to_string(factor) + "_" + matcher;
                    write_histogram_svg(eval::histogram(scores), tag, config.out_dir / ("hist_" + tag + ".svg"));
                    write_roc_svg(eval::roc_curve(scores), tag, config.out_dir / ("roc_" + tag + ".svg"));

                    ReportRow row;
                    row.engine = engine_name;
                    row.train_corpus = corpus;
                    row.factor = factor;
                    row.matcher = matcher;
                    row.eer = eer;
                    row.mean_psnr = mean.psnr;
                    row.mean_ssim = mean.ssim;
                    row.mean_fsim = mean.fsim;
                    row.n_genuine = scores.genuine.size();
                    row.n_impostor = scores.impostor.size();
                    result.rows.push_back(std::move(row));
                } catch (const std::exception& ex) {
                    result.failures.push_back(
                        {"score/" + engine_name + "/" + matcher, "", ex.what()});
                }
            }
        }
    }

    result.report_csv = config.out_dir / "report.csv";
    write_report_csv(result.rows, config.digest, result.report_csv);

    if (!result.failures.empty()) {
        std::ofstream out(config.out_dir / "failures.csv");
        out << "stage,path,message\n";
        for (const auto& f : result.failures)
            out << f.stage << ',' << f.path << ',' << f.message << '\n';
    }
    return result;
}

} // namespace irissr::cli
