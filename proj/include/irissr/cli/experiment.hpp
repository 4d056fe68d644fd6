#pragma once

#include "irissr/cli/config.hpp"
#include "irissr/cli/manifest.hpp"
#include "irissr/eval/eval.hpp"
#include "irissr/sr/engine.hpp"

namespace irissr::cli {

struct FailureRecord {
    std::string stage;
    std::string path;
    std::string message;
};

struct ReportRow {
    std::string engine;
    std::string train_corpus; // manifest digest or "none"
    int factor = 0;
    std::string matcher;
    double eer = 0;
    double mean_psnr = 0, mean_ssim = 0, mean_fsim = 0;
    size_t n_genuine = 0, n_impostor = 0;
};

struct ExperimentResult {
    std::vector<ReportRow> rows;
    std::vector<FailureRecord> failures;
    std::filesystem::path report_csv;
};

// The full sweep: per engine x factor, degrade the probes, super-resolve,
// measure quality against the originals, build templates, score against the
// enrollment set, and emit report.csv plus histogram/ROC SVGs and the
// reconstructed rasters. Per-image failures never abort the sweep.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& config_digest,
                      const std::filesystem::path& path);

// ---- staged commands (the CLI wraps these; chained together they must
// reproduce run_experiment's numbers) ----

// Prepares pairs per the engine's rules and trains; saves to model_out when
// non-empty.
sr::SREngine cmd_train(const std::filesystem::path& manifest_path, const EngineSpec& spec,
                       const std::vector<int>& factors, const std::filesystem::path& model_out,
                       bool verbose = false);

// One PNG per manifest entry into out_dir (same filenames, sidecars copied),
// plus a manifest.csv for chaining. With `simulate` the inputs are HR
// references: each is degraded by `factor` first and reconstructed back to
// its own size.
void cmd_sr(const std::filesystem::path& manifest_path, const sr::SREngine& engine, int factor,
            const std::filesystem::path& out_dir, bool simulate,
            std::vector<FailureRecord>* failures = nullptr);

struct AssessResult {
    eval::QualityStats stats;
    std::vector<std::string> matched; // filenames, sorted
    std::vector<std::string> unmatched;
};

// Pairs files by name across the two directories; per-image and aggregate
// rows into out_csv.
AssessResult cmd_assess(const std::filesystem::path& reference_dir,
                        const std::filesystem::path& test_dir,
                        const std::filesystem::path& out_csv);

struct VerifyResult {
    eval::ScoreSet scores;
    double eer = 0;
    size_t excluded = 0; // templates dropped by segmentation/processing failures
    std::vector<FailureRecord> failures;
};

// Enrollment vs probe verification with the chosen matcher; persists the
// scored pairs (scores.csv) and the score histogram, and prints the EER.
VerifyResult cmd_verify(const std::filesystem::path& enroll_manifest,
                        const std::filesystem::path& probe_manifest, const std::string& matcher,
                        const std::string& segmentation, const std::filesystem::path& out_dir,
                        int max_shift = 8);

} // namespace irissr::cli
