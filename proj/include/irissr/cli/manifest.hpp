#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "irissr/common.hpp"

namespace irissr::cli {

// One image of one eye. Each eye is matched as its own class;
// subject_key() is the matching identity.
struct ManifestEntry {
    std::filesystem::path path;
    std::string subject;
    std::string eye;
    int sample = 0;

    std::string subject_key() const { return subject + "/" + eye; }
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

// CSV with header "path,subject,eye,sample". Relative paths resolve against
// the manifest's directory. Verifies that files exist and that
// (subject, eye, sample) triples are unique.
Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

// FNV-1a of the file bytes, as 16 hex digits; recorded in model and report
// provenance.
std::string file_digest(const std::filesystem::path& path);
std::string bytes_digest(const void* data, size_t n);

} // namespace irissr::cli
