#include "irissr/cli/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace irissr::cli {

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open manifest: " + path.string());
    std::string line;
    require(bool(std::getline(in, line)), "empty manifest: " + path.string());
    // tolerate trailing CR from hand-edited files
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == "path,subject,eye,sample",
            "manifest header must be 'path,subject,eye,sample': " + path.string());

    Manifest m;
    std::set<std::string> seen;
    const auto base = path.parent_path();
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        ManifestEntry e;
        std::string p, sample;
        require(bool(std::getline(ss, p, ',')) && bool(std::getline(ss, e.subject, ',')) &&
                    bool(std::getline(ss, e.eye, ',')) && bool(std::getline(ss, sample)),
                "malformed manifest row: " + line);
        std::filesystem::path rel(p);
        e.path = rel.is_absolute() ? rel : base / rel;
        e.sample = std::atoi(sample.c_str());
        require(std::filesystem::exists(e.path), "manifest references missing file: " +
                                                     e.path.string());
        std::string key = e.subject + "/" + e.eye + "/" + sample;
        require(seen.insert(key).second, "duplicate (subject,eye,sample) in manifest: " + key);
        m.entries.push_back(std::move(e));
    }
    require(!m.entries.empty(), "manifest has no entries: " + path.string());
    return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    require(out.good(), "cannot write manifest: " + path.string());
    out << "path,subject,eye,sample\n";
    const auto base = path.parent_path().empty() ? std::filesystem::path(".")
                                                 : path.parent_path();
    for (const auto& e : m.entries) {
        std::error_code ec;
        auto rel = std::filesystem::relative(e.path, base, ec);
        const auto& stored = (ec || rel.empty()) ? e.path : rel;
        out << stored.string() << ',' << e.subject << ',' << e.eye << ',' << e.sample << '\n';
    }
}

std::string bytes_digest(const void* data, size_t n) {
    const uint8_t* p = static_cast<const uint8_t*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open for digest: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes_digest(bytes.data(), bytes.size());
}

} // namespace irissr::cli
