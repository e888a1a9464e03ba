#include "holosim/artifact_io.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace holosim {

std::string events_to_jsonl(const std::vector<EventLogEntry>& events) {
    std::string out;
    for (const EventLogEntry& e : events) {
        out += json(e).dump();
        out += '\n';
    }
    return out;
}

std::string snapshots_to_jsonl(const std::vector<WeekSnapshot>& snapshots) {
    std::string out;
    for (const WeekSnapshot& s : snapshots) {
        out += json(s).dump();
        out += '\n';
    }
    return out;
}

namespace {

std::vector<json> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<json> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(json::parse(line));
    }
    return out;
}

} // namespace

std::vector<EventLogEntry> read_events_jsonl(const fs::path& path) {
    std::vector<EventLogEntry> out;
    for (const json& j : read_jsonl(path)) out.push_back(j.get<EventLogEntry>());
    return out;
}

std::vector<WeekSnapshot> read_snapshots_jsonl(const fs::path& path) {
    std::vector<WeekSnapshot> out;
    for (const json& j : read_jsonl(path)) out.push_back(j.get<WeekSnapshot>());
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 computation failed");
    }
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

ArtifactFiles write_run_artifact(const RunArtifact& artifact, const fs::path& dir) {
    fs::create_directories(dir);
    ArtifactFiles files;
    files.config_json = dir / "config.json";
    files.events_jsonl = dir / "events.jsonl";
    files.snapshots_json = dir / "snapshots.json";
    atomic_write(files.config_json, artifact.config.dump(2) + "\n");
    atomic_write(files.events_jsonl, events_to_jsonl(artifact.events));
    atomic_write(files.snapshots_json, snapshots_to_jsonl(artifact.snapshots));
    return files;
}

RunArtifact read_run_artifact(const fs::path& dir) {
    RunArtifact artifact;
    {
        std::ifstream in(dir / "config.json");
        if (!in) throw std::runtime_error("cannot open " + (dir / "config.json").string());
        in >> artifact.config;
    }
    artifact.events = read_events_jsonl(dir / "events.jsonl");
    artifact.snapshots = read_snapshots_jsonl(dir / "snapshots.json");
    return artifact;
}

} // namespace holosim
