#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "holosim/engine.hpp"

namespace holosim {

namespace fs = std::filesystem;

// One JSON object per line, '\n' separated, UTF-8.
std::string events_to_jsonl(const std::vector<EventLogEntry>& events);
std::string snapshots_to_jsonl(const std::vector<WeekSnapshot>& snapshots);
std::vector<EventLogEntry> read_events_jsonl(const fs::path& path);
std::vector<WeekSnapshot> read_snapshots_jsonl(const fs::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const fs::path& path);

// Write via a temp file in the same directory plus rename, so readers never
// observe a half-written artifact.
void atomic_write(const fs::path& path, const std::string& content);

// Serialize one run into dir/{config.json, events.jsonl, snapshots.json}.
// Event and snapshot files are appended week by week during a live run via
// the simulation's week sink; this helper writes a completed artifact.
struct ArtifactFiles {
    fs::path config_json;
    fs::path events_jsonl;
    fs::path snapshots_json;
};

ArtifactFiles write_run_artifact(const RunArtifact& artifact, const fs::path& dir);

RunArtifact read_run_artifact(const fs::path& dir);

} // namespace holosim
