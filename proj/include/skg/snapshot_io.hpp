#pragma once

#include "skg/graph.hpp"

#include <filesystem>

namespace skg {

// <root>/<granularity>/<interval-label>
std::filesystem::path snapshot_dir(const std::filesystem::path& root, const Interval& interval);

// Writes every table as sorted JSON lines. The directory is assembled under a
// temporary name and renamed into place, replacing an older build.
void write_snapshot(const GraphSnapshot& snapshot, const std::filesystem::path& root);

// Throws NotFoundError when the interval directory is absent and LoadError
// (file and line) for unreadable or malformed content.
GraphSnapshot read_snapshot(const std::filesystem::path& root, const Interval& interval);

// Reads only the trend history sidecar; empty when the snapshot is absent.
TrendHistory read_trend_history(const std::filesystem::path& root, const Interval& interval);

nlohmann::json read_manifest(const std::filesystem::path& dir);

}  // namespace skg
