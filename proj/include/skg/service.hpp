#pragma once

#include "skg/graph.hpp"

#include <cstddef>
#include <filesystem>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace httplib {
class Server;
}

namespace skg {

// A snapshot held in memory together with its endpoint index. Pinned in
// place because the index points into the tables.
struct LoadedSnapshot {
    explicit LoadedSnapshot(GraphSnapshot s) : snapshot(std::move(s)), index(snapshot) {}
    LoadedSnapshot(const LoadedSnapshot&) = delete;
    LoadedSnapshot& operator=(const LoadedSnapshot&) = delete;

    GraphSnapshot snapshot;
    ConnectionIndex index;
};

struct SnapshotListing {
    Granularity granularity;
    std::string label;
    bool ok = true;
    nlohmann::json summary;  // manifest counts and build version, or the load error
};

// Every snapshot directory under `root`, sorted by granularity then label.
// A directory with an unreadable manifest is listed with ok = false.
std::vector<SnapshotListing> list_snapshots(const std::filesystem::path& root);

// Read-only, thread-safe cache of loaded snapshots. Loads are single-flight
// per interval and the least recently used interval is evicted past capacity.
class SnapshotStore {
public:
    explicit SnapshotStore(std::filesystem::path root, std::size_t capacity = 4);

    std::shared_ptr<const LoadedSnapshot> get(const Interval& interval);
    bool exists(const Interval& interval) const;
    const std::filesystem::path& root() const { return root_; }
    std::size_t loads() const;

private:
    using Future = std::shared_future<std::shared_ptr<const LoadedSnapshot>>;

    std::filesystem::path root_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::map<Interval, Future> entries_;
    std::list<Interval> recency_;  // front = most recent
    std::size_t loads_ = 0;
};

struct QueryRequest {
    std::optional<std::string> q;
    std::optional<std::pair<NodeKind, std::string>> node;
    Interval interval;
    std::optional<std::set<NodeKind>> filter_kinds;
    std::optional<std::set<TopicType>> topic_types;
    std::size_t limit = 25;
};

inline constexpr std::size_t kDefaultLimit = 25;
inline constexpr std::size_t kMaxLimit = 200;

// Builds a request from query parameters (q, node=kind:id, interval,
// granularity, filter_kinds, topic_types, limit). Throws ValidationError
// naming the offending parameter.
QueryRequest parse_query_request(const std::multimap<std::string, std::string>& params);

class QueryService {
public:
    explicit QueryService(SnapshotStore& store) : store_(store) {}

    nlohmann::json snapshots() const;
    nlohmann::json search(const QueryRequest& req) const;
    nlohmann::json node(NodeKind kind, const std::string& id, const Interval& interval,
                        std::size_t limit = kDefaultLimit) const;
    nlohmann::json timeline(const std::string& topic_key, const Interval& from, const Interval& to) const;

private:
    SnapshotStore& store_;
};

struct ServerOptions {
    std::string cors_origin = "*";
};

// GET /snapshots, /search, /node/{kind}/{id}, /timeline. Errors map to 400
// (validation), 404 (not found) and 500 (I/O) with a JSON body.
void register_routes(httplib::Server& server, QueryService& service, const ServerOptions& options = {});

}  // namespace skg
