#include "skg/service.hpp"

#include "skg/error.hpp"
#include "skg/snapshot_io.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace skg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        auto comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        std::string item = value.substr(start, comma - start);
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

const std::string* param(const std::multimap<std::string, std::string>& params, const char* name) {
    auto it = params.find(name);
    return it == params.end() ? nullptr : &it->second;
}

std::size_t parse_limit(const std::string& text, const char* field) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1 || value > kMaxLimit) {
        throw ValidationError(field, std::string(field) + " must be an integer in [1, " + std::to_string(kMaxLimit) + "]");
    }
    return value;
}

Interval parse_interval_param(const std::multimap<std::string, std::string>& params, const char* name) {
    const std::string* label = param(params, name);
    if (!label) throw ValidationError(name, std::string("missing '") + name + "'");
    Interval interval;
    try {
        interval = parse_interval_label(*label);
    } catch (const ValidationError& e) {
        throw ValidationError(name, e.what());
    }
    if (const std::string* g = param(params, "granularity")) {
        if (parse_granularity(*g) != interval.granularity) {
            throw ValidationError("granularity", "granularity does not match the interval label");
        }
    }
    return interval;
}

std::pair<NodeKind, std::string> parse_node_ref(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon + 1 >= text.size()) {
        throw ValidationError("node", "node must be <kind>:<id>");
    }
    try {
        return {parse_node_kind(text.substr(0, colon)), text.substr(colon + 1)};
    } catch (const ValidationError& e) {
        throw ValidationError("node", e.what());
    }
}

json interval_json(const Interval& interval) {
    return {{"granularity", to_string(interval.granularity)}, {"label", interval.label()}};
}

double main_score_of(const GraphSnapshot& s, NodeKind kind, const std::string& id) {
    switch (kind) {
        case NodeKind::user: return s.users.at(id).main_score;
        case NodeKind::link: return s.links.at(id).main_score;
        case NodeKind::topic: return s.topics.at(id).main_score;
        case NodeKind::post: return s.posts.at(id).main_score;
    }
    return 0.0;
}

std::string summary_of(const GraphSnapshot& s, NodeKind kind, const std::string& id) {
    switch (kind) {
        case NodeKind::user: {
            const auto& u = s.users.at(id);
            return u.screen_name.empty() ? u.user_id : "@" + u.screen_name;
        }
        case NodeKind::link: return s.links.at(id).title.value_or(id);
        case NodeKind::topic: return s.topics.at(id).topic.text;
        case NodeKind::post: {
            const std::string& text = s.posts.at(id).text;
            return text.size() <= 80 ? text : text.substr(0, 77) + "...";
        }
    }
    return id;
}

json record_json(const GraphSnapshot& s, NodeKind kind, const std::string& id) {
    switch (kind) {
        case NodeKind::user: return to_json(s.users.at(id));
        case NodeKind::link: return to_json(s.links.at(id));
        case NodeKind::topic: return to_json(s.topics.at(id));
        case NodeKind::post: return to_json(s.posts.at(id));
    }
    return json::object();
}

struct Hit {
    NodeKind kind;
    std::string id;
    double score;
};

bool hit_before(const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.id < b.id;
}

bool contains_all(const std::vector<std::string>& haystack, const std::vector<std::string>& needles) {
    return std::all_of(needles.begin(), needles.end(), [&](const std::string& n) {
        return std::find(haystack.begin(), haystack.end(), n) != haystack.end();
    });
}

std::vector<std::string> query_tokens(const std::string& q) {
    auto tokens = word_tokens(q);
    auto stop = StopWords::english();
    std::vector<std::string> content;
    for (const auto& t : tokens) {
        if (!stop.contains(t)) content.push_back(t);
    }
    return content.empty() ? tokens : content;
}

// Whether the node's searchable text contains every query token. Topics
// match through the token index, so only full topics come back.
bool matches(const GraphSnapshot& s, NodeKind kind, const std::string& id, const std::vector<std::string>& tokens) {
    switch (kind) {
        case NodeKind::topic:
            return std::all_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
                auto it = s.topic_index.find(t);
                return it != s.topic_index.end() && it->second.contains(id);
            });
        case NodeKind::user: {
            const auto& u = s.users.at(id);
            auto words = word_tokens(u.screen_name + " " + u.display_name);
            return contains_all(words, tokens);
        }
        case NodeKind::link: {
            const auto& l = s.links.at(id);
            return l.title && contains_all(word_tokens(*l.title), tokens);
        }
        case NodeKind::post: return contains_all(word_tokens(s.posts.at(id).text), tokens);
    }
    return false;
}

json error_body(const std::string& message, const std::string& field = {}) {
    json j = {{"error", message}};
    if (!field.empty()) j["field"] = field;
    return j;
}

}  // namespace

std::vector<SnapshotListing> list_snapshots(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError("snapshot root '" + root.string() + "' is not a readable directory");
    std::vector<SnapshotListing> out;
    for (Granularity g : {Granularity::hour, Granularity::day, Granularity::month, Granularity::year}) {
        const fs::path dir = root / std::string(to_string(g));
        if (!fs::is_directory(dir, ec)) continue;
        std::vector<std::string> labels;
        for (const auto& entry : fs::directory_iterator(dir, ec)) {
            if (!entry.is_directory()) continue;
            std::string label = entry.path().filename().string();
            try {
                if (parse_interval_label(label).granularity == g) labels.push_back(label);
            } catch (const ValidationError&) {
                // not a snapshot directory (e.g. an interrupted *.tmp write)
            }
        }
        std::sort(labels.begin(), labels.end());
        for (const auto& label : labels) {
            SnapshotListing listing{g, label, true, json::object()};
            try {
                json manifest = read_manifest(dir / label);
                listing.summary = {{"counts", manifest.at("counts")},
                                   {"build_version", manifest.value("build_version", "")}};
            } catch (const std::exception& e) {
                listing.ok = false;
                listing.summary = {{"error", e.what()}};
            }
            out.push_back(std::move(listing));
        }
    }
    return out;
}

SnapshotStore::SnapshotStore(fs::path root, std::size_t capacity) : root_(std::move(root)), capacity_(capacity) {
    if (capacity_ < 1) throw ValidationError("capacity", "snapshot cache capacity must be >= 1");
}

bool SnapshotStore::exists(const Interval& interval) const {
    std::error_code ec;
    return fs::is_directory(snapshot_dir(root_, interval), ec);
}

std::size_t SnapshotStore::loads() const {
    std::lock_guard lock(mutex_);
    return loads_;
}

std::shared_ptr<const LoadedSnapshot> SnapshotStore::get(const Interval& interval) {
    Future future;
    std::promise<std::shared_ptr<const LoadedSnapshot>> promise;
    bool owner = false;
    {
        std::lock_guard lock(mutex_);
        recency_.remove(interval);
        recency_.push_front(interval);
        auto it = entries_.find(interval);
        if (it != entries_.end()) {
            future = it->second;
        } else {
            owner = true;
            ++loads_;
            future = promise.get_future().share();
            entries_.emplace(interval, future);
        }
    }
    if (owner) {
        try {
            promise.set_value(std::make_shared<const LoadedSnapshot>(read_snapshot(root_, interval)));
            // Evict only once the new entry is known to be good.
            std::lock_guard lock(mutex_);
            while (recency_.size() > capacity_) {
                entries_.erase(recency_.back());
                recency_.pop_back();
            }
        } catch (...) {
            promise.set_exception(std::current_exception());
            std::lock_guard lock(mutex_);
            entries_.erase(interval);
            recency_.remove(interval);
        }
    }
    return future.get();
}

QueryRequest parse_query_request(const std::multimap<std::string, std::string>& params) {
    QueryRequest req;
    if (const std::string* q = param(params, "q"); q && !q->empty()) req.q = *q;
    if (const std::string* node = param(params, "node"); node && !node->empty()) req.node = parse_node_ref(*node);
    if (!req.q && !req.node) throw ValidationError("q", "one of 'q' or 'node' is required");
    req.interval = parse_interval_param(params, "interval");
    if (const std::string* kinds = param(params, "filter_kinds")) {
        req.filter_kinds.emplace();
        for (const auto& k : split_list(*kinds)) {
            try {
                req.filter_kinds->insert(parse_node_kind(k));
            } catch (const ValidationError& e) {
                throw ValidationError("filter_kinds", e.what());
            }
        }
    }
    if (const std::string* types = param(params, "topic_types")) {
        req.topic_types.emplace();
        for (const auto& t : split_list(*types)) {
            try {
                req.topic_types->insert(parse_topic_type(t));
            } catch (const ValidationError& e) {
                throw ValidationError("topic_types", e.what());
            }
        }
    }
    if (const std::string* limit = param(params, "limit")) req.limit = parse_limit(*limit, "limit");
    return req;
}

json QueryService::snapshots() const {
    json list = json::array();
    for (const auto& s : list_snapshots(store_.root())) {
        list.push_back({{"granularity", to_string(s.granularity)},
                        {"label", s.label},
                        {"ok", s.ok},
                        {"summary", s.summary}});
    }
    return {{"snapshots", list}};
}

json QueryService::search(const QueryRequest& req) const {
    if (req.limit < 1 || req.limit > kMaxLimit) throw ValidationError("limit", "limit out of range");
    auto loaded = store_.get(req.interval);
    const GraphSnapshot& s = loaded->snapshot;

    std::vector<std::string> tokens = req.q ? query_tokens(*req.q) : std::vector<std::string>{};
    std::set<std::pair<NodeKind, std::string>> candidates;
    if (req.node) {
        const auto& [kind, id] = *req.node;
        if (!s.has_node(kind, id)) {
            throw NotFoundError(std::string(to_string(kind)) + " '" + id + "' not found in " + s.interval.label());
        }
        for (const auto& ref : loaded->index.at(kind, id)) {
            const auto& row = *ref.record;
            bool left_is_self = row.left_kind == kind && row.left_id == id;
            candidates.emplace(left_is_self ? row.right_kind : row.left_kind,
                               left_is_self ? row.right_id : row.left_id);
        }
    } else if (!tokens.empty()) {
        std::optional<std::set<std::string>> topics;
        for (const auto& t : tokens) {
            auto it = s.topic_index.find(t);
            std::set<std::string> keys = it == s.topic_index.end() ? std::set<std::string>{} : it->second;
            if (!topics) {
                topics = std::move(keys);
            } else {
                std::set<std::string> both;
                std::set_intersection(topics->begin(), topics->end(), keys.begin(), keys.end(),
                                      std::inserter(both, both.end()));
                topics = std::move(both);
            }
        }
        for (const auto& key : *topics) candidates.emplace(NodeKind::topic, key);
        for (const auto& [id, u] : s.users) candidates.emplace(NodeKind::user, id);
        for (const auto& [id, l] : s.links) candidates.emplace(NodeKind::link, id);
    }

    std::vector<Hit> hits;
    for (const auto& [kind, id] : candidates) {
        if (req.filter_kinds && !req.filter_kinds->contains(kind)) continue;
        if (kind == NodeKind::topic && req.topic_types && !req.topic_types->contains(s.topics.at(id).topic.type)) {
            continue;
        }
        if (!tokens.empty() && !matches(s, kind, id, tokens)) continue;
        hits.push_back({kind, id, main_score_of(s, kind, id)});
    }
    std::sort(hits.begin(), hits.end(), hit_before);
    if (hits.size() > req.limit) hits.resize(req.limit);

    json results = json::array();
    for (const auto& h : hits) {
        json r = {{"kind", to_string(h.kind)},
                  {"id", h.id},
                  {"main_score", h.score},
                  {"snippet", summary_of(s, h.kind, h.id)}};
        if (h.kind == NodeKind::topic) r["topic_type"] = to_string(s.topics.at(h.id).topic.type);
        results.push_back(std::move(r));
    }
    json query = {{"limit", req.limit}};
    if (req.q) query["q"] = *req.q;
    if (req.node) query["node"] = std::string(to_string(req.node->first)) + ":" + req.node->second;
    return {{"interval", interval_json(s.interval)}, {"query", query}, {"results", results}};
}

json QueryService::node(NodeKind kind, const std::string& id, const Interval& interval, std::size_t limit) const {
    if (limit < 1 || limit > kMaxLimit) throw ValidationError("limit", "limit out of range");
    auto loaded = store_.get(interval);
    const GraphSnapshot& s = loaded->snapshot;
    if (!s.has_node(kind, id)) {
        throw NotFoundError(std::string(to_string(kind)) + " '" + id + "' not found in " + interval.label());
    }

    struct Neighbor {
        std::string id;
        NodeKind kind;
        double score;
        json entry;
    };
    std::map<std::string, std::vector<Neighbor>> groups;
    std::vector<std::string> example_posts;
    for (const auto& ref : loaded->index.at(kind, id)) {
        const ConnectionRecord& row = *ref.record;
        const bool outgoing = row.left_kind == kind && row.left_id == id;
        const NodeKind other_kind = outgoing ? row.right_kind : row.left_kind;
        const std::string& other = outgoing ? row.right_id : row.left_id;
        if (other_kind == NodeKind::post && kind != NodeKind::post) example_posts.push_back(other);

        json entry = {{"kind", to_string(other_kind)},
                      {"id", other},
                      {"summary", summary_of(s, other_kind, other)},
                      {"score", row.score},
                      {"relation", to_string(row.relation)},
                      {"supporting_post_ids", row.supporting_post_ids}};
        if (row.left_kind == row.right_kind && !table_info(ref.table).symmetric) {
            entry["direction"] = outgoing ? "out" : "in";
        }
        if (other_kind == NodeKind::topic) entry["topic_type"] = to_string(s.topics.at(other).topic.type);
        groups[std::string(to_string(other_kind)) + "/" + std::string(to_string(row.relation))].push_back(
            {other, other_kind, row.score, std::move(entry)});
    }

    json connections = json::object();
    for (auto& [group, list] : groups) {
        std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.id != b.id) return a.id < b.id;
            return a.entry.value("direction", "") < b.entry.value("direction", "");
        });
        if (list.size() > limit) list.resize(limit);
        json arr = json::array();
        for (auto& n : list) arr.push_back(std::move(n.entry));
        connections[group] = std::move(arr);
    }

    std::sort(example_posts.begin(), example_posts.end());
    example_posts.erase(std::unique(example_posts.begin(), example_posts.end()), example_posts.end());
    std::sort(example_posts.begin(), example_posts.end(), [&](const std::string& a, const std::string& b) {
        const auto& pa = s.posts.at(a);
        const auto& pb = s.posts.at(b);
        if (pa.main_score != pb.main_score) return pa.main_score > pb.main_score;
        if (pa.timestamp != pb.timestamp) return pa.timestamp > pb.timestamp;
        return a < b;
    });
    if (example_posts.size() > limit) example_posts.resize(limit);
    json posts = json::array();
    for (const auto& pid : example_posts) posts.push_back(to_json(s.posts.at(pid)));

    return {{"interval", interval_json(interval)},
            {"kind", to_string(kind)},
            {"id", id},
            {"record", record_json(s, kind, id)},
            {"connections", connections},
            {"supporting_posts", posts}};
}

json QueryService::timeline(const std::string& topic_key, const Interval& from, const Interval& to) const {
    if (topic_key.empty()) throw ValidationError("topic", "missing 'topic'");
    if (from.granularity != to.granularity) throw ValidationError("to", "'from' and 'to' differ in granularity");
    if (to.start < from.start) throw ValidationError("to", "'to' precedes 'from'");
    constexpr std::size_t kMaxPoints = 2000;

    json points = json::array();
    for (Interval cur = from; cur.start <= to.start; cur = Interval{cur.granularity, cur.end()}) {
        if (points.size() >= kMaxPoints) throw ValidationError("to", "range exceeds 2000 intervals");
        if (cur.granularity == Granularity::month || cur.granularity == Granularity::year) {
            cur = interval_containing(cur.granularity, cur.start);
        }
        std::uint64_t frequency = 0;
        double trending = 0.0;
        if (store_.exists(cur)) {
            auto loaded = store_.get(cur);
            auto it = loaded->snapshot.topics.find(topic_key);
            if (it != loaded->snapshot.topics.end()) {
                frequency = it->second.frequency;
                trending = it->second.trending;
            }
        }
        points.push_back({{"interval", cur.label()}, {"frequency", frequency}, {"trending", trending}});
    }
    return {{"topic", topic_key},
            {"granularity", to_string(from.granularity)},
            {"from", from.label()},
            {"to", to.label()},
            {"points", points}};
}

void register_routes(httplib::Server& server, QueryService& service, const ServerOptions& options) {
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET"}});

    auto respond = [](httplib::Response& res, const std::function<json()>& handler) {
        try {
            res.set_content(handler().dump(), "application/json");
        } catch (const ValidationError& e) {
            res.status = 400;
            res.set_content(error_body(e.what(), e.field()).dump(), "application/json");
        } catch (const NotFoundError& e) {
            res.status = 404;
            res.set_content(error_body(e.what()).dump(), "application/json");
        } catch (const std::exception& e) {
            spdlog::error("request failed: {}", e.what());
            res.status = 500;
            res.set_content(error_body(e.what()).dump(), "application/json");
        }
    };

    server.Get("/snapshots", [&service, respond](const httplib::Request&, httplib::Response& res) {
        respond(res, [&] { return service.snapshots(); });
    });
    server.Get("/search", [&service, respond](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] { return service.search(parse_query_request(req.params)); });
    });
    server.Get(R"(/node/([a-z]+)/(.+))", [&service, respond](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            NodeKind kind = parse_node_kind(req.matches[1].str());
            Interval interval = parse_interval_param(req.params, "interval");
            std::size_t limit = req.has_param("limit") ? parse_limit(req.get_param_value("limit"), "limit")
                                                       : kDefaultLimit;
            return service.node(kind, req.matches[2].str(), interval, limit);
        });
    });
    server.Get("/timeline", [&service, respond](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            if (!req.has_param("topic")) throw ValidationError("topic", "missing 'topic'");
            return service.timeline(req.get_param_value("topic"), parse_interval_param(req.params, "from"),
                                    parse_interval_param(req.params, "to"));
        });
    });
}

}  // namespace skg
