#include "skg/snapshot_io.hpp"

#include "skg/error.hpp"

#include <fstream>
#include <functional>

namespace skg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kManifest = "manifest.json";
constexpr const char* kTrendHistory = "trend_history.jsonl";

class LineWriter {
public:
    explicit LineWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot create '" + path.string() + "'");
    }
    void write(const json& j) { out_ << j.dump() << '\n'; }
    void close() {
        out_.close();
        if (!out_) throw IoError("failed writing '" + path_.string() + "'");
    }

private:
    fs::path path_;
    std::ofstream out_;
};

void read_lines(const fs::path& path, const std::function<void(const json&)>& consume) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path.string(), 0, "missing or unreadable");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            consume(json::parse(line));
        } catch (const json::exception& e) {
            throw LoadError(path.string(), line_no, e.what());
        } catch (const ValidationError& e) {
            throw LoadError(path.string(), line_no, e.what());
        }
    }
    if (in.bad()) throw LoadError(path.string(), line_no, "read failure");
}

json interval_json(const Interval& interval) {
    return {{"granularity", to_string(interval.granularity)},
            {"label", interval.label()},
            {"start", format_iso8601(interval.start)},
            {"end", format_iso8601(interval.end())}};
}

}  // namespace

fs::path snapshot_dir(const fs::path& root, const Interval& interval) {
    return root / std::string(to_string(interval.granularity)) / interval.label();
}

void write_snapshot(const GraphSnapshot& s, const fs::path& root) {
    const fs::path final_dir = snapshot_dir(root, s.interval);
    const fs::path tmp_dir = final_dir.string() + ".tmp";
    std::error_code ec;
    fs::remove_all(tmp_dir, ec);
    fs::create_directories(tmp_dir / "connections", ec);
    if (ec) throw IoError("cannot create '" + tmp_dir.string() + "': " + ec.message());

    auto dump_map = [&](const char* file, const auto& table) {
        LineWriter w(tmp_dir / file);
        for (const auto& [key, record] : table) w.write(to_json(record));
        w.close();
    };
    dump_map("users.jsonl", s.users);
    dump_map("links.jsonl", s.links);
    dump_map("topics.jsonl", s.topics);
    dump_map("posts.jsonl", s.posts);
    for (Table t : all_tables()) {
        LineWriter w(tmp_dir / "connections" / (std::string(table_info(t).name) + ".jsonl"));
        for (const auto& [key, row] : s.table(t)) w.write(to_json(row));
        w.close();
    }
    {
        LineWriter w(tmp_dir / "topic_index.jsonl");
        for (const auto& [token, keys] : s.topic_index) w.write({{"token", token}, {"topics", keys}});
        w.close();
    }
    {
        LineWriter w(tmp_dir / kTrendHistory);
        for (const auto& [key, counts] : s.trend_history) w.write({{"key", key}, {"counts", counts}});
        w.close();
    }
    {
        std::ofstream out(tmp_dir / kManifest, std::ios::binary);
        json manifest = {{"interval", interval_json(s.interval)},
                         {"build_version", s.manifest.build_version},
                         {"counts", s.manifest.counts},
                         {"parameters", s.manifest.parameters}};
        out << manifest.dump(2) << '\n';
        if (!out) throw IoError("failed writing manifest in '" + tmp_dir.string() + "'");
    }

    fs::remove_all(final_dir, ec);
    fs::rename(tmp_dir, final_dir, ec);
    if (ec) throw IoError("cannot move snapshot into '" + final_dir.string() + "': " + ec.message());
}

json read_manifest(const fs::path& dir) {
    const fs::path path = dir / kManifest;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path.string(), 0, "missing or unreadable");
    try {
        json j = json::parse(in);
        if (!j.is_object() || !j.contains("interval") || !j.contains("counts")) {
            throw LoadError(path.string(), 0, "manifest lacks interval or counts");
        }
        return j;
    } catch (const json::exception& e) {
        throw LoadError(path.string(), 0, e.what());
    }
}

GraphSnapshot read_snapshot(const fs::path& root, const Interval& interval) {
    const fs::path dir = snapshot_dir(root, interval);
    if (!fs::is_directory(dir)) {
        throw NotFoundError("no " + std::string(to_string(interval.granularity)) + " snapshot for " +
                            interval.label());
    }

    GraphSnapshot s;
    s.interval = interval;
    json manifest = read_manifest(dir);
    try {
        if (manifest.at("interval").at("label").get<std::string>() != interval.label()) {
            throw LoadError((dir / kManifest).string(), 0, "interval label does not match directory");
        }
        s.manifest.build_version = manifest.at("build_version").get<std::string>();
        s.manifest.counts = manifest.at("counts").get<std::map<std::string, std::uint64_t>>();
        s.manifest.parameters = manifest.value("parameters", json::object());
    } catch (const json::exception& e) {
        throw LoadError((dir / kManifest).string(), 0, e.what());
    }

    read_lines(dir / "users.jsonl", [&](const json& j) {
        auto r = user_record_from_json(j);
        s.users.emplace(r.user_id, std::move(r));
    });
    read_lines(dir / "links.jsonl", [&](const json& j) {
        auto r = link_record_from_json(j);
        s.links.emplace(r.url, std::move(r));
    });
    read_lines(dir / "topics.jsonl", [&](const json& j) {
        auto r = topic_record_from_json(j);
        s.topics.emplace(r.topic.key(), std::move(r));
    });
    read_lines(dir / "posts.jsonl", [&](const json& j) {
        auto r = post_record_from_json(j);
        s.posts.emplace(r.post_id, std::move(r));
    });
    for (Table t : all_tables()) {
        const auto& info = table_info(t);
        const fs::path path = dir / "connections" / (std::string(info.name) + ".jsonl");
        std::size_t row_no = 0;
        read_lines(path, [&](const json& j) {
            ++row_no;
            auto r = connection_from_json(j);
            if (r.left_kind != info.left || r.right_kind != info.right) {
                throw LoadError(path.string(), row_no, "endpoint kinds do not match the table");
            }
            s.table(t).emplace(r.key(), std::move(r));
        });
    }
    read_lines(dir / "topic_index.jsonl", [&](const json& j) {
        s.topic_index.emplace(j.at("token").get<std::string>(), j.at("topics").get<std::set<std::string>>());
    });
    read_lines(dir / kTrendHistory, [&](const json& j) {
        s.trend_history.emplace(j.at("key").get<std::string>(), j.at("counts").get<std::vector<double>>());
    });
    return s;
}

TrendHistory read_trend_history(const fs::path& root, const Interval& interval) {
    TrendHistory history;
    const fs::path path = snapshot_dir(root, interval) / kTrendHistory;
    if (!fs::exists(path)) return history;
    read_lines(path, [&](const json& j) {
        history.emplace(j.at("key").get<std::string>(), j.at("counts").get<std::vector<double>>());
    });
    return history;
}

}  // namespace skg
