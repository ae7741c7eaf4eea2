#include "skg/config.hpp"
#include "skg/corpus.hpp"
#include "skg/error.hpp"
#include "skg/pipeline.hpp"
#include "skg/rollup.hpp"
#include "skg/service.hpp"
#include "skg/snapshot_io.hpp"
#include "skg/trust.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

skg::PipelineConfig config_or_default(const std::string& path) {
    return path.empty() ? skg::PipelineConfig{} : skg::load_config(path);
}

skg::BuildResources resources(const std::string& gazetteer, const std::string& stopwords) {
    skg::BuildResources r;
    if (!gazetteer.empty()) r.gazetteer = skg::Gazetteer::load(gazetteer);
    if (!stopwords.empty()) r.stop_words = skg::StopWords::load(stopwords);
    return r;
}

struct BuildArgs {
    std::string posts, users, links, gazetteer, stopwords, config, interval, out;
};

int run_build(const BuildArgs& a) {
    auto started = std::chrono::steady_clock::now();
    skg::Interval interval = skg::parse_interval_label(a.interval);
    if (interval.granularity != skg::Granularity::hour) {
        throw skg::ValidationError("interval", "build expects an hourly interval such as 2017-11-11T13");
    }
    skg::PipelineConfig config = config_or_default(a.config);
    skg::BuildInputs inputs;
    auto posts = skg::load_posts(a.posts);
    inputs.posts = std::move(posts.records);
    inputs.skipped_posts = posts.skipped;
    inputs.users = skg::load_users(a.users);
    if (!a.links.empty()) inputs.links = skg::load_links(a.links);
    auto previous = skg::read_trend_history(a.out, interval.previous());
    auto snapshot = skg::build_snapshot(inputs, interval, config, resources(a.gazetteer, a.stopwords), previous);
    skg::write_snapshot(snapshot, a.out);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    spdlog::info("built {} ({} users, {} links, {} topics, {} posts) in {} ms",
                 skg::snapshot_dir(a.out, interval).string(), snapshot.users.size(), snapshot.links.size(),
                 snapshot.topics.size(), snapshot.posts.size(), ms.count());
    return kExitOk;
}

int run_rollup(const std::string& granularity, const std::string& date, const std::string& root,
               const std::string& config_path) {
    auto g = skg::parse_granularity(granularity);
    skg::Interval target = skg::parse_interval_label(date);
    if (target.granularity != g) {
        throw skg::ValidationError("date", "'" + date + "' is not a " + granularity + " label");
    }
    skg::PipelineConfig config = config_or_default(config_path);
    std::vector<skg::GraphSnapshot> parts;
    for (const auto& child : skg::child_intervals(target)) {
        if (!std::filesystem::exists(skg::snapshot_dir(root, child))) continue;
        parts.push_back(skg::read_snapshot(root, child));
    }
    if (parts.empty()) {
        throw skg::NotFoundError("no child snapshots of " + target.label() + " under '" + root + "'");
    }
    auto previous = skg::read_trend_history(root, target.previous());
    auto merged = skg::merge_snapshots(parts, target, skg::merge_params(config), previous);
    auto pruned = skg::prune(merged, config.prune);
    skg::write_snapshot(pruned, root);
    spdlog::info("rolled up {} parts into {}", parts.size(), skg::snapshot_dir(root, target).string());
    return kExitOk;
}

int run_trust(const std::string& posts_path, const std::string& users_path, int max_iters, const std::string& out) {
    auto posts = skg::load_posts(posts_path);
    auto users = skg::load_users(users_path);
    std::set<std::string> seeds;
    for (const auto& [id, u] : users)
        if (u.verified) seeds.insert(id);
    auto result = skg::expand_trusted(seeds, skg::build_interactions(posts.records), max_iters);
    std::ofstream file(out, std::ios::binary);
    if (!file) throw skg::IoError("cannot create '" + out + "'");
    for (const auto& [id, ring] : result.ring) {
        file << nlohmann::json{{"user_id", id}, {"ring", ring}}.dump() << '\n';
    }
    if (!file) throw skg::IoError("failed writing '" + out + "'");
    spdlog::info("{} trusted users from {} seeds after {} iterations", result.trusted.size(), seeds.size(),
                 result.iterations_run);
    return kExitOk;
}

int run_serve(const std::string& root, const std::string& host, int port, std::size_t lru, const std::string& cors) {
    if (!std::filesystem::is_directory(root)) throw skg::IoError("snapshot root '" + root + "' is not a directory");
    skg::SnapshotStore store(root, lru);
    skg::QueryService service(store);
    httplib::Server server;
    skg::register_routes(server, service, skg::ServerOptions{cors});
    spdlog::info("serving {} on http://{}:{}", root, host, port);
    if (!server.listen(host, port)) throw skg::IoError("cannot listen on " + host + ":" + std::to_string(port));
    return kExitOk;
}

struct QueryArgs {
    std::string root, q, node, interval, granularity, filter_kinds, topic_types;
    std::size_t limit = skg::kDefaultLimit;
};

int run_query(const QueryArgs& a) {
    std::multimap<std::string, std::string> params;
    auto put = [&](const char* key, const std::string& value) {
        if (!value.empty()) params.emplace(key, value);
    };
    put("q", a.q);
    put("node", a.node);
    put("interval", a.interval);
    put("granularity", a.granularity);
    put("filter_kinds", a.filter_kinds);
    put("topic_types", a.topic_types);
    params.emplace("limit", std::to_string(a.limit));
    auto req = skg::parse_query_request(params);
    skg::SnapshotStore store(a.root, 1);
    skg::QueryService service(store);
    std::cout << service.search(req).dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social knowledge graph builder and query service"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    BuildArgs build;
    auto* cmd_build = app.add_subcommand("build", "Build one hourly snapshot");
    cmd_build->add_option("--posts", build.posts, "Posts JSONL")->required();
    cmd_build->add_option("--users", build.users, "User profiles JSONL")->required();
    cmd_build->add_option("--links", build.links, "Link metadata JSONL");
    cmd_build->add_option("--gazetteer", build.gazetteer, "Entity gazetteer TSV (surface, class)");
    cmd_build->add_option("--stopwords", build.stopwords, "Stop word list, one per line");
    cmd_build->add_option("--config", build.config, "key = value configuration file");
    cmd_build->add_option("--interval", build.interval, "Hour label, e.g. 2017-11-11T13")->required();
    cmd_build->add_option("--out", build.out, "Snapshot root")->required();

    std::string roll_granularity, roll_date, roll_root, roll_config;
    auto* cmd_rollup = app.add_subcommand("rollup", "Merge finer snapshots into a coarser one");
    cmd_rollup->add_option("--granularity", roll_granularity, "day, month or year")->required();
    cmd_rollup->add_option("--date", roll_date, "Target label, e.g. 2017-11-11")->required();
    cmd_rollup->add_option("--snapshots", roll_root, "Snapshot root")->required();
    cmd_rollup->add_option("--config", roll_config, "key = value configuration file");

    std::string trust_posts, trust_users, trust_out;
    int trust_iters = 10;
    auto* cmd_trust = app.add_subcommand("trust", "Expand the trusted user set from verified accounts");
    cmd_trust->add_option("--posts", trust_posts, "Posts JSONL")->required();
    cmd_trust->add_option("--users", trust_users, "User profiles JSONL")->required();
    cmd_trust->add_option("--max-iters", trust_iters, "Maximum rings")->capture_default_str();
    cmd_trust->add_option("--out", trust_out, "Output JSONL of {user_id, ring}")->required();

    std::string serve_root, serve_host = "127.0.0.1", serve_cors = "*";
    int serve_port = 8080;
    std::size_t serve_lru = 4;
    auto* cmd_serve = app.add_subcommand("serve", "Serve snapshots over HTTP");
    cmd_serve->add_option("--snapshots", serve_root, "Snapshot root")->required();
    cmd_serve->add_option("--host", serve_host)->capture_default_str();
    cmd_serve->add_option("--port", serve_port)->capture_default_str();
    cmd_serve->add_option("--lru", serve_lru, "Snapshots kept in memory")->capture_default_str();
    cmd_serve->add_option("--cors-origin", serve_cors)->capture_default_str();

    QueryArgs query;
    auto* cmd_query = app.add_subcommand("query", "Run one search and print JSON");
    cmd_query->add_option("--snapshots", query.root, "Snapshot root")->required();
    cmd_query->add_option("--q", query.q, "Free-text query");
    cmd_query->add_option("--node", query.node, "kind:id");
    cmd_query->add_option("--interval", query.interval, "Interval label")->required();
    cmd_query->add_option("--granularity", query.granularity);
    cmd_query->add_option("--filter-kinds", query.filter_kinds, "Comma-separated node kinds");
    cmd_query->add_option("--topic-types", query.topic_types, "Comma-separated topic types");
    cmd_query->add_option("--limit", query.limit)->capture_default_str();

    std::string synth_out;
    skg::CorpusSpec synth;
    auto* cmd_synth = app.add_subcommand("synth", "Write the synthetic demo corpus");
    cmd_synth->add_option("--out", synth_out, "Output directory")->required();
    cmd_synth->add_option("--seed", synth.seed)->capture_default_str();
    cmd_synth->add_option("--posts", synth.posts)->capture_default_str();
    cmd_synth->add_option("--users", synth.users)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        if (*cmd_build) return run_build(build);
        if (*cmd_rollup) return run_rollup(roll_granularity, roll_date, roll_root, roll_config);
        if (*cmd_trust) return run_trust(trust_posts, trust_users, trust_iters, trust_out);
        if (*cmd_serve) return run_serve(serve_root, serve_host, serve_port, serve_lru, serve_cors);
        if (*cmd_query) return run_query(query);
        if (*cmd_synth) {
            skg::write_corpus(skg::generate_corpus(synth), synth_out);
            return kExitOk;
        }
    } catch (const skg::ValidationError& e) {
        spdlog::error("{}: {}", e.field(), e.what());
        return kExitValidation;
    } catch (const skg::IoError& e) {
        spdlog::error("{}", e.what());
        return kExitIo;
    } catch (const skg::NotFoundError& e) {
        spdlog::error("{}", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
