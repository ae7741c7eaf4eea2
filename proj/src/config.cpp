#include "skg/config.hpp"

#include "skg/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>

namespace skg {
namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
        throw ValidationError(key, key + ": expected a number, got '" + value + "'");
    }
    return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
    Int out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ValidationError(key, key + ": expected an integer, got '" + value + "'");
    }
    return out;
}

using Setter = std::function<void(PipelineConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"filter.max_spam", [](auto& c, auto& k, auto& v) { c.filter.max_spam = to_double(k, v); }},
        {"filter.max_adult", [](auto& c, auto& k, auto& v) { c.filter.max_adult = to_double(k, v); }},
        {"filter.max_profanity", [](auto& c, auto& k, auto& v) { c.filter.max_profanity = to_double(k, v); }},
        {"filter.min_user_authority",
         [](auto& c, auto& k, auto& v) { c.filter.min_user_authority = to_double(k, v); }},
        {"filter.max_user_adult", [](auto& c, auto& k, auto& v) { c.filter.max_user_adult = to_double(k, v); }},
        {"filter.min_followers",
         [](auto& c, auto& k, auto& v) { c.filter.min_followers = to_int<std::uint64_t>(k, v); }},
        {"trust.max_iterations", [](auto& c, auto& k, auto& v) { c.trust_max_iterations = to_int<int>(k, v); }},
        {"extract.n_max", [](auto& c, auto& k, auto& v) {
             c.extract.n_max = to_int<std::size_t>(k, v);
             c.link_signature.n_max = c.extract.n_max;
             c.contextual_vector.n_max = c.extract.n_max;
         }},
        {"signature.weight.tfidf",
         [](auto& c, auto& k, auto& v) { c.link_signature.weights.tfidf = to_double(k, v); }},
        {"signature.weight.affinity",
         [](auto& c, auto& k, auto& v) { c.link_signature.weights.affinity = to_double(k, v); }},
        {"signature.k", [](auto& c, auto& k, auto& v) { c.link_signature.max_terms = to_int<std::size_t>(k, v); }},
        {"context.weight.tfidf",
         [](auto& c, auto& k, auto& v) { c.contextual_vector.weights.tfidf = to_double(k, v); }},
        {"context.weight.affinity",
         [](auto& c, auto& k, auto& v) { c.contextual_vector.weights.affinity = to_double(k, v); }},
        {"context.k",
         [](auto& c, auto& k, auto& v) { c.contextual_vector.max_terms = to_int<std::size_t>(k, v); }},
        {"links.k_popular", [](auto& c, auto& k, auto& v) { c.links.k_popular = to_int<std::size_t>(k, v); }},
        {"links.k_viral", [](auto& c, auto& k, auto& v) { c.links.k_viral = to_int<std::size_t>(k, v); }},
        {"links.k_trending", [](auto& c, auto& k, auto& v) { c.links.k_trending = to_int<std::size_t>(k, v); }},
        {"topics.k_popular_per_type",
         [](auto& c, auto& k, auto& v) { c.topics.k_popular_per_type = to_int<std::size_t>(k, v); }},
        {"topics.k_trending_per_type",
         [](auto& c, auto& k, auto& v) { c.topics.k_trending_per_type = to_int<std::size_t>(k, v); }},
        {"topics.min_tracked_frequency",
         [](auto& c, auto& k, auto& v) { c.topics.min_tracked_frequency = to_int<std::uint64_t>(k, v); }},
        {"posts.k", [](auto& c, auto& k, auto& v) { c.k_posts = to_int<std::size_t>(k, v); }},
        {"fan.min_days", [](auto& c, auto& k, auto& v) { c.fan.min_days = to_int<std::uint64_t>(k, v); }},
        {"fan.top_fraction", [](auto& c, auto& k, auto& v) { c.fan.top_fraction = to_double(k, v); }},
        {"prune.exponent", [](auto& c, auto& k, auto& v) { c.prune.exponent = to_double(k, v); }},
        {"history.max_length",
         [](auto& c, auto& k, auto& v) { c.history_max_length = to_int<std::size_t>(k, v); }},
    };
    return table;
}

}  // namespace

double PruneThresholds::multiplier(const Interval& span) const {
    double ratio = static_cast<double>(span.length_seconds()) / static_cast<double>(base_interval_seconds);
    return std::max(1.0, std::pow(ratio, exponent));
}

double PruneThresholds::threshold(const std::string& element_type, const Interval& span) const {
    std::string key = element_type;
    while (true) {
        if (auto it = base.find(key); it != base.end()) return it->second * multiplier(span);
        auto colon = key.rfind(':');
        if (colon == std::string::npos) return 0.0;
        key.erase(colon);
    }
}

void PipelineConfig::validate() const {
    filter.validate();
    if (trust_max_iterations < 1) throw ValidationError("trust.max_iterations", "trust.max_iterations must be >= 1");
    if (extract.n_max < 1) throw ValidationError("extract.n_max", "extract.n_max must be >= 1");
    if (k_posts < 1) throw ValidationError("posts.k", "posts.k must be >= 1");
    if (!(fan.top_fraction > 0.0 && fan.top_fraction <= 1.0)) {
        throw ValidationError("fan.top_fraction", "fan.top_fraction must lie in (0,1]");
    }
    if (!(prune.exponent >= 0.0 && prune.exponent <= 1.0)) {
        throw ValidationError("prune.exponent", "prune.exponent must lie in [0,1]");
    }
    for (const auto& w : {link_signature.weights, contextual_vector.weights}) {
        if (w.tfidf < 0.0 || w.affinity < 0.0) {
            throw ValidationError("signature.weight", "signature weights must be non-negative");
        }
    }
    for (const auto& [key, value] : prune.base) {
        if (value < 0.0) throw ValidationError("prune.min." + key, "prune thresholds must be non-negative");
    }
    if (history_max_length < 1) throw ValidationError("history.max_length", "history.max_length must be >= 1");
}

nlohmann::json PipelineConfig::to_json() const {
    return {{"filter",
             {{"max_spam", filter.max_spam},
              {"max_adult", filter.max_adult},
              {"max_profanity", filter.max_profanity},
              {"min_user_authority", filter.min_user_authority},
              {"max_user_adult", filter.max_user_adult},
              {"min_followers", filter.min_followers}}},
            {"trust_max_iterations", trust_max_iterations},
            {"n_max", extract.n_max},
            {"signature",
             {{"tfidf", link_signature.weights.tfidf},
              {"affinity", link_signature.weights.affinity},
              {"k", link_signature.max_terms}}},
            {"context",
             {{"tfidf", contextual_vector.weights.tfidf},
              {"affinity", contextual_vector.weights.affinity},
              {"k", contextual_vector.max_terms}}},
            {"links", {{"k_popular", links.k_popular}, {"k_viral", links.k_viral}, {"k_trending", links.k_trending}}},
            {"topics",
             {{"k_popular_per_type", topics.k_popular_per_type},
              {"k_trending_per_type", topics.k_trending_per_type},
              {"min_tracked_frequency", topics.min_tracked_frequency}}},
            {"k_posts", k_posts},
            {"fan", {{"min_days", fan.min_days}, {"top_fraction", fan.top_fraction}}},
            {"prune", {{"base", prune.base}, {"exponent", prune.exponent}}},
            {"history_max_length", history_max_length}};
}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config", "config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.starts_with("prune.min.")) {
            config.prune.base[key.substr(10)] = to_double(key, value);
            continue;
        }
        auto it = setters().find(key);
        if (it == setters().end()) throw ValidationError(key, "unknown config key '" + key + "'");
        it->second(config, key, value);
    }
    config.validate();
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    return parse_config(in);
}

}  // namespace skg
