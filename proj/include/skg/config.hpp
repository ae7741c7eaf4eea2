#pragma once

#include "skg/extract.hpp"
#include "skg/graph.hpp"
#include "skg/ingest.hpp"
#include "skg/signatures.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace skg {

struct LinkSelectionParams {
    std::size_t k_popular = 50;
    std::size_t k_viral = 25;
    std::size_t k_trending = 25;
};

struct TopicSelectionParams {
    std::size_t k_popular_per_type = 100;
    std::size_t k_trending_per_type = 25;
    // Minimum distinct-account frequency for a topic to enter the trend history.
    std::uint64_t min_tracked_frequency = 2;
};

struct PruneThresholds {
    // Element type -> minimum count at the base interval. Keys are "link",
    // "topic", "topic:<type>", "<table>" or "<table>:<relation>"; the most
    // specific key wins and missing keys mean no threshold. Users and posts
    // carry no count and are never pruned on their own.
    std::map<std::string, double> base;
    double exponent = 0.8;                   // in [0, 1]
    std::int64_t base_interval_seconds = 3600;

    // (span / base interval) ^ exponent, never below 1.
    double multiplier(const Interval& span) const;
    double threshold(const std::string& element_type, const Interval& span) const;
};

struct PipelineConfig {
    FilterThresholds filter;
    int trust_max_iterations = 10;
    ExtractOptions extract;
    SignatureParams link_signature;
    SignatureParams contextual_vector;
    LinkSelectionParams links;
    TopicSelectionParams topics;
    std::size_t k_posts = 5;
    FanParams fan;
    PruneThresholds prune;
    std::size_t history_max_length = 48;

    // Throws ValidationError naming the offending key.
    void validate() const;
    nlohmann::json to_json() const;
};

// `key = value` lines; '#' starts a comment. Keys mirror the struct fields,
// e.g. "filter.max_spam", "links.k_popular", "prune.min.topic:hashtag".
// Unknown keys and unparsable values are validation errors.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace skg
