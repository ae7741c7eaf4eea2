#pragma once

#include "skg/config.hpp"
#include "skg/graph.hpp"
#include "skg/trust.hpp"

#include <map>
#include <string>
#include <vector>

namespace skg {

struct BuildInputs {
    std::vector<Post> posts;
    UserMap users;
    LinkMap links;
    std::size_t skipped_posts = 0;  // malformed input lines
};

struct BuildResources {
    StopWords stop_words = StopWords::english();
    Gazetteer gazetteer = Gazetteer::demo();
};

// Appends this interval's counts to `previous`. Keys absent now get a 0; a
// series of only zeros is dropped; series keep at most `max_length` entries.
TrendHistory advance_history(const TrendHistory& previous, const std::map<std::string, double>& current,
                             std::size_t max_length);

// The full per-interval pipeline: trust expansion over all supplied posts,
// quality filtering of the posts inside `interval`, link/topic selection,
// signatures, connections, post selection and the trend history sidecar.
// `previous` is the trend history of the preceding interval.
GraphSnapshot build_snapshot(const BuildInputs& inputs, const Interval& interval, const PipelineConfig& config,
                             const BuildResources& resources, const TrendHistory& previous = {});

}  // namespace skg
