#pragma once

#include "skg/config.hpp"
#include "skg/graph.hpp"

#include <map>
#include <string>
#include <vector>

namespace skg {

struct MergeParams {
    std::size_t k_posts = 5;
    std::size_t signature_terms = 20;
    std::size_t context_terms = 20;
    FanParams fan;
    std::size_t history_max_length = 48;
};

MergeParams merge_params(const PipelineConfig& config);

// An accumulated union of parts that has not been capped or re-scored yet.
// `combine` is associative and commutative: sums, max and earliest are
// order-free, and "latest" values come from the part with the later interval,
// never from argument order.
struct PartialMerge {
    GraphSnapshot acc;
    std::vector<Interval> parts;  // sorted by start
    // Start of the part each latest-value field came from, keyed
    // "user:<id>", "post:<id>", "spam:<url>", "title:<url>", "description:<url>".
    std::map<std::string, Instant> stamps;
};

PartialMerge lift(const GraphSnapshot& part);
// Throws ValidationError when the operands overlap in time or mix granularities.
PartialMerge combine(const PartialMerge& a, const PartialMerge& b);

// Caps supporting and example posts, re-ranks and caps term vectors,
// recomputes main scores, fanOrAuthority and trending, and relabels as `target`.
GraphSnapshot finalize(const PartialMerge& merged, const Interval& target, const MergeParams& params,
                       const TrendHistory& previous = {});

// Aggregates finer snapshots into `target` as finalize(fold(combine, parts)).
//
//   frequencies, votes, post/day counts   sum (active_days saturates at 1 for a day target)
//   virality                              max
//   first_seen, connection timestamps     earliest
//   names, scores, follower counts        value from the latest part
//   signatures, contextual vectors        per-term sum, re-ranked, capped
//   supporting / example posts            top k_posts by post score
//   trending                              z-score of the merged count against
//                                         `previous` (the preceding target-granularity history)
//
// Throws ValidationError when parts are empty, mixed-granularity, overlapping,
// not strictly finer than the target, or outside it.
GraphSnapshot merge_snapshots(const std::vector<GraphSnapshot>& parts, const Interval& target,
                              const MergeParams& params, const TrendHistory& previous = {});

// Drops components and connections whose primary count (frequency,
// popularity, vote score) is below the scaled threshold, then connections
// left dangling, then posts no longer referenced.
GraphSnapshot prune(const GraphSnapshot& snapshot, const PruneThresholds& thresholds);

}  // namespace skg
