#pragma once

#include "skg/ingest.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace skg {

// One directed @mention or reply from `from_user` to `to_user`.
struct InteractionEdge {
    std::string from_user;
    std::string to_user;
    Instant timestamp;
    std::string post_id;

    bool operator==(const InteractionEdge&) const = default;
};

struct TrustResult {
    std::set<std::string> trusted;
    std::map<std::string, int> ring;  // 0 for seeds
    int iterations_run = 0;
};

// author -> each mentioned user, plus author -> reply target. Self-edges are dropped.
std::vector<InteractionEdge> build_interactions(const std::vector<Post>& posts);

// Pairs (v, u) where v initiated a 2-way exchange with u: some v->u edge strictly
// precedes some u->v edge.
std::set<std::pair<std::string, std::string>> initiated_pairs(const std::vector<InteractionEdge>& edges);

// Ring-by-ring expansion from the seeds. A user joins ring k+1 when a ring-<=k
// user initiated a 2-way exchange with them. Stops at a fixed point or after
// `max_iterations` rings.
TrustResult expand_trusted(const std::set<std::string>& seeds, const std::vector<InteractionEdge>& edges,
                           int max_iterations = 10);

}  // namespace skg
