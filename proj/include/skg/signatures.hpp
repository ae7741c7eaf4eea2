#pragma once

#include "skg/extract.hpp"
#include "skg/ingest.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace skg {

struct TermStats {
    std::string term;
    std::uint64_t tf = 1;
    std::uint64_t df = 1;
    std::uint64_t corpus_size = 1;
};

struct ScoredTerm {
    std::string term;
    double score = 0.0;
    std::map<std::string, double> components;  // "tfidf", "affinity"
    std::uint64_t tf = 0;                      // local occurrences, used for tie-breaks

    bool operator==(const ScoredTerm&) const = default;
};

// Ranked n-gram list for a link (social signature) or a hashtag/entity
// (contextual vector).
struct TermVector {
    std::string key;
    std::vector<ScoredTerm> terms;

    bool operator==(const TermVector&) const = default;
};
using SocialSignature = TermVector;
using ContextualVector = TermVector;

struct ScoreWeights {
    double tfidf = 1.0;
    double affinity = 0.5;
};

// (1 + ln tf) * ln(n / df). Throws std::domain_error unless tf >= 1 and 1 <= df <= n.
double tfidf(std::uint64_t tf, std::uint64_t df, std::uint64_t corpus_size);

// Local rate over the +1-smoothed global rate. Throws std::domain_error unless
// totals >= 1 and totals >= counts.
double affinity(std::uint64_t local_count, std::uint64_t local_total, std::uint64_t global_count,
                std::uint64_t global_total);

// Interval-wide n-gram statistics; one filtered post is one document.
struct GlobalStats {
    std::uint64_t documents = 0;
    std::uint64_t total_occurrences = 0;
    std::unordered_map<std::string, std::uint64_t> df;
    std::unordered_map<std::string, std::uint64_t> occurrences;

    void add_document(const std::vector<std::string>& ngrams);
};

GlobalStats build_global_stats(const std::vector<Post>& posts, const StopWords& stop, std::size_t n_max = 3);

struct SignatureParams {
    ScoreWeights weights;
    std::size_t max_terms = 20;
    std::size_t n_max = 3;
};

std::string social_anchor_text(std::string_view post_text);

// Ranking order: score desc, tf desc, term asc.
bool ranks_before(const ScoredTerm& a, const ScoredTerm& b);

// Anchor texts are de-duplicated per author before counting. A term missing
// from `global` is a precondition violation (std::invalid_argument).
SocialSignature social_signature(const std::string& link_url, const std::vector<const Post*>& posts,
                                 const GlobalStats& global, const SignatureParams& params,
                                 const StopWords& stop);

// As social_signature; the topic's own text never appears among the terms.
ContextualVector contextual_vector(const Topic& topic, const std::vector<const Post*>& posts,
                                   const GlobalStats& global, const SignatureParams& params,
                                   const StopWords& stop);

}  // namespace skg
