#include "skg/signatures.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace skg {
namespace {

TermVector score_corpus(std::string key, const std::vector<const Post*>& posts, const GlobalStats& global,
                        const SignatureParams& params, const StopWords& stop, std::string_view excluded) {
    TermVector out{std::move(key), {}};

    std::set<std::pair<std::string, std::string>> anchors;  // (author, anchor text)
    for (const Post* post : posts) anchors.emplace(post->author_id, social_anchor_text(post->text));

    std::map<std::string, std::uint64_t> local;
    std::uint64_t local_total = 0;
    for (const auto& [author, anchor] : anchors) {
        for (auto& gram : enumerate_ngrams(clean_tokens(anchor, stop), params.n_max)) {
            ++local[std::move(gram)];
            ++local_total;
        }
    }

    for (const auto& [term, tf] : local) {
        if (term == excluded) continue;
        auto df = global.df.find(term);
        auto occ = global.occurrences.find(term);
        if (df == global.df.end() || occ == global.occurrences.end()) {
            throw std::invalid_argument("term '" + term + "' missing from global statistics");
        }
        ScoredTerm scored;
        scored.term = term;
        scored.tf = tf;
        scored.components["tfidf"] = tfidf(tf, df->second, global.documents);
        scored.components["affinity"] = affinity(tf, local_total, occ->second, global.total_occurrences);
        scored.score = params.weights.tfidf * scored.components["tfidf"] +
                       params.weights.affinity * scored.components["affinity"];
        out.terms.push_back(std::move(scored));
    }

    std::sort(out.terms.begin(), out.terms.end(), ranks_before);
    if (out.terms.size() > params.max_terms) out.terms.resize(params.max_terms);
    return out;
}

}  // namespace

double tfidf(std::uint64_t tf, std::uint64_t df, std::uint64_t corpus_size) {
    if (tf < 1 || df < 1 || df > corpus_size) {
        throw std::domain_error("tfidf requires tf >= 1 and 1 <= df <= n");
    }
    return (1.0 + std::log(static_cast<double>(tf))) *
           std::log(static_cast<double>(corpus_size) / static_cast<double>(df));
}

double affinity(std::uint64_t local_count, std::uint64_t local_total, std::uint64_t global_count,
                std::uint64_t global_total) {
    if (local_total < 1 || global_total < 1 || local_count > local_total || global_count > global_total) {
        throw std::domain_error("affinity requires totals >= 1 and totals >= counts");
    }
    double local_rate = static_cast<double>(local_count) / static_cast<double>(local_total);
    double global_rate = static_cast<double>(global_count + 1) / static_cast<double>(global_total + 1);
    return local_rate / global_rate;
}

void GlobalStats::add_document(const std::vector<std::string>& ngrams) {
    ++documents;
    std::set<std::string_view> distinct;
    for (const auto& gram : ngrams) {
        ++occurrences[gram];
        ++total_occurrences;
        distinct.insert(gram);
    }
    for (auto gram : distinct) ++df[std::string(gram)];
}

GlobalStats build_global_stats(const std::vector<Post>& posts, const StopWords& stop, std::size_t n_max) {
    GlobalStats stats;
    for (const auto& post : posts) {
        stats.add_document(enumerate_ngrams(clean_tokens(social_anchor_text(post.text), stop), n_max));
    }
    return stats;
}

std::string social_anchor_text(std::string_view post_text) { return strip_links_and_handles(post_text); }

bool ranks_before(const ScoredTerm& a, const ScoredTerm& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.tf != b.tf) return a.tf > b.tf;
    return a.term < b.term;
}

SocialSignature social_signature(const std::string& link_url, const std::vector<const Post*>& posts,
                                 const GlobalStats& global, const SignatureParams& params,
                                 const StopWords& stop) {
    return score_corpus(link_url, posts, global, params, stop, {});
}

ContextualVector contextual_vector(const Topic& topic, const std::vector<const Post*>& posts,
                                   const GlobalStats& global, const SignatureParams& params,
                                   const StopWords& stop) {
    // "#tax" shows up in cleaned text as the token "tax".
    std::string_view self = topic.text;
    if (topic.type == TopicType::hashtag || topic.type == TopicType::cashtag) self.remove_prefix(1);
    return score_corpus(topic.key(), posts, global, params, stop, self);
}

}  // namespace skg
