#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "podium/package.hpp"

namespace podium {

struct AlignmentConfig {
    double k1 = 1.2;
    double b = 0.75;
    std::size_t window_ahead = 3;
    std::size_t window_behind = 1;
    std::size_t query_len = 8;
    double advance_margin = 0.5;
    double min_score = 0.1;
    std::size_t lookahead = 4;     // tokens skipped over when following a sentence
    std::size_t end_slack = 2;     // unheard tail tolerated before moving on
    std::size_t min_evidence = 2;  // distinct query tokens a jump target must contain
};

/// Throws Error{InvalidRequest} on out-of-range parameters.
void validate_config(const AlignmentConfig& config);

/// Okapi BM25 over a fixed document set, statistics computed once.
class Bm25Index {
public:
    Bm25Index(std::vector<std::vector<std::string>> docs, double k1 = 1.2, double b = 0.75);

    /// Query terms are summed with multiplicity. 0 for an empty query.
    double score(std::span<const std::string> query, std::size_t doc) const;
    double idf(const std::string& term) const;

    std::size_t size() const { return docs_.size(); }
    double avgdl() const { return avgdl_; }
    bool contains(const std::string& term) const { return df_.contains(term); }

private:
    std::vector<std::vector<std::string>> docs_;
    std::vector<std::unordered_map<std::string, std::size_t>> tf_;
    std::unordered_map<std::string, std::size_t> df_;
    double k1_;
    double b_;
    double avgdl_ = 0.0;
};

double bm25_score(std::span<const std::string> query, std::size_t sentence_index,
                  const std::vector<std::vector<std::string>>& corpus, double k1 = 1.2,
                  double b = 0.75);

struct TranscriptEvent {
    std::int64_t t_ms = 0;
    std::string text;

    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

inline constexpr std::size_t kHistoryLimit = 512;
inline constexpr std::int64_t kHeardLogSpanMs = 120000;
inline constexpr std::size_t kUnattributed = std::numeric_limits<std::size_t>::max();

struct HistoryEntry {
    std::int64_t t_ms = 0;
    std::size_t sentence_index = 0;

    friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct HeardToken {
    std::string token;
    std::size_t sentence = kUnattributed;  // sentence it was matched against

    friend bool operator==(const HeardToken&, const HeardToken&) = default;
};

struct HeardCount {
    std::int64_t t_ms = 0;
    std::size_t tokens = 0;

    friend bool operator==(const HeardCount&, const HeardCount&) = default;
};

struct AlignmentState {
    std::size_t sentence_index = 0;
    std::size_t token_offset = 0;
    double confidence = 0.0;
    std::size_t tokens_heard = 0;
    std::deque<HistoryEntry> history;  // at most kHistoryLimit entries
    std::deque<HeardToken> query;      // last query_len recognized tokens
    std::deque<HeardCount> heard_log;  // per-event token counts, for rate estimates

    friend bool operator==(const AlignmentState&, const AlignmentState&) = default;
};

/// Sentence corpus of a package in global order.
class ScriptIndex {
public:
    ScriptIndex(const ScriptPackage& package, const AlignmentConfig& config = {});

    std::size_t size() const { return sentences_.size(); }
    const std::vector<std::string>& tokens(std::size_t sentence) const
    {
        return sentences_[sentence];
    }
    std::size_t total_tokens() const { return total_tokens_; }
    const Bm25Index& bm25() const { return bm25_; }

private:
    std::vector<std::vector<std::string>> sentences_;
    std::size_t total_tokens_ = 0;
    Bm25Index bm25_;
};

AlignmentState ingest(const AlignmentState& state, const TranscriptEvent& event,
                      const ScriptIndex& script, const AlignmentConfig& config = {});

/// The only backward move. Clamps to the script, resets confidence, offset
/// and the query buffer.
AlignmentState manual_scroll(const AlignmentState& state, long delta_sentences,
                             const ScriptIndex& script);

}  // namespace podium
