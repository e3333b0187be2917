#include "podium/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "podium/error.hpp"
#include "podium/tokenize.hpp"

namespace podium {

void validate_config(const AlignmentConfig& c)
{
    auto bad = [](const std::string& why) { throw Error(ErrorCode::InvalidRequest, why); };
    if (!(c.k1 >= 0.0)) bad("k1 must be >= 0");
    if (!(c.b >= 0.0 && c.b <= 1.0)) bad("b must lie in [0, 1]");
    if (c.window_ahead < 1) bad("window_ahead must be >= 1");
    if (c.query_len < 1) bad("query_len must be >= 1");
    if (!(c.advance_margin >= 0.0)) bad("advance_margin must be >= 0");
    if (!(c.min_score >= 0.0)) bad("min_score must be >= 0");
    if (c.lookahead < 1) bad("lookahead must be >= 1");
}

Bm25Index::Bm25Index(std::vector<std::vector<std::string>> docs, double k1, double b)
    : docs_(std::move(docs)), k1_(k1), b_(b)
{
    tf_.resize(docs_.size());
    double total = 0;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        for (const auto& t : docs_[d]) {
            if (tf_[d][t]++ == 0) {
                ++df_[t];
            }
        }
        total += static_cast<double>(docs_[d].size());
    }
    avgdl_ = docs_.empty() ? 0.0 : total / static_cast<double>(docs_.size());
}

double Bm25Index::idf(const std::string& term) const
{
    const auto it = df_.find(term);
    const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    const double n = static_cast<double>(docs_.size());
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

double Bm25Index::score(std::span<const std::string> query, std::size_t doc) const
{
    const auto& tf = tf_.at(doc);
    const double len_norm =
        avgdl_ > 0 ? 1.0 - b_ + b_ * static_cast<double>(docs_[doc].size()) / avgdl_ : 1.0;
    double total = 0;
    for (const auto& q : query) {
        const auto it = tf.find(q);
        if (it == tf.end()) {
            continue;
        }
        const double f = static_cast<double>(it->second);
        total += idf(q) * f * (k1_ + 1.0) / (f + k1_ * len_norm);
    }
    return total;
}

double bm25_score(std::span<const std::string> query, std::size_t sentence_index,
                  const std::vector<std::vector<std::string>>& corpus, double k1, double b)
{
    return Bm25Index(corpus, k1, b).score(query, sentence_index);
}

namespace {

std::vector<std::vector<std::string>> sentence_tokens(const ScriptPackage& package)
{
    std::vector<std::vector<std::string>> out;
    for (const auto& slide : package.slides) {
        for (const auto& s : slide.sentences) {
            out.push_back(s.tokens);
        }
    }
    return out;
}

std::size_t sum_sizes(const std::vector<std::vector<std::string>>& v)
{
    std::size_t n = 0;
    for (const auto& x : v) {
        n += x.size();
    }
    return n;
}

std::optional<std::size_t> find_in(const std::vector<std::string>& tokens, std::size_t from,
                                   std::size_t span, const std::string& t)
{
    const auto end = std::min(tokens.size(), from + span);
    for (std::size_t i = from; i < end; ++i) {
        if (tokens[i] == t) {
            return i;
        }
    }
    return std::nullopt;
}

class Tracker {
public:
    Tracker(AlignmentState& s, const ScriptIndex& script, const AlignmentConfig& c)
        : s_(s), script_(script), c_(c)
    {}

    // Follows the current sentence token by token. Returns false when the
    // token fits neither the current sentence nor the start of the next one.
    bool follow(const std::string& t)
    {
        const auto& cur = script_.tokens(s_.sentence_index);
        if (auto p = find_in(cur, s_.token_offset, c_.lookahead, t)) {
            attribute(s_.sentence_index);
            s_.token_offset = *p + 1;
            consume();
            return true;
        }
        const auto next = s_.sentence_index + 1;
        if (next < script_.size() && s_.token_offset + c_.end_slack >= cur.size()) {
            if (auto p = find_in(script_.tokens(next), 0, c_.lookahead, t)) {
                s_.sentence_index = next;
                s_.token_offset = *p + 1;
                attribute(next);
                consume();
                return true;
            }
        }
        return false;
    }

    // Forward jump by BM25 over the candidate window. Query tokens already
    // credited to earlier sentences do not vote.
    bool jump()
    {
        const auto cur = s_.sentence_index;
        std::vector<std::string> query;
        for (const auto& h : s_.query) {
            if (h.sentence == kUnattributed || h.sentence >= cur) {
                query.push_back(h.token);
            }
        }
        const auto lo = cur - std::min(cur, c_.window_behind);
        const auto hi = std::min(script_.size() - 1, cur + c_.window_ahead);
        const double base = script_.bm25().score(query, cur);
        std::size_t best = cur;
        double best_score = base;
        for (std::size_t i = lo; i <= hi; ++i) {
            if (i <= cur) {
                continue;  // scored for the window, but never a move target
            }
            const double sc = script_.bm25().score(query, i);
            if (sc > best_score && evidence(i) >= c_.min_evidence) {
                best = i;
                best_score = sc;
            }
        }
        if (best == cur || best_score < base + c_.advance_margin || best_score < c_.min_score) {
            return false;
        }
        s_.sentence_index = best;
        s_.token_offset = suffix_offset(best);
        s_.confidence = best_score;
        consume();
        return true;
    }

    // Score of the sentence that took the latest match.
    double matched_score() const
    {
        std::vector<std::string> query;
        for (const auto& h : s_.query) {
            if (h.sentence == kUnattributed || h.sentence >= last_matched_) {
                query.push_back(h.token);
            }
        }
        return script_.bm25().score(query, last_matched_);
    }

private:
    void attribute(std::size_t sentence)
    {
        s_.query.back().sentence = sentence;
        last_matched_ = sentence;
    }

    void consume()
    {
        while (s_.token_offset >= script_.tokens(s_.sentence_index).size() &&
               s_.sentence_index + 1 < script_.size()) {
            ++s_.sentence_index;
            s_.token_offset = 0;
        }
    }

    // Distinct query tokens the follower could not place that occur in `doc`.
    std::size_t evidence(std::size_t doc) const
    {
        const auto& tokens = script_.tokens(doc);
        std::set<std::string> hits;
        for (const auto& h : s_.query) {
            if (h.sentence == kUnattributed &&
                std::find(tokens.begin(), tokens.end(), h.token) != tokens.end()) {
                hits.insert(h.token);
            }
        }
        return hits.size();
    }

    // End of the longest query suffix that equals a run ending some prefix
    // of the sentence; the matched query tokens are credited to it.
    std::size_t suffix_offset(std::size_t doc)
    {
        const auto& tokens = script_.tokens(doc);
        const auto& q = s_.query;
        std::size_t best_len = 0;
        std::size_t best_end = 0;
        for (std::size_t end = 1; end <= tokens.size(); ++end) {
            std::size_t len = 0;
            while (len < end && len < q.size() &&
                   tokens[end - 1 - len] == q[q.size() - 1 - len].token) {
                ++len;
            }
            if (len > best_len) {
                best_len = len;
                best_end = end;
            }
        }
        for (std::size_t k = 0; k < best_len; ++k) {
            s_.query[q.size() - 1 - k].sentence = doc;
        }
        return best_end;
    }

    AlignmentState& s_;
    const ScriptIndex& script_;
    const AlignmentConfig& c_;
    std::size_t last_matched_ = 0;
};

}  // namespace

ScriptIndex::ScriptIndex(const ScriptPackage& package, const AlignmentConfig& config)
    : sentences_(sentence_tokens(package)),
      total_tokens_(sum_sizes(sentences_)),
      bm25_(sentences_, config.k1, config.b)
{
    if (sentences_.empty()) {
        throw Error(ErrorCode::InvalidPackage, "package has no sentences");
    }
}

AlignmentState ingest(const AlignmentState& state, const TranscriptEvent& event,
                      const ScriptIndex& script, const AlignmentConfig& config)
{
    AlignmentState s = state;
    Tracker tracker(s, script, config);
    const auto tokens = tokenize(event.text);
    bool matched = false;
    bool fresh_evidence = false;
    for (const auto& t : tokens) {
        s.query.push_back({t, kUnattributed});
        while (s.query.size() > config.query_len) {
            s.query.pop_front();
        }
        if (tracker.follow(t)) {
            matched = true;
        } else if (script.bm25().contains(t)) {
            fresh_evidence = true;
        }
    }
    if (fresh_evidence && tracker.jump()) {
        matched = true;
    } else if (matched) {
        s.confidence = tracker.matched_score();
    }

    s.tokens_heard += tokens.size();
    if (!tokens.empty()) {
        s.heard_log.push_back({event.t_ms, tokens.size()});
    }
    while (!s.heard_log.empty() && s.heard_log.front().t_ms <= event.t_ms - kHeardLogSpanMs) {
        s.heard_log.pop_front();
    }
    s.history.push_back({event.t_ms, s.sentence_index});
    while (s.history.size() > kHistoryLimit) {
        s.history.pop_front();
    }
    return s;
}

AlignmentState manual_scroll(const AlignmentState& state, long delta_sentences,
                             const ScriptIndex& script)
{
    AlignmentState s = state;
    const long last = static_cast<long>(script.size()) - 1;
    const long target = std::clamp(static_cast<long>(s.sentence_index) + delta_sentences, 0L, last);
    s.sentence_index = static_cast<std::size_t>(target);
    s.token_offset = 0;
    s.confidence = 0.0;
    s.query.clear();
    return s;
}

}  // namespace podium
