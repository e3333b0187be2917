#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "podium/markup.hpp"
#include "podium/prompt.hpp"

namespace podium {

extern const std::string_view kStyleConstraints;

struct PolishRequest {
    std::vector<std::string> manuscript;  // plain text, one entry per slide
    std::set<Factor> selected_factors;
    double time_limit_s = 0.0;
    std::string style_constraints{kStyleConstraints};
};

struct PolishResult {
    std::vector<std::string> polished;  // markup, one entry per slide
    std::string model_id;
};

struct CompletionRequest {
    std::string instruction;
    std::string manuscript_text;
    std::set<Factor> factors;
};

class PolishAdapter {
public:
    virtual ~PolishAdapter() = default;
    /// Returns the model's raw text. Throws Error{AdapterUnavailable}.
    virtual std::string complete(const CompletionRequest& request) = 0;
    virtual std::string model_id() const = 0;
};

/// Echoes the manuscript; with Volume selected every sentence gets a
/// leading "[volume - normal]".
class MockAdapter final : public PolishAdapter {
public:
    std::string complete(const CompletionRequest& request) override;
    std::string model_id() const override { return "mock"; }
};

struct HttpAdapterConfig {
    std::string base_url;  // e.g. https://api.example.com/v1
    std::string model;
    std::string api_key;
    int timeout_s = 60;
};

/// Chat-completion endpoint client. POSTs {base_url}/chat/completions and
/// returns choices[0].message.content. Retries once.
class HttpAdapter final : public PolishAdapter {
public:
    explicit HttpAdapter(HttpAdapterConfig config);
    /// Reads POLISH_BASE_URL, POLISH_MODEL, POLISH_API_KEY. Throws
    /// Error{AdapterUnavailable} when base URL or model is unset.
    static HttpAdapter from_env();

    std::string complete(const CompletionRequest& request) override;
    std::string model_id() const override { return config_.model; }

private:
    HttpAdapterConfig config_;
};

void validate_request(const PolishRequest& req);

std::string build_prompt(const PolishRequest& req);

/// One adapter call per slide. Throws Error{AdapterUnavailable} or
/// Error{UnparsableResponse} whose detail holds the raw response.
PolishResult polish(const PolishRequest& req, PolishAdapter& adapter);

enum class ChangeKind { Kept, Changed, Inserted, Deleted };

std::string_view change_kind_name(ChangeKind kind);

struct SentenceChange {
    int slide = 0;
    ChangeKind kind = ChangeKind::Kept;
    std::size_t before = 0;  // sentence index within the slide, manuscript side
    std::size_t after = 0;   // polished side
    std::string before_text;
    std::string after_text;
};

/// Sentence-level diff per slide, compared on text only (markers ignored).
/// Unmatched deletions and insertions between two kept sentences pair up as
/// Changed; leftovers stay Deleted/Inserted. Indices for a missing side are
/// the position where the sentence would have been.
std::vector<SentenceChange> diff_scripts(const std::vector<std::vector<Sentence>>& manuscript,
                                         const std::vector<std::vector<Sentence>>& polished);

/// word_count / wpm * 60, unrounded.
double estimate_duration_exact(std::size_t word_count, double target_wpm);
/// Rounded to the nearest second, halves up.
long estimate_duration(std::size_t word_count, double target_wpm);

}  // namespace podium
