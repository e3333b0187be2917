#include "podium/polishing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "podium/error.hpp"

namespace podium {

const std::string_view kStyleConstraints =
    "Preserve the meaning of every sentence. Improve clarity and flow for spoken delivery. "
    "Do not expand the text beyond what the time budget allows. "
    "Return only the revised text, with no commentary.";

namespace {

bool blank(const std::string& s)
{
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string format_budget(double seconds)
{
    char buf[96];
    const double minutes = seconds / 60.0;
    const char* unit = minutes == 1.0 ? "minute" : "minutes";
    std::snprintf(buf, sizeof buf, "%g %s (%g seconds)", std::round(minutes * 10) / 10, unit,
                  seconds);
    return buf;
}

std::vector<std::string> sentence_texts(const std::vector<Sentence>& slide)
{
    std::vector<std::string> out;
    out.reserve(slide.size());
    for (const auto& s : slide) {
        out.push_back(s.text);
    }
    return out;
}

void diff_slide(int slide, const std::vector<Sentence>& a, const std::vector<Sentence>& b,
                std::vector<SentenceChange>& out)
{
    const auto x = sentence_texts(a);
    const auto y = sentence_texts(b);
    const auto n = x.size();
    const auto m = y.size();
    // lcs[i][j] = LCS length of x[i..] and y[j..]
    std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            lcs[i][j] = x[i] == y[j] ? lcs[i + 1][j + 1] + 1
                                     : std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }

    std::vector<std::size_t> dels, ins;
    std::size_t i = 0;
    std::size_t j = 0;
    auto flush = [&] {
        const auto paired = std::min(dels.size(), ins.size());
        for (std::size_t k = 0; k < paired; ++k) {
            out.push_back({slide, ChangeKind::Changed, dels[k], ins[k], x[dels[k]], y[ins[k]]});
        }
        for (std::size_t k = paired; k < dels.size(); ++k) {
            out.push_back({slide, ChangeKind::Deleted, dels[k], j, x[dels[k]], ""});
        }
        for (std::size_t k = paired; k < ins.size(); ++k) {
            out.push_back({slide, ChangeKind::Inserted, i, ins[k], "", y[ins[k]]});
        }
        dels.clear();
        ins.clear();
    };

    while (i < n || j < m) {
        if (i < n && j < m && x[i] == y[j]) {
            flush();
            out.push_back({slide, ChangeKind::Kept, i, j, x[i], y[j]});
            ++i;
            ++j;
        } else if (j == m || (i < n && lcs[i + 1][j] >= lcs[i][j + 1])) {
            dels.push_back(i++);
        } else {
            ins.push_back(j++);
        }
    }
    flush();
}

}  // namespace

std::string MockAdapter::complete(const CompletionRequest& request)
{
    if (!request.factors.contains(Factor::Volume)) {
        return request.manuscript_text;
    }
    auto sentences = parse_annotated(request.manuscript_text);
    const DeliveryPrompt normal{Factor::Volume, Modulation::Normal};
    for (auto& s : sentences) {
        s.prompts.insert(s.prompts.begin(), normal);
    }
    return serialize_annotated(sentences);
}

HttpAdapter::HttpAdapter(HttpAdapterConfig config) : config_(std::move(config)) {}

HttpAdapter HttpAdapter::from_env()
{
    auto env = [](const char* name) {
        const char* v = std::getenv(name);
        return std::string(v ? v : "");
    };
    HttpAdapterConfig config{env("POLISH_BASE_URL"), env("POLISH_MODEL"), env("POLISH_API_KEY")};
    if (config.base_url.empty() || config.model.empty()) {
        throw Error(ErrorCode::AdapterUnavailable,
                    "set POLISH_BASE_URL and POLISH_MODEL, or use the mock adapter");
    }
    return HttpAdapter(std::move(config));
}

std::string HttpAdapter::complete(const CompletionRequest& request)
{
    const auto scheme_end = config_.base_url.find("://");
    const auto path_start = config_.base_url.find('/', scheme_end == std::string::npos
                                                           ? 0
                                                           : scheme_end + 3);
    const auto origin = config_.base_url.substr(0, path_start);
    auto path = path_start == std::string::npos ? std::string{}
                                                : config_.base_url.substr(path_start);
    while (!path.empty() && path.back() == '/') {
        path.pop_back();
    }
    path += "/chat/completions";

    const nlohmann::json body{
        {"model", config_.model},
        {"messages",
         {{{"role", "system"}, {"content", request.instruction}},
          {{"role", "user"}, {"content", request.manuscript_text}}}}};
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        httplib::Client client(origin);
        client.set_connection_timeout(config_.timeout_s);
        client.set_read_timeout(config_.timeout_s);
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            const auto reply = nlohmann::json::parse(res->body);
            return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::UnparsableResponse, "completion endpoint returned no content",
                        res->body);
        }
    }
    throw Error(ErrorCode::AdapterUnavailable,
                "completion endpoint " + config_.base_url + " failed: " + last_error);
}

void validate_request(const PolishRequest& req)
{
    if (!(req.time_limit_s > 0.0) || !std::isfinite(req.time_limit_s)) {
        throw Error(ErrorCode::InvalidRequest, "time limit must be positive");
    }
    if (req.manuscript.empty()) {
        throw Error(ErrorCode::InvalidRequest, "manuscript is empty");
    }
    for (std::size_t i = 0; i < req.manuscript.size(); ++i) {
        if (blank(req.manuscript[i])) {
            throw Error(ErrorCode::InvalidRequest,
                        "manuscript part " + std::to_string(i + 1) + " is empty");
        }
    }
}

std::string build_prompt(const PolishRequest& req)
{
    validate_request(req);
    std::string out;
    out += "You are editing the script of a spoken talk. ";
    out += "The talk has " + std::to_string(req.manuscript.size()) +
           (req.manuscript.size() == 1 ? " part" : " parts") +
           "; you will receive one part at a time. ";
    out += "The whole talk must fit in " + format_budget(req.time_limit_s) + ".\n\n";
    out += req.style_constraints;
    out += "\n\n";

    if (req.selected_factors.empty()) {
        out += "Do not add delivery markers or any other markup.\n";
        return out;
    }

    out += "The speaker wants delivery cues for these aspects: ";
    bool first = true;
    for (auto f : req.selected_factors) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += factor_display_name(f);
    }
    out += ". Cues are optional: add one only where it clearly helps, never to every sentence.\n";
    out += "Write a cue as a marker at the very start of a sentence. Allowed markers:\n";
    for (const auto& row : emoji_lookup_table()) {
        if (req.selected_factors.contains(row.factor)) {
            out += "  " + prompt_marker({row.factor, row.modulation}) + "\n";
        }
    }
    out += "Markers never appear inside a sentence. Every sentence ends with '.', '?' or '!'. ";
    out += "You may wrap key words in **double asterisks**. ";
    out += "Use no other markup.\n";
    return out;
}

PolishResult polish(const PolishRequest& req, PolishAdapter& adapter)
{
    CompletionRequest call{build_prompt(req), {}, req.selected_factors};
    PolishResult result;
    result.model_id = adapter.model_id();
    for (std::size_t i = 0; i < req.manuscript.size(); ++i) {
        call.manuscript_text = req.manuscript[i];
        auto raw = adapter.complete(call);
        try {
            parse_annotated(raw);
        } catch (const Error& e) {
            throw Error(ErrorCode::UnparsableResponse,
                        "response for part " + std::to_string(i + 1) + " does not parse: " +
                            e.what(),
                        raw);
        }
        result.polished.push_back(std::move(raw));
    }
    return result;
}

std::string_view change_kind_name(ChangeKind kind)
{
    switch (kind) {
    case ChangeKind::Kept: return "kept";
    case ChangeKind::Changed: return "changed";
    case ChangeKind::Inserted: return "inserted";
    case ChangeKind::Deleted: return "deleted";
    }
    return "?";
}

std::vector<SentenceChange> diff_scripts(const std::vector<std::vector<Sentence>>& manuscript,
                                         const std::vector<std::vector<Sentence>>& polished)
{
    std::vector<SentenceChange> out;
    const auto slides = std::max(manuscript.size(), polished.size());
    const std::vector<Sentence> none;
    for (std::size_t k = 0; k < slides; ++k) {
        diff_slide(static_cast<int>(k), k < manuscript.size() ? manuscript[k] : none,
                   k < polished.size() ? polished[k] : none, out);
    }
    return out;
}

double estimate_duration_exact(std::size_t word_count, double target_wpm)
{
    return static_cast<double>(word_count) * 60.0 / target_wpm;
}

long estimate_duration(std::size_t word_count, double target_wpm)
{
    return static_cast<long>(std::floor(estimate_duration_exact(word_count, target_wpm) + 0.5));
}

}  // namespace podium
