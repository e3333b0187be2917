#include "podium/markup.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "podium/error.hpp"
#include "podium/syllables.hpp"
#include "podium/tokenize.hpp"

namespace podium {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '?' || c == '!'; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void malformed(const std::string& what)
{
    throw Error(ErrorCode::MalformedMarker, what);
}

DeliveryPrompt parse_marker(std::string_view body)
{
    const auto dash = body.rfind('-');
    if (dash == std::string_view::npos) {
        malformed("prompt marker '[" + std::string(body) + "]' needs 'factor - modulation'");
    }
    const auto factor_text = trim(body.substr(0, dash));
    const auto modulation_text = trim(body.substr(dash + 1));
    if (factor_text.empty() || modulation_text.empty()) {
        malformed("prompt marker '[" + std::string(body) + "]' has an empty side");
    }
    const auto factor = factor_from_alias(factor_text);
    const auto modulation = modulation_from_name(modulation_text);
    if (!factor || !modulation || !is_known_prompt(*factor, *modulation)) {
        throw Error(ErrorCode::UnknownPromptPair,
                    "unknown delivery prompt '[" + std::string(body) + "]'");
    }
    return {*factor, *modulation};
}

std::string strip_hyphens(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c != '-') {
            out.push_back(c);
        }
    }
    return out;
}

struct RawWord {
    std::string text;
    bool keyword = false;
    std::optional<std::string> syllable_request;  // brace content, hyphens kept
};

class Parser {
public:
    explicit Parser(std::string_view input) : in_(input) {}

    std::vector<Sentence> run()
    {
        while (pos_ < in_.size()) {
            const char c = in_[pos_];
            if (is_space(c)) {
                ++pos_;
            } else if (c == '[') {
                read_marker();
            } else if (c == ']') {
                malformed("']' without matching '['");
            } else {
                read_word();
            }
        }
        if (bold_) {
            malformed("unclosed '**'");
        }
        if (!words_.empty()) {
            malformed("unterminated sentence '" + joined_text() + "'");
        }
        if (!prompts_.empty()) {
            malformed("prompt marker without a sentence");
        }
        if (out_.empty()) {
            throw Error(ErrorCode::EmptyScript, "script contains no sentences");
        }
        return std::move(out_);
    }

private:
    void read_marker()
    {
        if (!words_.empty()) {
            malformed("prompt markers must lead the sentence, found one after '" +
                      joined_text() + "'");
        }
        const auto close = in_.find_first_of("[]", pos_ + 1);
        if (close == std::string_view::npos || in_[close] != ']') {
            malformed("unbalanced '[' in prompt marker");
        }
        prompts_.push_back(parse_marker(in_.substr(pos_ + 1, close - pos_ - 1)));
        pos_ = close + 1;
    }

    void read_word()
    {
        RawWord word;
        bool in_brace = false;
        std::string brace;
        while (pos_ < in_.size() && !is_space(in_[pos_])) {
            const char c = in_[pos_];
            if (c == '*' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '*' && !in_brace) {
                bold_ = !bold_;
                pos_ += 2;
                continue;
            }
            if (c == '[' || c == ']') {
                malformed("prompt markers must stand alone before the sentence text");
            }
            if (c == '{') {
                if (in_brace || word.syllable_request) {
                    malformed("only one '{...}' group is allowed per word");
                }
                in_brace = true;
                ++pos_;
                continue;
            }
            if (c == '}') {
                if (!in_brace) {
                    malformed("'}' without matching '{'");
                }
                in_brace = false;
                if (brace.empty()) {
                    malformed("empty '{}' syllabification mark");
                }
                word.syllable_request = std::move(brace);
                brace.clear();
                ++pos_;
                continue;
            }
            if (in_brace) {
                brace.push_back(c);
                if (c != '-') {
                    word.text.push_back(c);
                    word.keyword = word.keyword || bold_;
                }
            } else {
                word.text.push_back(c);
                word.keyword = word.keyword || bold_;
            }
            ++pos_;
        }
        if (in_brace) {
            malformed("unbalanced '{' in word '" + word.text + "'");
        }
        if (word.text.empty()) {
            return;  // a lone "**"
        }
        const bool ends_sentence = is_terminal(word.text.back());
        words_.push_back(std::move(word));
        if (ends_sentence) {
            finish_sentence();
        }
    }

    std::string joined_text() const
    {
        std::string text;
        for (const auto& w : words_) {
            if (!text.empty()) {
                text.push_back(' ');
            }
            text += w.text;
        }
        return text;
    }

    void finish_sentence()
    {
        Sentence s;
        s.text = joined_text();
        s.prompts = std::move(prompts_);
        for (auto& w : words_) {
            auto token = normalize_word(w.text);
            if (token.empty()) {
                if (w.keyword || w.syllable_request) {
                    malformed("markup on a word without letters or digits: '" + w.text + "'");
                }
                continue;
            }
            const auto index = s.tokens.size();
            if (w.keyword) {
                s.keywords.insert(index);
            }
            if (w.syllable_request) {
                if (normalize_word(strip_hyphens(*w.syllable_request)) != token) {
                    malformed("'{...}' must enclose all letters of '" + w.text + "'");
                }
                s.syllabified.emplace(index, resolve_syllables(*w.syllable_request));
            }
            s.tokens.push_back(std::move(token));
        }
        out_.push_back(std::move(s));
        words_.clear();
        prompts_.clear();
    }

    static std::string resolve_syllables(const std::string& request)
    {
        if (request.find('-') == std::string::npos) {
            return segment_syllables(request);
        }
        // Explicit split: every chunk must be a non-empty alphabetic run.
        std::size_t start = 0;
        while (start <= request.size()) {
            auto end = request.find('-', start);
            if (end == std::string::npos) {
                end = request.size();
            }
            const auto chunk = std::string_view(request).substr(start, end - start);
            if (chunk.empty()) {
                malformed("empty chunk in syllabification '{" + request + "}'");
            }
            if (!std::all_of(chunk.begin(), chunk.end(), [](char ch) {
                    return std::isalpha(static_cast<unsigned char>(ch)) != 0;
                })) {
                throw Error(ErrorCode::NonAlphabetic,
                            "syllabification '{" + request + "}' must be alphabetic");
            }
            start = end + 1;
        }
        return request;
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    bool bold_ = false;
    std::vector<DeliveryPrompt> prompts_;
    std::vector<RawWord> words_;
    std::vector<Sentence> out_;
};

std::vector<std::string_view> split_words(std::string_view text)
{
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto end = std::min(text.find(' ', i), text.size());
        words.push_back(text.substr(i, end - i));
        i = end + 1;
    }
    return words;
}

}  // namespace

std::vector<Sentence> parse_annotated(std::string_view markup)
{
    return Parser(markup).run();
}

std::string prompt_marker(const DeliveryPrompt& prompt)
{
    std::string out = "[";
    out += factor_markup_name(prompt.factor);
    out += " - ";
    for (char c : modulation_name(prompt.modulation)) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    out += "]";
    return out;
}

std::string serialize_annotated(const std::vector<Sentence>& sentences)
{
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        for (const auto& p : s.prompts) {
            out += prompt_marker(p);
            out.push_back(' ');
        }
        std::size_t token = 0;
        bool first = true;
        for (auto word : split_words(s.text)) {
            if (!first) {
                out.push_back(' ');
            }
            first = false;
            if (normalize_word(word).empty()) {
                out += word;
                continue;
            }
            std::string rendered(word);
            if (auto it = s.syllabified.find(token); it != s.syllabified.end()) {
                const auto core = strip_hyphens(it->second);
                const auto at = rendered.find(core);
                if (at != std::string::npos) {
                    rendered.replace(at, core.size(), "{" + it->second + "}");
                }
            }
            if (s.keywords.contains(token)) {
                rendered = "**" + rendered + "**";
            }
            out += rendered;
            ++token;
        }
    }
    return out;
}

void validate_sentence(const Sentence& s)
{
    auto invalid = [&](const std::string& why) {
        throw Error(ErrorCode::InvalidPackage, "sentence '" + s.text + "': " + why);
    };
    if (s.text.empty() || s.text != std::string(trim(s.text)) ||
        s.text.find("  ") != std::string::npos) {
        invalid("text must be non-empty with single-space separators");
    }
    if (s.text.find_first_of("[]{}\t\n\r") != std::string::npos ||
        s.text.find("**") != std::string::npos) {
        invalid("text contains reserved markup characters");
    }
    const auto words = split_words(s.text);
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        if (is_terminal(words[i].back())) {
            invalid("terminal punctuation inside the sentence");
        }
    }
    if (!is_terminal(words.back().back())) {
        invalid("sentence must end with '.', '?' or '!'");
    }
    if (s.tokens != tokenize(s.text)) {
        invalid("tokens do not match the text");
    }
    for (const auto& p : s.prompts) {
        if (!is_known_prompt(p.factor, p.modulation)) {
            throw Error(ErrorCode::UnknownPromptPair, "sentence '" + s.text +
                                                          "': unknown prompt " +
                                                          prompt_marker(p));
        }
    }
    for (auto k : s.keywords) {
        if (k >= s.tokens.size()) {
            invalid("keyword index out of range");
        }
    }
    std::vector<std::string_view> word_of_token;
    for (auto w : words) {
        if (!normalize_word(w).empty()) {
            word_of_token.push_back(w);
        }
    }
    for (const auto& [index, syllables] : s.syllabified) {
        if (index >= s.tokens.size()) {
            invalid("syllabification index out of range");
        }
        if (word_of_token[index].find(strip_hyphens(syllables)) == std::string_view::npos) {
            invalid("syllabification '" + syllables + "' is not a contiguous part of its word");
        }
        if (syllables.find('-') == std::string::npos &&
            segment_syllables(syllables) != syllables) {
            invalid("unsplit syllabification '" + syllables + "' disagrees with the rule set");
        }
        if (normalize_word(strip_hyphens(syllables)) != s.tokens[index] ||
            syllables.empty() || syllables.front() == '-' || syllables.back() == '-' ||
            syllables.find("--") != std::string::npos ||
            !std::all_of(syllables.begin(), syllables.end(), [](char c) {
                return c == '-' || std::isalpha(static_cast<unsigned char>(c)) != 0;
            })) {
            invalid("syllabification '" + syllables + "' does not match its token");
        }
    }
}

}  // namespace podium
