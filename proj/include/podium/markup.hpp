#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "podium/prompt.hpp"

namespace podium {

/// One sentence of the annotated script.
///
/// `text` is the sentence with markup removed and whitespace collapsed to
/// single spaces; `tokens` is always tokenize(text). Every whitespace word
/// of `text` yields at most one token, so keyword and syllabification marks
/// are addressed by token index.
struct Sentence {
    std::string text;
    std::vector<std::string> tokens;
    std::vector<DeliveryPrompt> prompts;
    std::set<std::size_t> keywords;
    std::map<std::size_t, std::string> syllabified;

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Parses the inline delivery-prompt markup:
///
///   [volume - loud] [gesture - point] **Welcome** to {Subsequently} here.
///
/// - `[factor - modulation]` markers may only lead a sentence;
/// - `**...**` bolds the enclosed words (keywords);
/// - `{word}` asks for syllabification of one word; `{Sub-se-quent-ly}`
///   supplies the split explicitly;
/// - a sentence ends at `.`, `?` or `!` followed by whitespace or the end.
///
/// Errors: MalformedMarker (unbalanced or misplaced markup, unterminated
/// final sentence), UnknownPromptPair, EmptyScript, NonAlphabetic.
std::vector<Sentence> parse_annotated(std::string_view markup);

/// Inverse of parse_annotated: parse_annotated(serialize_annotated(s)) == s
/// for every list of valid sentences. Sentences are separated by one space.
std::string serialize_annotated(const std::vector<Sentence>& sentences);

/// Markup for a single prompt, e.g. "[gesture - point]".
std::string prompt_marker(const DeliveryPrompt& prompt);

/// Throws Error if the sentence violates its invariants (token list
/// mismatch, out-of-range indices, unknown prompt pairs, syllabification
/// that does not rejoin to its word).
void validate_sentence(const Sentence& sentence);

}  // namespace podium
