#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace podium {

/// Lowercases ASCII letters, drops ASCII punctuation and splits on
/// whitespace. Bytes >= 0x80 are kept so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

/// Token form of a single whitespace-free word; empty when the word is
/// pure punctuation.
std::string normalize_word(std::string_view word);

}  // namespace podium
