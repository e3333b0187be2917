#include "podium/tokenize.hpp"

#include <cctype>

namespace podium {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string normalize_word(std::string_view word)
{
    std::string out;
    out.reserve(word.size());
    for (char c : word) {
        auto u = static_cast<unsigned char>(c);
        if (u >= 0x80) {
            out.push_back(c);
        } else if (std::isalnum(u)) {
            out.push_back(static_cast<char>(std::tolower(u)));
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) {
            ++i;
        }
        if (i > start) {
            auto tok = normalize_word(text.substr(start, i - start));
            if (!tok.empty()) {
                tokens.push_back(std::move(tok));
            }
        }
    }
    return tokens;
}

}  // namespace podium
