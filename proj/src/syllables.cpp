#include "podium/syllables.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <vector>

#include "podium/error.hpp"

namespace podium {

namespace {

using namespace std::string_view_literals;

constexpr std::array kConsonantDigraphs{"ch"sv, "sh"sv, "th"sv, "ph"sv, "wh"sv, "gh"sv, "ck"sv};
constexpr std::array kRBlends{"br"sv, "cr"sv, "dr"sv, "fr"sv, "gr"sv, "pr"sv, "tr"sv, "wr"sv};
constexpr std::array kLBlends{"bl"sv, "cl"sv, "fl"sv, "gl"sv, "pl"sv, "sl"sv};
constexpr std::array kTripleOnsets{"chr"sv, "phr"sv, "shr"sv, "thr"sv, "str"sv, "spr"sv, "scr"sv};
constexpr std::array kSOnsets{"st"sv, "sp"sv, "sk"sv, "sc"sv};

// Suffixes kept as their own chunk. Consonant-initial ones start a chunk;
// vowel-initial ones keep the preceding consonant on the left.
constexpr std::array kChunkSuffixes{
    "tional"sv, "sional"sv, "ble"sv,  "cle"sv,  "dle"sv,  "fle"sv,  "gle"sv,  "kle"sv,
    "ple"sv,    "tle"sv,    "zle"sv,  "tion"sv, "sion"sv, "tial"sv, "cial"sv, "cian"sv,
    "ture"sv,   "sure"sv,   "ment"sv, "ness"sv, "less"sv, "ful"sv,  "ly"sv,   "ty"sv,
    "able"sv,   "ible"sv,   "ing"sv,  "ism"sv,  "ist"sv,
};

// Stress falls on the syllable right before these.
constexpr std::array kStressAttractors{"tion"sv, "sion"sv, "cian"sv, "ical"sv,
                                       "ic"sv,   "ity"sv,  "ety"sv,  "ial"sv,
                                       "ian"sv,  "ious"sv, "eous"sv, "ify"sv};
constexpr std::array kStressBeforeLinking{"logy"sv, "graphy"sv, "nomy"sv, "metry"sv};
constexpr std::array kNeutralSuffixes{"ment"sv, "ness"sv, "ful"sv, "less"sv, "ly"sv,
                                      "ing"sv,  "able"sv, "ably"sv, "ism"sv, "ist"sv};
constexpr std::array kUnstressedPrefixes{"de"sv, "re"sv, "pre"sv, "pro"sv, "be"sv, "to"sv};
constexpr std::array kSilentEBeforeSuffix{"ment"sv, "ness"sv, "less"sv, "ful"sv, "ly"sv};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s)
{
    return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_plain_vowel(char c)
{
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

struct VowelGroup {
    std::size_t first;
    std::size_t last;  // inclusive
};

class Syllabifier {
public:
    explicit Syllabifier(std::string lower) : w_(std::move(lower)), n_(w_.size())
    {
        mark_vowels();
        build_groups();
    }

    std::vector<std::size_t> cut_points() const
    {
        if (groups_.size() <= 1) {
            return {};
        }
        std::set<std::size_t> stressed;
        if (const auto primary = primary_stress()) {
            stressed.insert(*primary);
            for (std::size_t k = 1; k <= 4 && 2 * k <= *primary; ++k) {
                stressed.insert(*primary - 2 * k);
            }
        }
        if (has_unstressed_prefix()) {
            stressed.erase(0);
        }

        std::optional<std::size_t> suffix_cut;
        std::string_view suffix;
        for (auto s : kChunkSuffixes) {
            if (ends_with(s) && n_ - s.size() >= 2 && s.size() > suffix.size()) {
                suffix = s;
            }
        }
        if (!suffix.empty()) {
            suffix_cut = n_ - suffix.size();
        }
        const bool whole_suffix = suffix == "able" || suffix == "ible";
        const bool linking_al = suffix == "tional" || suffix == "sional";

        std::vector<std::size_t> cuts;
        for (std::size_t k = 0; k + 1 < groups_.size(); ++k) {
            const auto gap_begin = groups_[k].last + 1;
            const auto gap_end = groups_[k + 1].first;
            if (suffix_cut && whole_suffix && gap_begin > *suffix_cut) {
                continue;
            }
            if (suffix_cut && gap_begin <= *suffix_cut && *suffix_cut <= gap_end) {
                cuts.push_back(*suffix_cut);
                continue;
            }
            if (suffix_cut && linking_al && gap_begin > *suffix_cut) {
                cuts.push_back(*suffix_cut + 4);
                continue;
            }
            if (gap_begin == gap_end) {
                cuts.push_back(gap_begin);
                continue;
            }
            const auto units = consonant_units(gap_begin, gap_end);
            if (units.size() == 1) {
                cuts.push_back(close_left(k, units.front(), stressed) ? gap_end : gap_begin);
                continue;
            }
            cuts.push_back(gap_begin + onset_split(units));
        }

        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::erase_if(cuts, [&](std::size_t c) { return c < 2 || n_ - c < 2; });
        return cuts;
    }

private:
    bool ends_with(std::string_view s) const
    {
        return w_.size() >= s.size() && std::string_view(w_).substr(n_ - s.size()) == s;
    }

    bool letter_is_vowel(std::size_t i) const
    {
        const char c = w_[i];
        if (is_plain_vowel(c)) {
            if (c == 'u' && i > 0 && w_[i - 1] == 'q') {
                return false;
            }
            if (c == 'u' && i > 0 && w_[i - 1] == 'g' && i + 1 < n_ && is_plain_vowel(w_[i + 1])) {
                return false;
            }
            return true;
        }
        if (c == 'y') {
            return i != 0 && !(i + 1 < n_ && is_plain_vowel(w_[i + 1]));
        }
        return false;
    }

    void mark_vowels()
    {
        vowel_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            vowel_[i] = letter_is_vowel(i);
        }
        // Silent final e, except the syllabic "-Cle".
        if (n_ >= 3 && w_[n_ - 1] == 'e' && !vowel_[n_ - 2]) {
            const bool syllabic_le =
                w_[n_ - 2] == 'l' && n_ >= 4 && !vowel_[n_ - 3] && w_[n_ - 3] != 'l';
            if (!syllabic_le) {
                vowel_[n_ - 1] = false;
            }
        }
        if (n_ >= 4 && ends_with("ed") && w_[n_ - 3] != 't' && w_[n_ - 3] != 'd' &&
            !vowel_[n_ - 3]) {
            vowel_[n_ - 2] = false;
        }
        if (n_ >= 4 && ends_with("es") && w_[n_ - 3] != 's' && w_[n_ - 3] != 'x' &&
            w_[n_ - 3] != 'z' && !ends_with("ches") && !ends_with("shes") && !vowel_[n_ - 3]) {
            vowel_[n_ - 2] = false;
        }
        // Silent e of a stem before a consonant suffix ("engage|ment").
        for (auto s : kSilentEBeforeSuffix) {
            if (!ends_with(s) || n_ < s.size() + 3) {
                continue;
            }
            const auto stem_end = n_ - s.size();
            const bool earlier_vowel =
                std::any_of(vowel_.begin(), vowel_.begin() + static_cast<long>(stem_end - 2),
                            [](bool v) { return v; });
            if (w_[stem_end - 1] == 'e' && !vowel_[stem_end - 2] && earlier_vowel) {
                vowel_[stem_end - 1] = false;
                break;
            }
        }
    }

    bool hiatus_at(std::size_t k) const
    {
        const auto pair = std::string_view(w_).substr(k, 2);
        const char before = k > 0 ? w_[k - 1] : '\0';
        if (pair == "ia") {
            return before != 't' && before != 'c' && before != 's';
        }
        if (pair == "io") {
            return before != 't' && before != 'c' && before != 's' && before != 'x';
        }
        if (pair == "ie") {
            const auto next = std::string_view(w_).substr(k + 2, 2);
            return next == "nt" || next == "nc";
        }
        return pair == "iu" || pair == "ua";
    }

    void build_groups()
    {
        std::size_t i = 0;
        while (i < n_) {
            if (!vowel_[i]) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < n_ && vowel_[j + 1]) {
                ++j;
            }
            std::size_t start = i;
            for (std::size_t k = i; k < j; ++k) {
                if (hiatus_at(k)) {
                    groups_.push_back({start, k});
                    start = k + 1;
                }
            }
            groups_.push_back({start, j});
            i = j + 1;
        }
    }

    std::vector<std::string_view> consonant_units(std::size_t begin, std::size_t end) const
    {
        std::vector<std::string_view> units;
        const auto gap = std::string_view(w_).substr(begin, end - begin);
        std::size_t i = 0;
        while (i < gap.size()) {
            const auto two = gap.substr(i, 2);
            if (two.size() == 2 &&
                (contains(kConsonantDigraphs, two) || two == "qu" || two == "gu")) {
                units.push_back(two);
                i += 2;
            } else {
                units.push_back(gap.substr(i, 1));
                i += 1;
            }
        }
        return units;
    }

    // Index (in letters, from the start of the gap) where the onset begins.
    static std::size_t onset_split(const std::vector<std::string_view>& units)
    {
        std::size_t best = units.size() - 1;
        for (std::size_t j = units.size(); j-- > 0;) {
            std::string onset;
            for (std::size_t t = j; t < units.size(); ++t) {
                onset += units[t];
            }
            const auto len = units.size() - j;
            const bool legal = len == 1 || contains(kRBlends, onset) ||
                               contains(kTripleOnsets, onset) ||
                               (units.size() >= 3 &&
                                (contains(kSOnsets, onset) || contains(kLBlends, onset)));
            if (legal) {
                best = j;
            }
        }
        if (best == 0 && units.front() == "s") {
            best = 1;
        }
        if (units.size() >= 2 && units[0] == units[1]) {
            best = 1;
        }
        if (units.front() == "x") {
            best = std::max<std::size_t>(best, 1);
        }
        std::size_t letters = 0;
        for (std::size_t t = 0; t < best; ++t) {
            letters += units[t].size();
        }
        return letters;
    }

    // Whether a lone consonant between groups k and k+1 stays on the left.
    bool close_left(std::size_t k, std::string_view consonant,
                    const std::set<std::size_t>& stressed) const
    {
        const auto nucleus = group_text(k);
        if (consonant == "x" || consonant == "ck") {
            return true;
        }
        const bool next_in_hiatus = k + 2 < groups_.size() &&
                                    groups_[k + 2].first == groups_[k + 1].last + 1 &&
                                    (group_text(k + 1) == "i" || group_text(k + 1) == "e");
        if (stressed.contains(k) && nucleus.size() == 1 && nucleus != "u" && nucleus != "y" &&
            !next_in_hiatus) {
            return true;
        }
        return consonant == "r" && nucleus == "e" && !stressed.contains(k);
    }

    std::string_view group_text(std::size_t k) const
    {
        return std::string_view(w_).substr(groups_[k].first, groups_[k].last - groups_[k].first + 1);
    }

    bool has_unstressed_prefix() const
    {
        return std::any_of(kUnstressedPrefixes.begin(), kUnstressedPrefixes.end(), [&](auto p) {
            return w_.starts_with(p) && n_ > p.size() + 2 && !vowel_[p.size()];
        });
    }

    std::size_t first_group_from(std::size_t pos) const
    {
        for (std::size_t k = 0; k < groups_.size(); ++k) {
            if (groups_[k].first >= pos) {
                return k;
            }
        }
        return groups_.size();
    }

    // Guessed primary stress as a group index; none when an attracting
    // suffix starts the word.
    std::optional<std::size_t> primary_stress() const
    {
        const auto count = groups_.size();
        for (auto s : kStressAttractors) {
            if (ends_with(s)) {
                const auto k = first_group_from(n_ - s.size());
                if (k == 0) {
                    return std::nullopt;
                }
                return k < count ? k - 1 : count - 1;
            }
        }
        for (auto s : kStressBeforeLinking) {
            if (ends_with(s)) {
                const auto k = first_group_from(n_ - s.size());
                return k < count && k > 0 ? k - 1 : 0;
            }
        }
        auto syllables = count;
        for (auto s : kNeutralSuffixes) {
            if (ends_with(s) && n_ - s.size() >= 3) {
                syllables = first_group_from(n_ - s.size());
                break;
            }
        }
        const bool prefix = has_unstressed_prefix();
        if (syllables <= 2) {
            return prefix && syllables == 2 ? 1 : 0;
        }
        const auto antepenult = syllables - 3;
        return prefix && antepenult == 0 ? 1 : antepenult;
    }

    std::string w_;
    std::size_t n_;
    std::vector<bool> vowel_;
    std::vector<VowelGroup> groups_;
};

}  // namespace

std::string segment_syllables(std::string_view word)
{
    if (word.empty()) {
        throw Error(ErrorCode::NonAlphabetic, "cannot syllabify an empty word");
    }
    std::string lower;
    lower.reserve(word.size());
    for (char c : word) {
        const auto u = static_cast<unsigned char>(c);
        if (u >= 0x80 || !std::isalpha(u)) {
            throw Error(ErrorCode::NonAlphabetic,
                        "cannot syllabify non-alphabetic word '" + std::string(word) + "'");
        }
        lower.push_back(static_cast<char>(std::tolower(u)));
    }

    const auto cuts = Syllabifier(std::move(lower)).cut_points();
    std::string out;
    out.reserve(word.size() + cuts.size());
    std::size_t prev = 0;
    for (auto c : cuts) {
        out.append(word.substr(prev, c - prev));
        out.push_back('-');
        prev = c;
    }
    out.append(word.substr(prev));
    return out;
}

}  // namespace podium
