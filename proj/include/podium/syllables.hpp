#pragma once

#include <string>
#include <string_view>

namespace podium {

/// Splits an alphabetic word into pronunciation chunks joined by '-',
/// e.g. "Subsequently" -> "Sub-se-quent-ly". Casing is preserved and
/// removing the hyphens always gives back the input.
///
/// Rule-based: vowel groups (with silent-e and hiatus handling) define the
/// nuclei, consonants between nuclei are split by maximal legal onset, a
/// handful of English suffixes are kept whole, and single consonants after
/// a (guessed) stressed short vowel close the preceding syllable. Edge
/// chunks shorter than two letters are merged into their neighbour.
///
/// Throws Error{NonAlphabetic} for empty input or any non-letter.
std::string segment_syllables(std::string_view word);

}  // namespace podium
