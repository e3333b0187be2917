#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace podium {

enum class Channel { Verbal, Nonverbal, Visual };

enum class Factor {
    VocalPitch,
    SpeechRate,
    Volume,
    EyeContact,
    FacialExpression,
    Composure,
    Gesture,
    Posture,
    Slides,
};

inline constexpr std::array<Factor, 9> kAllFactors{
    Factor::VocalPitch, Factor::SpeechRate, Factor::Volume,
    Factor::EyeContact, Factor::FacialExpression, Factor::Composure,
    Factor::Gesture,    Factor::Posture,    Factor::Slides,
};

enum class Modulation {
    High,
    Normal,
    Low,
    Fast,
    Slow,
    Loud,
    Soft,
    Happy,
    Sad,
    Angry,
    Surprised,
    Embarrassed,
    Serious,
    Calm,
    Relaxed,
    Confident,
    Wave,
    Unfold,
    Point,
    Stand,
    Walk,
    Direct,
    Averted,
};

Channel channel_of(Factor f);

/// "VocalPitch", "Volume", ... (package JSON spelling).
std::string_view factor_name(Factor f);
/// "Vocal Pitch", "Eye Contact", ... (human-readable).
std::string_view factor_display_name(Factor f);
/// "pitch", "eye-contact", ... (markup spelling).
std::string_view factor_markup_name(Factor f);

std::optional<Factor> factor_from_name(std::string_view name);
/// Accepts markup names and the short CLI aliases (eye, facial, rate, ...),
/// case-insensitively.
std::optional<Factor> factor_from_alias(std::string_view alias);

std::string_view modulation_name(Modulation m);
std::optional<Modulation> modulation_from_name(std::string_view name);

struct DeliveryPrompt {
    Factor factor;
    Modulation modulation;

    friend bool operator==(const DeliveryPrompt&, const DeliveryPrompt&) = default;
};

struct EmojiRow {
    Factor factor;
    Modulation modulation;
    std::string_view emoji_code;
};

/// The 24 delivery prompts that have an emoji, in table order.
std::span<const EmojiRow> emoji_lookup_table();

/// Throws Error{UnknownPromptPair} for pairs outside the table.
std::string_view prompt_to_emoji(Factor factor, Modulation modulation);

bool is_known_prompt(Factor factor, Modulation modulation);

std::optional<DeliveryPrompt> prompt_from_emoji(std::string_view code);

}  // namespace podium
