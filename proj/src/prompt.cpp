#include "podium/prompt.hpp"

#include <algorithm>
#include <cctype>

#include "podium/error.hpp"

namespace podium {

namespace {

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

struct FactorNames {
    Factor factor;
    Channel channel;
    std::string_view name;
    std::string_view display;
    std::string_view markup;
};

constexpr std::array<FactorNames, 9> kFactorNames{{
    {Factor::VocalPitch, Channel::Verbal, "VocalPitch", "Vocal Pitch", "pitch"},
    {Factor::SpeechRate, Channel::Verbal, "SpeechRate", "Speech Rate", "rate"},
    {Factor::Volume, Channel::Verbal, "Volume", "Volume", "volume"},
    {Factor::EyeContact, Channel::Nonverbal, "EyeContact", "Eye Contact", "eye-contact"},
    {Factor::FacialExpression, Channel::Nonverbal, "FacialExpression", "Facial Expression",
     "facial"},
    {Factor::Composure, Channel::Nonverbal, "Composure", "Composure", "composure"},
    {Factor::Gesture, Channel::Nonverbal, "Gesture", "Gesture", "gesture"},
    {Factor::Posture, Channel::Nonverbal, "Posture", "Posture", "posture"},
    {Factor::Slides, Channel::Visual, "Slides", "Slides", "slides"},
}};

const FactorNames& names_of(Factor f)
{
    return kFactorNames[static_cast<std::size_t>(f)];
}

struct Alias {
    std::string_view alias;
    Factor factor;
};

constexpr std::array<Alias, 7> kAliases{{
    {"vocal-pitch", Factor::VocalPitch},
    {"speech-rate", Factor::SpeechRate},
    {"eye", Factor::EyeContact},
    {"eyecontact", Factor::EyeContact},
    {"facial-expression", Factor::FacialExpression},
    {"expression", Factor::FacialExpression},
    {"slide", Factor::Slides},
}};

constexpr std::array<std::string_view, 23> kModulationNames{
    "High",      "Normal",      "Low",     "Fast",    "Slow",      "Loud",
    "Soft",      "Happy",       "Sad",     "Angry",   "Surprised", "Embarrassed",
    "Serious",   "Calm",        "Relaxed", "Confident", "Wave",    "Unfold",
    "Point",     "Stand",       "Walk",    "Direct",  "Averted",
};

// Column-major reading of the printed emoji table.
constexpr std::array<EmojiRow, 24> kEmojiTable{{
    {Factor::VocalPitch, Modulation::High, "PITCH_HIGH"},
    {Factor::VocalPitch, Modulation::Normal, "PITCH_NORMAL"},
    {Factor::VocalPitch, Modulation::Low, "PITCH_LOW"},
    {Factor::SpeechRate, Modulation::Fast, "RATE_FAST"},
    {Factor::SpeechRate, Modulation::Normal, "RATE_NORMAL"},
    {Factor::SpeechRate, Modulation::Slow, "RATE_SLOW"},
    {Factor::FacialExpression, Modulation::Happy, "FACIAL_HAPPY"},
    {Factor::FacialExpression, Modulation::Sad, "FACIAL_SAD"},
    {Factor::FacialExpression, Modulation::Angry, "FACIAL_ANGRY"},
    {Factor::FacialExpression, Modulation::Surprised, "FACIAL_SURPRISED"},
    {Factor::FacialExpression, Modulation::Embarrassed, "FACIAL_EMBARRASSED"},
    {Factor::FacialExpression, Modulation::Serious, "FACIAL_SERIOUS"},
    {Factor::Volume, Modulation::Loud, "VOLUME_LOUD"},
    {Factor::Volume, Modulation::Normal, "VOLUME_NORMAL"},
    {Factor::Volume, Modulation::Soft, "VOLUME_SOFT"},
    {Factor::Composure, Modulation::Calm, "COMPOSURE_CALM"},
    {Factor::Composure, Modulation::Relaxed, "COMPOSURE_RELAXED"},
    {Factor::Composure, Modulation::Confident, "COMPOSURE_CONFIDENT"},
    {Factor::Gesture, Modulation::Wave, "GESTURE_WAVE"},
    {Factor::Gesture, Modulation::Unfold, "GESTURE_UNFOLD"},
    {Factor::Gesture, Modulation::Point, "GESTURE_POINT"},
    {Factor::Posture, Modulation::Stand, "POSTURE_STAND"},
    {Factor::Posture, Modulation::Walk, "POSTURE_WALK"},
    {Factor::EyeContact, Modulation::Direct, "EYE_CONTACT_DIRECT"},
}};

const EmojiRow* find_row(Factor factor, Modulation modulation)
{
    auto it = std::find_if(kEmojiTable.begin(), kEmojiTable.end(), [&](const EmojiRow& r) {
        return r.factor == factor && r.modulation == modulation;
    });
    return it == kEmojiTable.end() ? nullptr : &*it;
}

}  // namespace

Channel channel_of(Factor f) { return names_of(f).channel; }
std::string_view factor_name(Factor f) { return names_of(f).name; }
std::string_view factor_display_name(Factor f) { return names_of(f).display; }
std::string_view factor_markup_name(Factor f) { return names_of(f).markup; }

std::optional<Factor> factor_from_name(std::string_view name)
{
    for (const auto& n : kFactorNames) {
        if (n.name == name) {
            return n.factor;
        }
    }
    return std::nullopt;
}

std::optional<Factor> factor_from_alias(std::string_view alias)
{
    for (const auto& n : kFactorNames) {
        if (iequals(n.markup, alias) || iequals(n.name, alias)) {
            return n.factor;
        }
    }
    for (const auto& a : kAliases) {
        if (iequals(a.alias, alias)) {
            return a.factor;
        }
    }
    return std::nullopt;
}

std::string_view modulation_name(Modulation m)
{
    return kModulationNames[static_cast<std::size_t>(m)];
}

std::optional<Modulation> modulation_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kModulationNames.size(); ++i) {
        if (iequals(kModulationNames[i], name)) {
            return static_cast<Modulation>(i);
        }
    }
    return std::nullopt;
}

std::span<const EmojiRow> emoji_lookup_table() { return kEmojiTable; }

bool is_known_prompt(Factor factor, Modulation modulation)
{
    return find_row(factor, modulation) != nullptr;
}

std::string_view prompt_to_emoji(Factor factor, Modulation modulation)
{
    if (const auto* row = find_row(factor, modulation)) {
        return row->emoji_code;
    }
    throw Error(ErrorCode::UnknownPromptPair,
                "no emoji for [" + std::string(factor_markup_name(factor)) + " - " +
                    std::string(modulation_name(modulation)) + "]");
}

std::optional<DeliveryPrompt> prompt_from_emoji(std::string_view code)
{
    for (const auto& r : kEmojiTable) {
        if (r.emoji_code == code) {
            return DeliveryPrompt{r.factor, r.modulation};
        }
    }
    return std::nullopt;
}

}  // namespace podium
