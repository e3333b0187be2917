#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "podium/markup.hpp"
#include "podium/prompt.hpp"

namespace podium {

inline constexpr std::string_view kPackageVersion = "trinity-package/1";
inline constexpr double kDefaultTargetWpm = 130.0;
inline constexpr std::size_t kOverloadThreshold = 5;

struct DeliveryConfig {
    std::set<Factor> selected_factors;
    bool used_preset = false;

    friend bool operator==(const DeliveryConfig&, const DeliveryConfig&) = default;
};

/// Shipped default selection. Overridable; it is not a published ranking.
DeliveryConfig recommended_preset();

struct SlideEntry {
    int slide_index = 0;
    std::string thumbnail_ref;
    std::vector<Sentence> sentences;
    std::string visual_notes;

    friend bool operator==(const SlideEntry&, const SlideEntry&) = default;
};

struct ScriptPackage {
    std::string version{kPackageVersion};
    std::vector<SlideEntry> slides;
    DeliveryConfig config;
    double time_limit_s = 0.0;
    double target_wpm = kDefaultTargetWpm;

    friend bool operator==(const ScriptPackage&, const ScriptPackage&) = default;
};

struct OverloadWarning {
    std::size_t selected;
    std::string message;
};

/// Warns when more than five factors are selected.
std::optional<OverloadWarning> check_factor_overload(const DeliveryConfig& config);

/// Throws Error{InvalidPackage} (or UnknownPromptPair) on any violated
/// invariant.
void validate_package(const ScriptPackage& package);

std::size_t total_sentences(const ScriptPackage& package);
std::size_t total_tokens(const ScriptPackage& package);

/// Global sentence index -> slide index.
std::vector<int> sentence_slides(const ScriptPackage& package);

/// Pretty-printed, versioned JSON document. Validates first.
std::string package_to_json(const ScriptPackage& package);
/// Parses and validates. Throws Error{InvalidPackage} on bad JSON or schema.
ScriptPackage package_from_json(std::string_view json);

ScriptPackage load_package(const std::string& path);
void save_package(const ScriptPackage& package, const std::string& path);

}  // namespace podium
