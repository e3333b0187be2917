#include "podium/package.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "podium/error.hpp"

namespace podium {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& why)
{
    throw Error(ErrorCode::InvalidPackage, why);
}

json prompt_to_json(const DeliveryPrompt& p)
{
    return json{{"factor", factor_name(p.factor)},
                {"modulation", modulation_name(p.modulation)},
                {"emoji_code", prompt_to_emoji(p.factor, p.modulation)}};
}

DeliveryPrompt prompt_from_json(const json& j)
{
    const auto factor = factor_from_name(j.at("factor").get<std::string>());
    const auto modulation = modulation_from_name(j.at("modulation").get<std::string>());
    if (!factor || !modulation || !is_known_prompt(*factor, *modulation)) {
        throw Error(ErrorCode::UnknownPromptPair, "unknown prompt " + j.dump());
    }
    if (j.contains("emoji_code") &&
        j.at("emoji_code").get<std::string>() != prompt_to_emoji(*factor, *modulation)) {
        invalid("emoji_code does not match its prompt: " + j.dump());
    }
    return {*factor, *modulation};
}

json sentence_to_json(const Sentence& s)
{
    json prompts = json::array();
    for (const auto& p : s.prompts) {
        prompts.push_back(prompt_to_json(p));
    }
    json syllabified = json::object();
    for (const auto& [index, syl] : s.syllabified) {
        syllabified[std::to_string(index)] = syl;
    }
    return json{{"text", s.text},
                {"tokens", s.tokens},
                {"prompts", prompts},
                {"keywords", s.keywords},
                {"syllabified", syllabified}};
}

Sentence sentence_from_json(const json& j)
{
    Sentence s;
    s.text = j.at("text").get<std::string>();
    s.tokens = j.at("tokens").get<std::vector<std::string>>();
    for (const auto& p : j.at("prompts")) {
        s.prompts.push_back(prompt_from_json(p));
    }
    s.keywords = j.at("keywords").get<std::set<std::size_t>>();
    for (const auto& [key, value] : j.at("syllabified").items()) {
        std::size_t index = 0;
        std::istringstream in(key);
        if (!(in >> index) || !in.eof()) {
            invalid("syllabified key '" + key + "' is not a token index");
        }
        s.syllabified.emplace(index, value.get<std::string>());
    }
    return s;
}

}  // namespace

DeliveryConfig recommended_preset()
{
    return DeliveryConfig{
        {Factor::Volume, Factor::SpeechRate, Factor::Gesture, Factor::EyeContact, Factor::Slides},
        true};
}

std::optional<OverloadWarning> check_factor_overload(const DeliveryConfig& config)
{
    const auto n = config.selected_factors.size();
    if (n <= kOverloadThreshold) {
        return std::nullopt;
    }
    return OverloadWarning{n, std::to_string(n) +
                                  " delivery factors selected; more than " +
                                  std::to_string(kOverloadThreshold) +
                                  " may overload you during the talk"};
}

void validate_package(const ScriptPackage& package)
{
    if (package.version != kPackageVersion) {
        invalid("unsupported package version '" + package.version + "'");
    }
    if (package.slides.empty()) {
        invalid("package has no slides");
    }
    if (!(package.time_limit_s > 0.0) || !std::isfinite(package.time_limit_s)) {
        invalid("time_limit_s must be positive");
    }
    if (!(package.target_wpm > 0.0) || !std::isfinite(package.target_wpm)) {
        invalid("target_wpm must be positive");
    }
    std::size_t sentences = 0;
    for (std::size_t i = 0; i < package.slides.size(); ++i) {
        const auto& slide = package.slides[i];
        if (slide.slide_index != static_cast<int>(i)) {
            invalid("slide " + std::to_string(i) + " has slide_index " +
                    std::to_string(slide.slide_index));
        }
        for (const auto& s : slide.sentences) {
            validate_sentence(s);
        }
        sentences += slide.sentences.size();
    }
    if (sentences == 0) {
        invalid("package has no sentences");
    }
}

std::size_t total_sentences(const ScriptPackage& package)
{
    std::size_t n = 0;
    for (const auto& slide : package.slides) {
        n += slide.sentences.size();
    }
    return n;
}

std::size_t total_tokens(const ScriptPackage& package)
{
    std::size_t n = 0;
    for (const auto& slide : package.slides) {
        for (const auto& s : slide.sentences) {
            n += s.tokens.size();
        }
    }
    return n;
}

std::vector<int> sentence_slides(const ScriptPackage& package)
{
    std::vector<int> out;
    for (const auto& slide : package.slides) {
        out.insert(out.end(), slide.sentences.size(), slide.slide_index);
    }
    return out;
}

std::string package_to_json(const ScriptPackage& package)
{
    validate_package(package);
    json slides = json::array();
    for (const auto& slide : package.slides) {
        json sentences = json::array();
        for (const auto& s : slide.sentences) {
            sentences.push_back(sentence_to_json(s));
        }
        slides.push_back(json{{"slide_index", slide.slide_index},
                              {"thumbnail_ref", slide.thumbnail_ref},
                              {"sentences", sentences},
                              {"visual_notes", slide.visual_notes}});
    }
    json factors = json::array();
    for (auto f : package.config.selected_factors) {
        factors.push_back(factor_name(f));
    }
    json doc{{"version", package.version},
             {"slides", slides},
             {"config", {{"selected_factors", factors}, {"used_preset", package.config.used_preset}}},
             {"time_limit_s", package.time_limit_s},
             {"target_wpm", package.target_wpm}};
    return doc.dump(2) + "\n";
}

ScriptPackage package_from_json(std::string_view text)
{
    ScriptPackage package;
    try {
        const auto doc = json::parse(text);
        package.version = doc.at("version").get<std::string>();
        if (package.version != kPackageVersion) {
            invalid("unsupported package version '" + package.version + "'");
        }
        for (const auto& js : doc.at("slides")) {
            SlideEntry slide;
            slide.slide_index = js.at("slide_index").get<int>();
            slide.thumbnail_ref = js.at("thumbnail_ref").get<std::string>();
            slide.visual_notes = js.value("visual_notes", std::string{});
            for (const auto& s : js.at("sentences")) {
                slide.sentences.push_back(sentence_from_json(s));
            }
            package.slides.push_back(std::move(slide));
        }
        const auto& config = doc.at("config");
        for (const auto& f : config.at("selected_factors")) {
            const auto factor = factor_from_name(f.get<std::string>());
            if (!factor) {
                invalid("unknown factor " + f.dump());
            }
            package.config.selected_factors.insert(*factor);
        }
        package.config.used_preset = config.at("used_preset").get<bool>();
        package.time_limit_s = doc.at("time_limit_s").get<double>();
        package.target_wpm = doc.at("target_wpm").get<double>();
    } catch (const json::exception& e) {
        invalid(std::string("malformed package JSON: ") + e.what());
    }
    validate_package(package);
    return package;
}

ScriptPackage load_package(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        invalid("cannot read package '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return package_from_json(buf.str());
}

void save_package(const ScriptPackage& package, const std::string& path)
{
    const auto text = package_to_json(package);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) {
        invalid("cannot write package '" + path + "'");
    }
}

}  // namespace podium
