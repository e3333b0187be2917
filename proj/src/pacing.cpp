#include "podium/pacing.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "podium/error.hpp"

namespace podium {

namespace {

constexpr std::array<std::pair<PaceClass, std::string_view>, 4> kNames{{
    {PaceClass::TooSlow, "TooSlow"},
    {PaceClass::SlightlySlow, "SlightlySlow"},
    {PaceClass::OnPace, "OnPace"},
    {PaceClass::TooFast, "TooFast"},
}};

constexpr double kFadeFloor = 0.3;

}  // namespace

std::string_view pace_class_name(PaceClass c)
{
    for (const auto& [cls, name] : kNames) {
        if (cls == c) {
            return name;
        }
    }
    return "?";
}

std::optional<PaceClass> pace_class_from_name(std::string_view name)
{
    for (const auto& [cls, n] : kNames) {
        if (n == name) {
            return cls;
        }
    }
    return std::nullopt;
}

PaceConfig PaceConfig::from_package(const ScriptPackage& package)
{
    PaceConfig c;
    c.time_limit_s = package.time_limit_s;
    c.target_wpm = package.target_wpm;
    return c;
}

void validate_config(const PaceConfig& c)
{
    auto bad = [](const std::string& why) { throw Error(ErrorCode::InvalidRequest, why); };
    if (!(c.time_limit_s > 0) || !(c.target_wpm > 0) || !(c.rate_window_s > 0)) {
        bad("time limit, target wpm and rate window must be positive");
    }
    if (!(0 < c.slow_fade_lo && c.slow_fade_lo < c.slow_fade_hi && c.slow_fade_hi < 1 &&
          1 < c.fast_ratio)) {
        bad("pace thresholds must satisfy 0 < lo < hi < 1 < fast");
    }
}

PaceClass classify_pace(double wpm, const PaceConfig& c)
{
    if (wpm > c.fast_ratio * c.target_wpm) {
        return PaceClass::TooFast;
    }
    if (wpm < c.slow_fade_lo * c.target_wpm) {
        return PaceClass::TooSlow;
    }
    if (wpm < c.slow_fade_hi * c.target_wpm) {
        return PaceClass::SlightlySlow;
    }
    return PaceClass::OnPace;
}

double fade_level(PaceClass pace_class, double wpm, const PaceConfig& c)
{
    if (pace_class != PaceClass::SlightlySlow) {
        return 1.0;
    }
    const double lo = c.slow_fade_lo * c.target_wpm;
    const double hi = c.slow_fade_hi * c.target_wpm;
    const double t = std::clamp((wpm - lo) / (hi - lo), 0.0, 1.0);
    return kFadeFloor + (1.0 - kFadeFloor) * t;
}

double ideal_fraction(double elapsed_s, double time_limit_s)
{
    if (!(time_limit_s > 0)) {
        return 1.0;
    }
    return std::clamp(elapsed_s / time_limit_s, 0.0, 1.0);
}

double recent_wpm(const AlignmentState& state, std::int64_t now_ms, double window_s)
{
    const double span_ms = std::min(window_s * 1000.0, static_cast<double>(now_ms));
    if (span_ms <= 0) {
        return 0.0;
    }
    const double from = static_cast<double>(now_ms) - span_ms;
    std::size_t tokens = 0;
    for (auto it = state.heard_log.rbegin(); it != state.heard_log.rend(); ++it) {
        const auto t = static_cast<double>(it->t_ms);
        if (t <= from) {
            break;
        }
        if (t <= static_cast<double>(now_ms)) {
            tokens += it->tokens;
        }
    }
    return static_cast<double>(tokens) * 60000.0 / span_ms;
}

PaceReport compute_pace(const AlignmentState& state, double elapsed_s, std::size_t total_tokens,
                        const PaceConfig& config)
{
    PaceReport r;
    r.actual_fraction =
        total_tokens == 0
            ? 0.0
            : std::min(1.0, static_cast<double>(state.tokens_heard) /
                                static_cast<double>(total_tokens));
    r.ideal_fraction = ideal_fraction(elapsed_s, config.time_limit_s);
    r.recent_wpm = recent_wpm(state, std::llround(std::max(0.0, elapsed_s) * 1000.0),
                              config.rate_window_s);
    r.pace_class = classify_pace(r.recent_wpm, config);
    r.fade = fade_level(r.pace_class, r.recent_wpm, config);
    return r;
}

PaceReport compute_pace(const AlignmentState& state, double elapsed_s,
                        const ScriptPackage& package, const PaceConfig& config)
{
    return compute_pace(state, elapsed_s, total_tokens(package), config);
}

}  // namespace podium
