#pragma once

#include <cstdint>
#include <string_view>

#include "podium/alignment.hpp"
#include "podium/package.hpp"

namespace podium {

/// Ordered slowest to fastest.
enum class PaceClass { TooSlow, SlightlySlow, OnPace, TooFast };

std::string_view pace_class_name(PaceClass c);
std::optional<PaceClass> pace_class_from_name(std::string_view name);

struct PaceConfig {
    double time_limit_s = 300.0;
    double target_wpm = kDefaultTargetWpm;
    double fast_ratio = 1.25;
    double slow_fade_lo = 0.75;
    double slow_fade_hi = 0.90;
    double rate_window_s = 15.0;

    static PaceConfig from_package(const ScriptPackage& package);
};

/// Throws Error{InvalidRequest} unless 0 < lo < hi < 1 < fast and the
/// limits are positive.
void validate_config(const PaceConfig& config);

struct PaceReport {
    double actual_fraction = 0.0;
    double ideal_fraction = 0.0;
    double recent_wpm = 0.0;
    PaceClass pace_class = PaceClass::OnPace;
    double fade = 1.0;

    friend bool operator==(const PaceReport&, const PaceReport&) = default;
};

/// TooFast above fast_ratio*target, TooSlow below slow_fade_lo*target,
/// SlightlySlow in [lo, hi)*target, OnPace otherwise.
PaceClass classify_pace(double wpm, const PaceConfig& config);

/// Underpainting opacity: 0.3 at the low edge of SlightlySlow rising
/// linearly to 1.0 at its high edge; 1.0 for every other class.
double fade_level(PaceClass pace_class, double wpm, const PaceConfig& config);

double ideal_fraction(double elapsed_s, double time_limit_s);

/// Tokens heard in (now - w, now] per minute, w = min(window, now).
double recent_wpm(const AlignmentState& state, std::int64_t now_ms, double window_s);

PaceReport compute_pace(const AlignmentState& state, double elapsed_s, std::size_t total_tokens,
                        const PaceConfig& config);
PaceReport compute_pace(const AlignmentState& state, double elapsed_s,
                        const ScriptPackage& package, const PaceConfig& config);

}  // namespace podium
