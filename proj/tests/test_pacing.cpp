#include <doctest.h>

#include <cmath>
#include <random>

#include "podium/error.hpp"
#include "podium/pacing.hpp"

using namespace podium;

namespace {

PaceConfig config130()
{
    PaceConfig c;
    c.time_limit_s = 300;
    c.target_wpm = 130;
    return c;
}

}  // namespace

TEST_CASE("classes at the examples")
{
    const auto c = config130();
    CHECK(classify_pace(130, c) == PaceClass::OnPace);
    CHECK(classify_pace(1.5 * 130, c) == PaceClass::TooFast);
    CHECK(classify_pace(0.8 * 130, c) == PaceClass::SlightlySlow);
    CHECK(classify_pace(0.5 * 130, c) == PaceClass::TooSlow);
    CHECK(classify_pace(0, c) == PaceClass::TooSlow);
}

TEST_CASE("classes at each threshold")
{
    const auto c = config130();
    const double lo = c.slow_fade_lo * c.target_wpm;
    const double hi = c.slow_fade_hi * c.target_wpm;
    const double fast = c.fast_ratio * c.target_wpm;

    CHECK(classify_pace(std::nextafter(lo, 0.0), c) == PaceClass::TooSlow);
    CHECK(classify_pace(lo, c) == PaceClass::SlightlySlow);
    CHECK(classify_pace(std::nextafter(hi, 0.0), c) == PaceClass::SlightlySlow);
    CHECK(classify_pace(hi, c) == PaceClass::OnPace);
    CHECK(classify_pace(fast, c) == PaceClass::OnPace);
    CHECK(classify_pace(std::nextafter(fast, 1e9), c) == PaceClass::TooFast);
}

TEST_CASE("fade ramp")
{
    const auto c = config130();
    const double lo = c.slow_fade_lo * c.target_wpm;
    const double hi = c.slow_fade_hi * c.target_wpm;
    auto fade = [&](double wpm) { return fade_level(classify_pace(wpm, c), wpm, c); };

    CHECK(fade(130) == 1.0);
    CHECK(fade(hi) == 1.0);
    CHECK(fade(std::nextafter(lo, 0.0)) == 1.0);  // TooSlow: triangles, not fade
    CHECK(fade(std::nextafter(lo, 1e9)) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(fade(std::nextafter(hi, 0.0)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fade((lo + hi) / 2) == doctest::Approx(0.65));
    CHECK(fade(200) == 1.0);

    double prev = 0;
    for (double w = lo; w < hi; w += 0.01) {
        const double f = fade(w);
        CHECK(f >= prev);
        CHECK(f >= 0.3);
        CHECK(f <= 1.0);
        prev = f;
    }
}

TEST_CASE("class is monotone in rate")
{
    const auto c = config130();
    int prev = 0;
    for (double w = 0; w < 400; w += 0.05) {
        const int cls = static_cast<int>(classify_pace(w, c));
        CHECK(cls >= prev);
        prev = cls;
    }
}

TEST_CASE("ideal fraction")
{
    CHECK(ideal_fraction(150, 300) == 0.5);
    CHECK(ideal_fraction(400, 300) == 1.0);
    CHECK(ideal_fraction(0, 300) == 0.0);
    double prev = 0;
    for (double t = 0; t < 500; t += 0.7) {
        const double f = ideal_fraction(t, 300);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("recent wpm window")
{
    AlignmentState s;
    s.heard_log = {{1000, 2}, {14000, 3}, {20000, 5}, {30000, 10}};
    // (15 s, 30 s] holds 5 + 10 tokens.
    CHECK(recent_wpm(s, 30000, 15) == doctest::Approx(60.0));
    // Early on the window is the elapsed time: 2 tokens in 5 s.
    CHECK(recent_wpm(s, 5000, 15) == doctest::Approx(24.0));
    CHECK(recent_wpm(s, 0, 15) == 0.0);
    CHECK(recent_wpm(AlignmentState{}, 10000, 15) == 0.0);
}

TEST_CASE("fractions stay in range")
{
    AlignmentState s;
    s.tokens_heard = 500;
    const auto r = compute_pace(s, 1000, 100, config130());
    CHECK(r.actual_fraction == 1.0);
    CHECK(r.ideal_fraction == 1.0);
    s.tokens_heard = 25;
    const auto q = compute_pace(s, 30, 100, config130());
    CHECK(q.actual_fraction == 0.25);
    CHECK(q.ideal_fraction == 0.1);
    CHECK(compute_pace(s, 10, 0, config130()).actual_fraction == 0.0);
}

TEST_CASE("constant rate at target is on pace")
{
    const auto c = config130();
    AlignmentState s;
    const double interval_ms = 60000.0 / c.target_wpm;
    std::size_t on = 0, reports = 0;
    double next_token = interval_ms;
    for (std::int64_t now = 1000; now <= 300000; now += 1000) {
        std::size_t n = 0;
        while (next_token <= static_cast<double>(now)) {
            ++n;
            next_token += interval_ms;
        }
        s.tokens_heard += n;
        if (n > 0) {
            s.heard_log.push_back({now, n});
        }
        const auto r = compute_pace(s, static_cast<double>(now) / 1000.0, 650, c);
        on += r.pace_class == PaceClass::OnPace ? 1 : 0;
        ++reports;
    }
    INFO("on pace " << on << " of " << reports);
    CHECK(static_cast<double>(on) >= 0.95 * static_cast<double>(reports));
}

TEST_CASE("config validation")
{
    auto c = config130();
    CHECK_NOTHROW(validate_config(c));
    c.slow_fade_lo = 0.95;
    CHECK_THROWS_AS(validate_config(c), Error);
    c = config130();
    c.fast_ratio = 0.9;
    CHECK_THROWS_AS(validate_config(c), Error);
    c = config130();
    c.time_limit_s = 0;
    CHECK_THROWS_AS(validate_config(c), Error);
}

TEST_CASE("class names")
{
    for (auto c : {PaceClass::TooSlow, PaceClass::SlightlySlow, PaceClass::OnPace,
                   PaceClass::TooFast}) {
        CHECK(pace_class_from_name(pace_class_name(c)) == c);
    }
    CHECK(pace_class_name(PaceClass::SlightlySlow) == "SlightlySlow");
    CHECK_FALSE(pace_class_from_name("Meh").has_value());
}
