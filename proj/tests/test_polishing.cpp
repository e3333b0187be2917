#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <random>

#include "podium/error.hpp"
#include "podium/polishing.hpp"

using namespace podium;

namespace {

std::string lower(std::string s)
{
    for (auto& c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

PolishRequest request(std::set<Factor> factors, double limit = 300)
{
    PolishRequest r;
    r.manuscript = {"Good morning everyone. Today I present our results.",
                    "Thank you for listening!"};
    r.selected_factors = std::move(factors);
    r.time_limit_s = limit;
    return r;
}

class FixedAdapter : public PolishAdapter {
public:
    explicit FixedAdapter(std::string reply) : reply_(std::move(reply)) {}
    std::string complete(const CompletionRequest&) override { return reply_; }
    std::string model_id() const override { return "fixed"; }

private:
    std::string reply_;
};

class DownAdapter : public PolishAdapter {
public:
    std::string complete(const CompletionRequest&) override
    {
        throw Error(ErrorCode::AdapterUnavailable, "connection refused");
    }
    std::string model_id() const override { return "down"; }
};

std::vector<Sentence> plain(const std::string& text) { return parse_annotated(text); }

// Longest common subsequence by exhaustive search over subsets of `a`.
std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::size_t best = 0;
    for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
        std::size_t j = 0;
        std::size_t n = 0;
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) {
            if (!(mask & (1u << i))) {
                continue;
            }
            while (j < b.size() && b[j] != a[i]) {
                ++j;
            }
            if (j == b.size()) {
                ok = false;
            } else {
                ++j;
                ++n;
            }
        }
        if (ok) {
            best = std::max(best, n);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("prompt names only the selected factors")
{
    for (auto f : kAllFactors) {
        const auto text = lower(build_prompt(request({f})));
        CHECK(text.find(lower(std::string(factor_display_name(f)))) != std::string::npos);
        for (auto other : kAllFactors) {
            if (other == f) {
                continue;
            }
            INFO("selected " << factor_name(f) << ", leaked " << factor_name(other));
            CHECK(text.find(lower(std::string(factor_display_name(other)))) == std::string::npos);
            CHECK(text.find("[" + std::string(factor_markup_name(other)) + " -") ==
                  std::string::npos);
        }
    }
}

TEST_CASE("prompt states the time budget")
{
    CHECK(build_prompt(request({Factor::Volume}, 300)).find("5 minutes (300 seconds)") !=
          std::string::npos);
    CHECK(build_prompt(request({}, 90)).find("1.5 minutes (90 seconds)") != std::string::npos);
    CHECK(build_prompt(request({}, 60)).find("1 minute (60 seconds)") != std::string::npos);
}

TEST_CASE("prompt without factors asks for polish only")
{
    const auto text = build_prompt(request({}));
    CHECK(text.find('[') == std::string::npos);
    CHECK(text.find("Do not add delivery markers") != std::string::npos);
    const auto with = build_prompt(request({Factor::Gesture}));
    CHECK(with.find("[gesture - point]") != std::string::npos);
}

TEST_CASE("mock adapter with Volume prefixes every sentence")
{
    MockAdapter mock;
    const auto req = request({Factor::Volume});
    const auto result = polish(req, mock);
    CHECK(result.model_id == "mock");
    REQUIRE(result.polished.size() == 2);
    const auto first = parse_annotated(result.polished[0]);
    const auto original = parse_annotated(req.manuscript[0]);
    REQUIRE(first.size() == 2);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].text == original[i].text);
        CHECK(first[i].prompts == std::vector<DeliveryPrompt>{{Factor::Volume, Modulation::Normal}});
    }
    CHECK(result.polished[0] ==
          "[volume - normal] Good morning everyone. [volume - normal] Today I present our results.");
}

TEST_CASE("mock adapter without factors is the identity")
{
    MockAdapter mock;
    const auto req = request({});
    CHECK(polish(req, mock).polished == req.manuscript);
    auto other = request({Factor::Gesture, Factor::Posture});
    CHECK(polish(other, mock).polished == other.manuscript);
}

TEST_CASE("mock adapter is deterministic")
{
    MockAdapter mock;
    const auto req = request({Factor::Volume, Factor::Slides});
    CHECK(polish(req, mock).polished == polish(req, mock).polished);
}

TEST_CASE("unparsable response keeps the raw text")
{
    FixedAdapter garbage("%%%garbage");
    try {
        polish(request({Factor::Volume}), garbage);
        FAIL("expected UnparsableResponse");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnparsableResponse);
        CHECK(e.detail().find("%%%garbage") != std::string::npos);
    }
    FixedAdapter unknown("[volume - purple] Hello.");
    CHECK_THROWS_WITH_AS(polish(request({}), unknown), doctest::Contains("volume - purple"),
                         Error);
}

TEST_CASE("adapter failure propagates")
{
    DownAdapter down;
    try {
        polish(request({}), down);
        FAIL("expected AdapterUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AdapterUnavailable);
    }
}

TEST_CASE("request validation")
{
    MockAdapter mock;
    auto r = request({});
    r.time_limit_s = 0;
    CHECK_THROWS_AS(polish(r, mock), Error);
    r = request({});
    r.manuscript.clear();
    CHECK_THROWS_AS(polish(r, mock), Error);
    r = request({});
    r.manuscript[1] = "   ";
    CHECK_THROWS_AS(polish(r, mock), Error);
}

TEST_CASE("http adapter needs configuration")
{
    HttpAdapter unreachable({"http://127.0.0.1:1", "m", "", 1});
    try {
        unreachable.complete({"x", "y", {}});
        FAIL("expected AdapterUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AdapterUnavailable);
    }
}

TEST_CASE("diff of identical scripts keeps everything")
{
    const std::vector<std::vector<Sentence>> a{plain("One. Two. Three."), plain("Four.")};
    const auto changes = diff_scripts(a, a);
    REQUIRE(changes.size() == 4);
    for (const auto& c : changes) {
        CHECK(c.kind == ChangeKind::Kept);
    }
    CHECK(changes[3].slide == 1);
}

TEST_CASE("diff ignores markers")
{
    MockAdapter mock;
    const auto req = request({Factor::Volume});
    const auto result = polish(req, mock);
    std::vector<std::vector<Sentence>> before, after;
    for (std::size_t i = 0; i < req.manuscript.size(); ++i) {
        before.push_back(parse_annotated(req.manuscript[i]));
        after.push_back(parse_annotated(result.polished[i]));
    }
    for (const auto& c : diff_scripts(before, after)) {
        CHECK(c.kind == ChangeKind::Kept);
    }
}

TEST_CASE("diff reports one appended sentence as inserted")
{
    const auto changes = diff_scripts({plain("One. Two.")}, {plain("One. Two. Three.")});
    REQUIRE(changes.size() == 3);
    CHECK(changes[2].kind == ChangeKind::Inserted);
    CHECK(changes[2].after == 2);
    CHECK(changes[2].after_text == "Three.");
}

TEST_CASE("diff pairs replaced sentences")
{
    const auto changes = diff_scripts({plain("One. Two. Three.")}, {plain("One. Deux. Three.")});
    REQUIRE(changes.size() == 3);
    CHECK(changes[1].kind == ChangeKind::Changed);
    CHECK(changes[1].before_text == "Two.");
    CHECK(changes[1].after_text == "Deux.");
}

TEST_CASE("diff agrees with a brute-force subsequence oracle")
{
    const std::vector<std::string> pool{"Alpha.", "Beta.", "Gamma.", "Delta."};
    std::mt19937 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<std::string> a(rng() % 8), b(rng() % 8);
        for (auto& s : a) s = pool[rng() % pool.size()];
        for (auto& s : b) s = pool[rng() % pool.size()];
        auto to_sentences = [](const std::vector<std::string>& v) {
            std::vector<Sentence> out;
            for (const auto& s : v) out.push_back(parse_annotated(s)[0]);
            return out;
        };
        const auto changes = diff_scripts({to_sentences(a)}, {to_sentences(b)});
        std::size_t kept = 0, changed = 0, ins = 0, del = 0;
        long last_before = -1, last_after = -1;
        for (const auto& c : changes) {
            switch (c.kind) {
            case ChangeKind::Kept:
                ++kept;
                CHECK(c.before_text == c.after_text);
                break;
            case ChangeKind::Changed: ++changed; break;
            case ChangeKind::Inserted: ++ins; break;
            case ChangeKind::Deleted: ++del; break;
            }
            if (c.kind != ChangeKind::Inserted) {
                CHECK(static_cast<long>(c.before) == last_before + 1);
                last_before = static_cast<long>(c.before);
            }
            if (c.kind != ChangeKind::Deleted) {
                CHECK(static_cast<long>(c.after) == last_after + 1);
                last_after = static_cast<long>(c.after);
            }
        }
        REQUIRE(kept == brute_lcs(a, b));
        CHECK(kept + changed + del == a.size());
        CHECK(kept + changed + ins == b.size());
    }
}

TEST_CASE("duration estimate")
{
    CHECK(estimate_duration(130, 130) == 60);
    CHECK(estimate_duration(0, 130) == 0);
    CHECK(estimate_duration(975, 130) == 450);
    CHECK(estimate_duration(1, 120) == 1);  // 0.5 s rounds up
    CHECK(estimate_duration(1, 121) == 0);

    std::mt19937 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t w = rng() % 100000;
        const double wpm = 60 + rng() % 200;
        CHECK(estimate_duration_exact(2 * w, wpm) == 2 * estimate_duration_exact(w, wpm));
        const std::size_t k = 1 + rng() % 9;
        CHECK(estimate_duration_exact(k * w, wpm) ==
              doctest::Approx(k * estimate_duration_exact(w, wpm)).epsilon(1e-12));
    }
}
