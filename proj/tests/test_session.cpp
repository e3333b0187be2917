#include <doctest.h>

#include <algorithm>
#include <random>

#include "podium/error.hpp"
#include "podium/hub.hpp"
#include "podium/simulate.hpp"
#include "support/jitter_gen.hpp"
#include "support/sim_gen.hpp"

using namespace podium;
using nlohmann::json;

namespace {

ScriptPackage small_package()
{
    ScriptPackage p;
    p.time_limit_s = 120;
    p.slides.push_back({0, "slide-1", parse_annotated("Hello there everyone. Welcome to the talk."), ""});
    p.slides.push_back({1, "slide-2", parse_annotated("Here are the results."), ""});
    p.slides.push_back({2, "slide-3", parse_annotated("Thank you very much."), ""});
    return p;
}

SessionMessage msg(std::uint64_t seq, MessageKind kind, json payload = json::object(),
                   Role from = Role::Controller, std::string session = "s1")
{
    return {seq, std::move(session), from, kind, std::move(payload)};
}

SessionState ready_session()
{
    auto s = make_session("s1");
    auto r = apply(s, msg(1, MessageKind::UploadPackage,
                          {{"package", json::parse(package_to_json(small_package()))}}));
    return r.state;
}

std::size_t count_kind(const std::vector<Delivery>& out, MessageKind kind, Role to)
{
    return static_cast<std::size_t>(std::count_if(out.begin(), out.end(), [&](const Delivery& d) {
        return d.message.kind == kind && d.to == to;
    }));
}

// Views on both ends of a delivered engine stream.
struct Ends {
    Endpoint controller{Role::Controller, "s1"};
    Endpoint responder{Role::Responder, "s1"};
    void take(const std::vector<Delivery>& out)
    {
        for (const auto& d : out) {
            (d.to == Role::Controller ? controller : responder).receive(d.message);
        }
    }
};

}  // namespace

TEST_CASE("tap emits exactly one click to the responder")
{
    auto s = ready_session();
    const auto r = apply(s, msg(2, MessageKind::Tap));
    CHECK(r.outbound.size() == 1);
    CHECK(count_kind(r.outbound, MessageKind::Click, Role::Responder) == 1);
    CHECK(r.state.taps_applied == 1);
}

TEST_CASE("redelivered tap is ignored")
{
    auto s = ready_session();
    s = apply(s, msg(2, MessageKind::Tap)).state;
    const auto again = apply(s, msg(2, MessageKind::Tap));
    CHECK(again.outbound.empty());
    CHECK(again.state.taps_applied == 1);
    CHECK(view_of(again.state) == view_of(s));
}

TEST_CASE("swipe clamps and still broadcasts")
{
    auto s = ready_session();
    s = apply(s, msg(2, MessageKind::Swipe, swipe_payload(SwipeDirection::Next))).state;
    s = apply(s, msg(3, MessageKind::Swipe, swipe_payload(SwipeDirection::Next))).state;
    CHECK(s.slide_index == 2);
    const auto r = apply(s, msg(4, MessageKind::Swipe, swipe_payload(SwipeDirection::Next)));
    CHECK(r.state.slide_index == 2);
    CHECK(count_kind(r.outbound, MessageKind::GotoSlide, Role::Controller) == 1);
    CHECK(count_kind(r.outbound, MessageKind::GotoSlide, Role::Responder) == 1);
    CHECK(r.outbound[0].message.payload["index"] == 2);

    auto t = ready_session();
    const auto back = apply(t, msg(2, MessageKind::Swipe, swipe_payload(SwipeDirection::Prev)));
    CHECK(back.state.slide_index == 0);
    CHECK(back.outbound.size() == 2);
}

TEST_CASE("transcript runs alignment and pacing")
{
    auto s = ready_session();
    const auto r = apply(s, msg(2, MessageKind::Transcript,
                                transcript_payload({4000, "hello there everyone"})));
    CHECK(r.state.alignment.sentence_index == 1);
    CHECK(r.state.elapsed_s == 4.0);
    CHECK(r.state.pace.actual_fraction == doctest::Approx(3.0 / 15.0));
    CHECK(r.state.pace.ideal_fraction == doctest::Approx(4.0 / 120.0));
    CHECK(count_kind(r.outbound, MessageKind::StateSync, Role::Controller) == 1);
    CHECK(count_kind(r.outbound, MessageKind::StateSync, Role::Responder) == 1);
    CHECK(view_from_json(r.outbound[0].message.payload) == view_of(r.state));
}

TEST_CASE("manual scroll message")
{
    auto s = ready_session();
    s = apply(s, msg(2, MessageKind::Transcript, transcript_payload({1000, "hello there everyone welcome to the talk"}))).state;
    REQUIRE(s.alignment.sentence_index == 2);
    const auto r = apply(s, msg(3, MessageKind::ManualScroll, scroll_payload(-1)));
    CHECK(r.state.alignment.sentence_index == 1);
    CHECK(r.state.alignment.confidence == 0.0);
    CHECK(r.outbound.size() == 2);
}

TEST_CASE("errors")
{
    auto fresh = make_session("s1");
    CHECK_THROWS_AS(apply(fresh, msg(1, MessageKind::Tap, {}, Role::Controller, "other")), Error);
    try {
        apply(fresh, msg(1, MessageKind::Tap, {}, Role::Controller, "other"));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownSession);
    }

    const auto missing = apply(fresh, msg(1, MessageKind::Tap));
    REQUIRE(missing.outbound.size() == 1);
    CHECK(missing.outbound[0].message.kind == MessageKind::Error);
    CHECK(missing.outbound[0].message.payload["code"] == "PackageMissing");
    CHECK(missing.state.taps_applied == 0);

    auto s = ready_session();
    const auto bad = apply(s, msg(2, MessageKind::GotoSlide, goto_payload(9)));
    CHECK(bad.state.slide_index == 0);
    CHECK(bad.outbound[0].message.payload["code"] == "InvalidMessage");

    const auto junk = apply(s, msg(2, MessageKind::UploadPackage, {{"package", {{"version", "x"}}}}));
    CHECK(junk.outbound[0].message.payload["code"] == "InvalidPackage");
    CHECK(junk.state.package == s.package);
}

TEST_CASE("gaps are buffered and drained in order")
{
    auto s = ready_session();
    auto r = apply(s, msg(4, MessageKind::Swipe, swipe_payload(SwipeDirection::Next)));
    CHECK(r.outbound.empty());
    r = apply(r.state, msg(3, MessageKind::Tap));
    CHECK(r.outbound.empty());
    r = apply(r.state, msg(2, MessageKind::Swipe, swipe_payload(SwipeDirection::Next)));
    CHECK(r.state.applied_seqs[Role::Controller] == 4);
    CHECK(r.state.slide_index == 2);
    REQUIRE(r.outbound.size() == 5);
    CHECK(r.outbound[2].message.kind == MessageKind::Click);
}

TEST_CASE("reorder buffer holds 64 messages")
{
    auto s = ready_session();
    for (std::uint64_t seq = 3; seq < 3 + kReorderBuffer; ++seq) {
        s = apply(s, msg(seq, MessageKind::Tap)).state;
    }
    try {
        apply(s, msg(3 + kReorderBuffer, MessageKind::Tap));
        FAIL("expected OutOfOrderRejected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfOrderRejected);
    }
    const auto r = apply(s, msg(2, MessageKind::Tap));
    CHECK(r.state.taps_applied == kReorderBuffer + 1);
    CHECK(r.state.pending.at(Role::Controller).empty());
}

TEST_CASE("exactly-once under duplicates and reorders")
{
    const auto pkg = testing::make_jitter_scenario(9, 12, 0, 0, 4);
    for (std::uint32_t seed = 0; seed < 40; ++seed) {
        std::mt19937 rng(seed);
        std::vector<SessionMessage> stream;
        stream.push_back(msg(1, MessageKind::UploadPackage,
                             {{"package", json::parse(package_to_json(pkg.package))}}));
        std::size_t ev = 0;
        for (std::uint64_t seq = 2; seq <= 120; ++seq) {
            switch (rng() % 4) {
            case 0: stream.push_back(msg(seq, MessageKind::Tap)); break;
            case 1:
                stream.push_back(msg(seq, MessageKind::Swipe,
                                     swipe_payload(rng() % 2 ? SwipeDirection::Next
                                                             : SwipeDirection::Prev)));
                break;
            default: {
                const auto& e = pkg.events[ev++ % pkg.events.size()];
                stream.push_back(msg(seq, MessageKind::Transcript,
                                     transcript_payload({static_cast<std::int64_t>(seq) * 500, e.text})));
            }
            }
        }
        // Oracle: in-order, exactly once.
        auto expected = make_session("s1");
        std::size_t expected_clicks = 0;
        for (const auto& m : stream) {
            auto r = apply(expected, m);
            expected = r.state;
            expected_clicks += count_kind(r.outbound, MessageKind::Click, Role::Responder);
        }
        // Schedule: local shuffles within blocks of 16 plus random redeliveries.
        std::vector<SessionMessage> schedule;
        for (std::size_t i = 0; i < stream.size(); i += 16) {
            std::vector<SessionMessage> block(stream.begin() + i,
                                              stream.begin() + std::min(stream.size(), i + 16));
            std::shuffle(block.begin(), block.end(), rng);
            for (const auto& m : block) {
                schedule.push_back(m);
                if (rng() % 4 == 0) {
                    schedule.push_back(schedule[rng() % schedule.size()]);
                }
            }
        }
        auto actual = make_session("s1");
        std::size_t clicks = 0;
        for (const auto& m : schedule) {
            auto r = apply(actual, m);
            actual = r.state;
            clicks += count_kind(r.outbound, MessageKind::Click, Role::Responder);
            CHECK(actual.slide_index >= 0);
            CHECK(actual.slide_index < 4);
        }
        CHECK(view_to_json(view_of(actual)).dump() == view_to_json(view_of(expected)).dump());
        CHECK(actual.alignment == expected.alignment);
        CHECK(clicks == expected_clicks);
        CHECK(actual.taps_applied == expected.taps_applied);
    }
}

TEST_CASE("snapshot brings a fresh endpoint level with the server")
{
    auto s = ready_session();
    s = apply(s, msg(2, MessageKind::Swipe, swipe_payload(SwipeDirection::Next))).state;
    s = apply(s, msg(3, MessageKind::Transcript, transcript_payload({2500, "hello there everyone welcome"}))).state;
    const auto snap = snapshot(s);
    CHECK(snap.payload["engine_seq"] == s.engine_seq);
    CHECK(snap.payload["applied_seqs"]["Controller"] == 3);
    CHECK(alignment_from_json(snap.payload["alignment"]) == s.alignment);

    Endpoint fresh(Role::Responder, "s1");
    fresh.receive(from_wire(to_wire(snap)));
    CHECK(view_to_json(fresh.view()).dump() == view_to_json(view_of(s)).dump());
    REQUIRE(fresh.package());
    CHECK(*fresh.package() == small_package());

    // Old messages after the snapshot change nothing.
    auto after = s;
    for (std::uint64_t seq = 1; seq <= 3; ++seq) {
        auto r = apply(after, msg(seq, MessageKind::Tap));
        CHECK(r.outbound.empty());
        after = r.state;
    }
    CHECK(view_of(after) == view_of(s));

    Endpoint controller(Role::Controller, "s1");
    controller.receive(snap);
    CHECK(controller.next_seq() == 4);
}

TEST_CASE("wire format")
{
    const auto m = msg(7, MessageKind::Swipe, swipe_payload(SwipeDirection::Prev));
    const auto line = to_wire(m);
    CHECK(line.find('\n') == std::string::npos);
    const auto j = json::parse(line);
    CHECK(j["seq"] == 7);
    CHECK(j["session_id"] == "s1");
    CHECK(j["sender_role"] == "Controller");
    CHECK(j["kind"] == "Swipe");
    CHECK(j["payload"]["direction"] == "Prev");
    CHECK(from_wire(line) == m);
    CHECK_THROWS_AS(from_wire("{"), Error);
    CHECK_THROWS_AS(from_wire(R"({"seq":1,"session_id":"a","sender_role":"Boss","kind":"Tap"})"), Error);
    CHECK_THROWS_AS(from_wire(R"({"seq":-1,"session_id":"a","sender_role":"Controller","kind":"Tap"})"), Error);
}

TEST_CASE("hub: registration, single controller, upload")
{
    SessionHub hub;
    LoopbackClient c(hub, 0), r(hub, 0), intruder(hub, 0);
    Endpoint ce(Role::Controller, "talk"), re(Role::Responder, "talk"), ie(Role::Controller, "talk");
    c.send(ce.make_register(), 0);
    r.send(re.make_register(), 0);
    CHECK(hub.connected("talk", Role::Controller));
    CHECK(hub.connected("talk", Role::Responder));
    CHECK(c.drain().empty());  // nothing to snapshot yet

    intruder.send(ie.make_register(), 0);
    auto lines = intruder.drain();
    REQUIRE(lines.size() == 1);
    const auto err = from_wire(lines[0]);
    CHECK(err.kind == MessageKind::Error);
    CHECK(err.payload["message"].get<std::string>().find("already has a controller") != std::string::npos);

    c.send(ce.make(MessageKind::UploadPackage, {{"package", json::parse(package_to_json(small_package()))}}), 10);
    for (auto* link : {&c, &r}) {
        auto in = link->drain();
        REQUIRE(in.size() == 1);
        CHECK(from_wire(in[0]).kind == MessageKind::Snapshot);
    }
    c.send(ce.make(MessageKind::Tap), 20);
    CHECK(c.drain().empty());
    auto rin = r.drain();
    REQUIRE(rin.size() == 1);
    CHECK(from_wire(rin[0]).kind == MessageKind::Click);

    // Unregistered connections cannot act on a session.
    LoopbackClient stranger(hub, 0);
    Endpoint se(Role::Responder, "talk");
    stranger.send(se.make(MessageKind::Tap), 30);
    auto sl = stranger.drain();
    REQUIRE(sl.size() == 1);
    CHECK(from_wire(sl[0]).payload["code"] == "UnknownSession");
}

TEST_CASE("hub: heartbeats and silent endpoints")
{
    SessionHub hub;
    LoopbackClient c(hub, 0), r(hub, 0);
    Endpoint ce(Role::Controller, "talk"), re(Role::Responder, "talk");
    c.send(ce.make_register(), 0);
    r.send(re.make_register(), 0);
    for (std::int64_t t = 1000; t <= 20000; t += 1000) {
        hub.tick(t);
        for (const auto& line : c.drain()) {
            if (from_wire(line).kind == MessageKind::Heartbeat) {
                c.send(ce.make_heartbeat(), t);
            }
        }
        r.drain();  // the responder never answers
    }
    CHECK(hub.connected("talk", Role::Controller));
    CHECK_FALSE(hub.connected("talk", Role::Responder));
    r.send(re.make_heartbeat(), 21000);
    CHECK_FALSE(r.open());
}

TEST_CASE("hub: responder reconnects within the window and resumes by snapshot")
{
    SessionHub hub;
    LoopbackClient c(hub, 0);
    auto r = std::make_unique<LoopbackClient>(hub, 0);
    Endpoint ce(Role::Controller, "talk"), re(Role::Responder, "talk");
    c.send(ce.make_register(), 0);
    r->send(re.make_register(), 0);
    c.send(ce.make(MessageKind::UploadPackage, {{"package", json::parse(package_to_json(small_package()))}}), 0);
    c.send(ce.make(MessageKind::Swipe, swipe_payload(SwipeDirection::Next)), 100);
    for (const auto& l : r->drain()) re.receive(from_wire(l));
    r->disconnect(200);
    r.reset();

    c.send(ce.make(MessageKind::Swipe, swipe_payload(SwipeDirection::Next)), 300);
    c.send(ce.make(MessageKind::Transcript, transcript_payload({5000, "hello there everyone"})), 5000);
    c.disconnect(6000);
    hub.tick(30000);
    CHECK(hub.has_session("talk"));

    Endpoint back(Role::Responder, "talk");
    LoopbackClient r2(hub, 50000);
    r2.send(back.make_register(), 50000);
    auto in = r2.drain();
    REQUIRE(in.size() == 1);
    back.receive(from_wire(in[0]));
    CHECK(view_to_json(back.view()).dump() == view_to_json(*hub.view("talk")).dump());
    CHECK(back.view().slide_index == 2);
    CHECK(back.view().sentence_index == 1);
}

TEST_CASE("hub: session expires after the reconnect window")
{
    SessionHub hub;
    {
        LoopbackClient c(hub, 0);
        Endpoint ce(Role::Controller, "talk");
        c.send(ce.make_register(), 0);
        c.send(ce.make(MessageKind::UploadPackage, {{"package", json::parse(package_to_json(small_package()))}}), 0);
        c.disconnect(1000);
    }
    hub.tick(60000);
    CHECK(hub.has_session("talk"));
    hub.tick(61001);
    CHECK_FALSE(hub.has_session("talk"));
}

TEST_CASE("simulation converges with a reconnect and duplicates")
{
    const auto sc = testing::make_jitter_scenario(21, 20, 0.05, 0.0, 4);
    for (std::uint32_t seed : {1u, 2u, 3u}) {
        const auto events = testing::make_sim_script(sc.package, seed, 100);
        const auto r = run_simulation(sc.package, events);
        INFO(format_sim_report(r));
        CHECK(r.converged);
        CHECK(r.clicks == r.unique_taps);
        CHECK(r.unique_taps > 0);
    }
}

TEST_CASE("simulation: swiping past the end stays clamped")
{
    std::vector<SimEvent> events;
    for (int i = 0; i < 10; ++i) {
        events.push_back({i * 100, "swipe", "next", 0});
    }
    const auto r = run_simulation(small_package(), events);
    CHECK(r.converged);
    CHECK(r.server.slide_index == 2);
}

TEST_CASE("simulation: duplicated taps click once each")
{
    const auto events = parse_sim_events("0\ttap\n10\tdup\n20\tdup\n30\ttap\n40\tdup\n50\ttap\n");
    const auto r = run_simulation(small_package(), events);
    CHECK(r.converged);
    CHECK(r.clicks == 3);
    CHECK(std::count(r.responder_log.begin(), r.responder_log.end(), "Click") == 3);
}

TEST_CASE("simulation: controller left disconnected diverges")
{
    const auto events = parse_sim_events("0\tdisconnect\tcontroller\n100\ttap\n");
    const auto r = run_simulation(small_package(), events);
    CHECK_FALSE(r.converged);
}

TEST_CASE("simulation: taps queued while disconnected are delivered once")
{
    const auto events = parse_sim_events(
        "0\tdisconnect\tcontroller\n100\ttap\n200\ttap\n300\tswipe\tnext\n"
        "40000\treconnect\tcontroller\n40100\tdup\n");
    const auto r = run_simulation(small_package(), events);
    CHECK(r.converged);
    CHECK(r.clicks == 2);
    CHECK(r.server.slide_index == 1);
}

TEST_CASE("simulation event parsing")
{
    CHECK(parse_sim_events("# comment\n\n5\tsay\thello world\n").size() == 1);
    auto code_of = [](const char* text) {
        try {
            parse_sim_events(text);
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("line") != std::string::npos);
            return e.code();
        }
        return ErrorCode::InvalidMessage;
    };
    CHECK(code_of("5 tap\n") == ErrorCode::MalformedTranscript);
    CHECK(code_of("x\ttap\n") == ErrorCode::MalformedTranscript);
    CHECK(code_of("5\tjump\n") == ErrorCode::MalformedTranscript);
    CHECK(code_of("5\tswipe\tup\n") == ErrorCode::MalformedTranscript);
    CHECK(code_of("5\ttap\n4\ttap\n") == ErrorCode::MalformedTranscript);
    CHECK(code_of("5\treconnect\tprojector\n") == ErrorCode::MalformedTranscript);
}
