#include "podium/simulate.hpp"

#include <deque>
#include <memory>
#include <optional>
#include <sstream>

#include "podium/error.hpp"

namespace podium {

namespace {

constexpr std::int64_t kStepMs = 1000;
constexpr const char* kSessionId = "sim";

[[noreturn]] void malformed(std::size_t line, const std::string& why)
{
    throw Error(ErrorCode::MalformedTranscript, "line " + std::to_string(line) + ": " + why);
}

struct Peer {
    Endpoint endpoint;
    std::unique_ptr<LoopbackClient> link;
    std::deque<SessionMessage> outbox;  // held while disconnected
    std::optional<SessionMessage> last_sent;

    Peer(Role role) : endpoint(role, kSessionId) {}
};

class Simulation {
public:
    Simulation(const ScriptPackage& package, const HubOptions& options)
        : hub_(options), controller_(Role::Controller), responder_(Role::Responder)
    {
        connect(controller_, 0);
        connect(responder_, 0);
        send(controller_,
             controller_.endpoint.make(MessageKind::UploadPackage,
                                       {{"package", nlohmann::json::parse(package_to_json(package))}}),
             0);
        pump(0);
    }

    void run(const SimEvent& e)
    {
        advance(e.t_ms);
        const auto t = now_;
        if (e.action == "tap") {
            issue(MessageKind::Tap, nlohmann::json::object());
            ++unique_taps_;
        } else if (e.action == "swipe") {
            issue(MessageKind::Swipe,
                  swipe_payload(e.arg == "next" ? SwipeDirection::Next : SwipeDirection::Prev));
        } else if (e.action == "goto") {
            issue(MessageKind::GotoSlide, goto_payload(std::stoi(e.arg)));
        } else if (e.action == "say") {
            issue(MessageKind::Transcript, transcript_payload({e.t_ms, e.arg}));
        } else if (e.action == "scroll") {
            issue(MessageKind::ManualScroll, scroll_payload(std::stol(e.arg)));
        } else if (e.action == "dup") {
            if (controller_.last_sent && controller_.link) {
                controller_.link->send(*controller_.last_sent, t);
            }
        } else if (e.action == "disconnect") {
            auto& p = peer(e.arg);
            if (p.link) {
                p.link->disconnect(t);
                p.link.reset();
            }
        } else if (e.action == "reconnect") {
            auto& p = peer(e.arg);
            if (!p.link) {
                connect(p, t);
                send(p, p.endpoint.make(MessageKind::SnapshotRequest), t);
                while (!p.outbox.empty() && p.link) {
                    auto msg = p.outbox.front();
                    p.outbox.pop_front();
                    send(p, msg, t);
                }
            }
        } else if (e.action == "snapshot") {
            auto& p = peer(e.arg);
            send(p, p.endpoint.make(MessageKind::SnapshotRequest), t);
        }
        pump(t);
    }

    SimResult finish()
    {
        advance(now_ + kStepMs);
        SimResult r;
        const auto state = hub_.state(kSessionId);
        r.server = state ? view_of(*state) : SessionView{};
        r.taps_applied = state ? state->taps_applied : 0;
        r.controller = controller_.endpoint.view();
        r.responder = responder_.endpoint.view();
        const auto a = view_to_json(r.server).dump();
        r.views_equal = a == view_to_json(r.controller).dump() &&
                        a == view_to_json(r.responder).dump();
        r.clicks = responder_.endpoint.clicks();
        r.unique_taps = unique_taps_;
        r.converged = r.views_equal && controller_.link && responder_.link &&
                      r.clicks == r.unique_taps && r.taps_applied == r.unique_taps;
        r.responder_log = responder_.endpoint.log();
        r.controller_log = controller_.endpoint.log();
        return r;
    }

private:
    Peer& peer(const std::string& name)
    {
        return name == "responder" ? responder_ : controller_;
    }

    void connect(Peer& p, std::int64_t t)
    {
        p.link = std::make_unique<LoopbackClient>(hub_, t);
        p.link->send(p.endpoint.make_register(), t);
    }

    void send(Peer& p, const SessionMessage& msg, std::int64_t t)
    {
        if (!p.link || !p.link->open()) {
            p.link.reset();
            if (p.outbox.size() < kReorderBuffer) {
                p.outbox.push_back(msg);
            }
            return;
        }
        p.link->send(msg, t);
        p.last_sent = msg;
    }

    void issue(MessageKind kind, nlohmann::json payload)
    {
        send(controller_, controller_.endpoint.make(kind, std::move(payload)), now_);
    }

    // Moves the clock forward in heartbeat-sized steps so live links stay up.
    void advance(std::int64_t t)
    {
        while (now_ + kStepMs < t) {
            now_ += kStepMs;
            hub_.tick(now_);
            pump(now_);
        }
        now_ = std::max(now_, t);
        hub_.tick(now_);
        pump(now_);
    }

    void pump(std::int64_t t)
    {
        bool busy = true;
        while (busy) {
            busy = false;
            for (Peer* p : {&controller_, &responder_}) {
                if (!p->link) {
                    continue;
                }
                for (const auto& line : p->link->drain()) {
                    busy = true;
                    const auto msg = from_wire(line);
                    if (msg.kind == MessageKind::Heartbeat) {
                        p->link->send(p->endpoint.make_heartbeat(), t);
                    } else {
                        p->endpoint.receive(msg);
                    }
                }
                if (!p->link->open()) {
                    p->link.reset();
                }
            }
        }
    }

    SessionHub hub_;
    Peer controller_;
    Peer responder_;
    std::int64_t now_ = 0;
    std::uint64_t unique_taps_ = 0;
};

}  // namespace

std::vector<SimEvent> parse_sim_events(std::string_view text)
{
    std::vector<SimEvent> events;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t n = 0;
    std::int64_t last_t = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        SimEvent e;
        e.line = n;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            malformed(n, "expected t_ms<TAB>action");
        }
        try {
            std::size_t used = 0;
            e.t_ms = std::stoll(line.substr(0, tab), &used);
            if (used != tab || e.t_ms < 0) {
                throw std::invalid_argument("t_ms");
            }
        } catch (const std::exception&) {
            malformed(n, "t_ms is not a non-negative integer");
        }
        if (e.t_ms < last_t) {
            malformed(n, "t_ms decreases");
        }
        last_t = e.t_ms;
        const auto rest = line.substr(tab + 1);
        const auto tab2 = rest.find('\t');
        e.action = rest.substr(0, tab2);
        e.arg = tab2 == std::string::npos ? "" : rest.substr(tab2 + 1);

        const auto& a = e.action;
        auto want = [&](bool ok, const char* what) {
            if (!ok) {
                malformed(n, std::string(a) + ": " + what);
            }
        };
        auto is_int = [](const std::string& s) {
            std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
            return i < s.size() && s.find_first_not_of("0123456789", i) == std::string::npos;
        };
        if (a == "tap" || a == "dup") {
            want(e.arg.empty(), "takes no argument");
        } else if (a == "swipe") {
            want(e.arg == "next" || e.arg == "prev", "argument must be next or prev");
        } else if (a == "goto") {
            want(is_int(e.arg) && e.arg[0] != '-', "argument must be a slide index");
        } else if (a == "scroll") {
            want(is_int(e.arg), "argument must be a signed integer");
        } else if (a == "say") {
            want(!e.arg.empty(), "needs text");
        } else if (a == "disconnect" || a == "reconnect" || a == "snapshot") {
            want(e.arg == "controller" || e.arg == "responder",
                 "argument must be controller or responder");
        } else {
            malformed(n, "unknown action '" + a + "'");
        }
        events.push_back(std::move(e));
    }
    return events;
}

SimResult run_simulation(const ScriptPackage& package, const std::vector<SimEvent>& events,
                         const HubOptions& options)
{
    validate_package(package);
    Simulation sim(package, options);
    for (const auto& e : events) {
        sim.run(e);
    }
    return sim.finish();
}

std::string format_sim_report(const SimResult& r)
{
    std::ostringstream out;
    out << "server:     " << view_to_json(r.server).dump() << "\n";
    out << "controller: " << view_to_json(r.controller).dump() << "\n";
    out << "responder:  " << view_to_json(r.responder).dump() << "\n";
    out << "clicks: " << r.clicks << "  taps: " << r.unique_taps
        << "  applied: " << r.taps_applied << "\n";
    out << (r.converged ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace podium
