#include "podium/session.hpp"

#include <algorithm>
#include <array>

#include "podium/error.hpp"

namespace podium {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Role, std::string_view>, 3> kRoles{{
    {Role::Controller, "Controller"},
    {Role::Responder, "Responder"},
    {Role::Engine, "Engine"},
}};

constexpr std::array<std::pair<MessageKind, std::string_view>, 13> kKinds{{
    {MessageKind::Register, "Register"},
    {MessageKind::UploadPackage, "UploadPackage"},
    {MessageKind::Tap, "Tap"},
    {MessageKind::Swipe, "Swipe"},
    {MessageKind::GotoSlide, "GotoSlide"},
    {MessageKind::Click, "Click"},
    {MessageKind::StateSync, "StateSync"},
    {MessageKind::Transcript, "Transcript"},
    {MessageKind::SnapshotRequest, "SnapshotRequest"},
    {MessageKind::Snapshot, "Snapshot"},
    {MessageKind::Heartbeat, "Heartbeat"},
    {MessageKind::ManualScroll, "ManualScroll"},
    {MessageKind::Error, "Error"},
}};

template <typename Table, typename Key>
std::string_view name_in(const Table& table, Key key)
{
    for (const auto& [k, name] : table) {
        if (k == key) {
            return name;
        }
    }
    return "?";
}

template <typename Key, typename Table>
std::optional<Key> key_in(const Table& table, std::string_view name)
{
    for (const auto& [k, n] : table) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

[[noreturn]] void bad_message(const std::string& why)
{
    throw Error(ErrorCode::InvalidMessage, why);
}

SessionMessage engine_message(SessionState& s, MessageKind kind, json payload)
{
    return {++s.engine_seq, s.session_id, Role::Engine, kind, std::move(payload)};
}

json state_sync_payload(const SessionState& s) { return view_to_json(view_of(s)); }

void broadcast(SessionState& s, MessageKind kind, json payload, std::vector<Delivery>& out)
{
    const auto msg = engine_message(s, kind, std::move(payload));
    out.push_back({Role::Controller, msg});
    out.push_back({Role::Responder, msg});
}

void reject(SessionState& s, Role to, ErrorCode code, const std::string& why,
            std::vector<Delivery>& out)
{
    out.push_back({to, engine_message(s, MessageKind::Error, error_payload(code, why))});
}

void install_package(SessionState& s, ScriptPackage package)
{
    validate_package(package);
    s.package = std::make_shared<const ScriptPackage>(std::move(package));
    s.index = std::make_shared<const ScriptIndex>(*s.package, s.alignment_config);
    s.slide_index = 0;
    s.alignment = {};
    s.elapsed_s = 0.0;
    s.pace = compute_pace(s.alignment, 0.0, s.index->total_tokens(),
                          PaceConfig::from_package(*s.package));
}

// Effect of one in-order message.
void effect(SessionState& s, const SessionMessage& msg, std::vector<Delivery>& out)
{
    const Role from = msg.sender_role;
    if (msg.kind == MessageKind::SnapshotRequest) {
        out.push_back({from, snapshot(s)});
        return;
    }
    if (msg.kind == MessageKind::UploadPackage) {
        try {
            install_package(s, package_from_json(msg.payload.at("package").dump()));
        } catch (const Error& e) {
            reject(s, from, e.code(), e.what(), out);
            return;
        } catch (const json::exception& e) {
            reject(s, from, ErrorCode::InvalidMessage, e.what(), out);
            return;
        }
        const auto snap = snapshot(s);
        out.push_back({Role::Controller, snap});
        out.push_back({Role::Responder, snap});
        return;
    }
    if (!s.package) {
        reject(s, from, ErrorCode::PackageMissing,
               std::string(kind_name(msg.kind)) + " before any package was uploaded", out);
        return;
    }
    const int last_slide = static_cast<int>(s.package->slides.size()) - 1;
    try {
        switch (msg.kind) {
        case MessageKind::Tap:
            ++s.taps_applied;
            out.push_back({Role::Responder, engine_message(s, MessageKind::Click, json::object())});
            return;
        case MessageKind::Swipe: {
            const auto dir = msg.payload.at("direction").get<std::string>();
            if (dir != "Next" && dir != "Prev") {
                bad_message("swipe direction must be Next or Prev");
            }
            s.slide_index = std::clamp(s.slide_index + (dir == "Next" ? 1 : -1), 0, last_slide);
            broadcast(s, MessageKind::GotoSlide, goto_payload(s.slide_index), out);
            return;
        }
        case MessageKind::GotoSlide: {
            const int index = msg.payload.at("index").get<int>();
            if (index < 0 || index > last_slide) {
                bad_message("slide index " + std::to_string(index) + " out of range");
            }
            s.slide_index = index;
            broadcast(s, MessageKind::GotoSlide, goto_payload(s.slide_index), out);
            return;
        }
        case MessageKind::Transcript: {
            const TranscriptEvent event{msg.payload.at("t_ms").get<std::int64_t>(),
                                        msg.payload.at("text").get<std::string>()};
            s.alignment = ingest(s.alignment, event, *s.index, s.alignment_config);
            s.elapsed_s = std::max(s.elapsed_s, static_cast<double>(event.t_ms) / 1000.0);
            s.pace = compute_pace(s.alignment, s.elapsed_s, s.index->total_tokens(),
                                  PaceConfig::from_package(*s.package));
            broadcast(s, MessageKind::StateSync, state_sync_payload(s), out);
            return;
        }
        case MessageKind::ManualScroll:
            s.alignment =
                manual_scroll(s.alignment, msg.payload.at("delta").get<long>(), *s.index);
            broadcast(s, MessageKind::StateSync, state_sync_payload(s), out);
            return;
        default:
            bad_message(std::string(kind_name(msg.kind)) + " is not accepted from " +
                        std::string(role_name(from)));
        }
    } catch (const json::exception& e) {
        reject(s, from, ErrorCode::InvalidMessage,
               std::string(kind_name(msg.kind)) + " payload: " + e.what(), out);
    } catch (const Error& e) {
        reject(s, from, e.code(), e.what(), out);
    }
}

}  // namespace

std::string_view role_name(Role r) { return name_in(kRoles, r); }
std::optional<Role> role_from_name(std::string_view name) { return key_in<Role>(kRoles, name); }
std::string_view kind_name(MessageKind k) { return name_in(kKinds, k); }
std::optional<MessageKind> kind_from_name(std::string_view name)
{
    return key_in<MessageKind>(kKinds, name);
}

bool is_connection_message(MessageKind kind)
{
    return kind == MessageKind::Register || kind == MessageKind::Heartbeat;
}

std::string to_wire(const SessionMessage& msg)
{
    return json{{"seq", msg.seq},
                {"session_id", msg.session_id},
                {"sender_role", role_name(msg.sender_role)},
                {"kind", kind_name(msg.kind)},
                {"payload", msg.payload}}
        .dump();
}

SessionMessage from_wire(std::string_view line)
{
    SessionMessage msg;
    try {
        const auto j = json::parse(line);
        if (!j.at("seq").is_number_unsigned()) {
            bad_message("seq must be a non-negative integer");
        }
        msg.seq = j.at("seq").get<std::uint64_t>();
        msg.session_id = j.at("session_id").get<std::string>();
        const auto role = role_from_name(j.at("sender_role").get<std::string>());
        const auto kind = kind_from_name(j.at("kind").get<std::string>());
        if (!role || !kind) {
            bad_message("unknown sender_role or kind");
        }
        msg.sender_role = *role;
        msg.kind = *kind;
        msg.payload = j.value("payload", json::object());
    } catch (const json::exception& e) {
        bad_message(std::string("malformed envelope: ") + e.what());
    }
    return msg;
}

json register_payload(Role role) { return {{"role", role_name(role)}}; }
json swipe_payload(SwipeDirection dir)
{
    return {{"direction", dir == SwipeDirection::Next ? "Next" : "Prev"}};
}
json goto_payload(int slide_index) { return {{"index", slide_index}}; }
json transcript_payload(const TranscriptEvent& e) { return {{"t_ms", e.t_ms}, {"text", e.text}}; }
json scroll_payload(long delta) { return {{"delta", delta}}; }
json error_payload(ErrorCode code, const std::string& message)
{
    return {{"code", to_string(code)}, {"message", message}};
}

json alignment_to_json(const AlignmentState& s)
{
    json history = json::array();
    for (const auto& h : s.history) {
        history.push_back({h.t_ms, h.sentence_index});
    }
    json query = json::array();
    for (const auto& q : s.query) {
        query.push_back({{"token", q.token},
                         {"sentence", q.sentence == kUnattributed ? json(nullptr)
                                                                  : json(q.sentence)}});
    }
    json heard = json::array();
    for (const auto& h : s.heard_log) {
        heard.push_back({h.t_ms, h.tokens});
    }
    return {{"sentence_index", s.sentence_index},
            {"token_offset", s.token_offset},
            {"confidence", s.confidence},
            {"tokens_heard", s.tokens_heard},
            {"history", history},
            {"query", query},
            {"heard_log", heard}};
}

AlignmentState alignment_from_json(const json& j)
{
    AlignmentState s;
    s.sentence_index = j.at("sentence_index").get<std::size_t>();
    s.token_offset = j.at("token_offset").get<std::size_t>();
    s.confidence = j.at("confidence").get<double>();
    s.tokens_heard = j.at("tokens_heard").get<std::size_t>();
    for (const auto& h : j.at("history")) {
        s.history.push_back({h.at(0).get<std::int64_t>(), h.at(1).get<std::size_t>()});
    }
    for (const auto& q : j.at("query")) {
        const auto& sent = q.at("sentence");
        s.query.push_back({q.at("token").get<std::string>(),
                           sent.is_null() ? kUnattributed : sent.get<std::size_t>()});
    }
    for (const auto& h : j.at("heard_log")) {
        s.heard_log.push_back({h.at(0).get<std::int64_t>(), h.at(1).get<std::size_t>()});
    }
    return s;
}

json pace_to_json(const PaceReport& r)
{
    return {{"actual_fraction", r.actual_fraction},
            {"ideal_fraction", r.ideal_fraction},
            {"recent_wpm", r.recent_wpm},
            {"pace_class", pace_class_name(r.pace_class)},
            {"fade", r.fade}};
}

PaceReport pace_from_json(const json& j)
{
    PaceReport r;
    r.actual_fraction = j.at("actual_fraction").get<double>();
    r.ideal_fraction = j.at("ideal_fraction").get<double>();
    r.recent_wpm = j.at("recent_wpm").get<double>();
    const auto cls = pace_class_from_name(j.at("pace_class").get<std::string>());
    if (!cls) {
        bad_message("unknown pace_class");
    }
    r.pace_class = *cls;
    r.fade = j.at("fade").get<double>();
    return r;
}

json view_to_json(const SessionView& v)
{
    return {{"slide_index", v.slide_index},
            {"sentence_index", v.sentence_index},
            {"token_offset", v.token_offset},
            {"confidence", v.confidence},
            {"elapsed_s", v.elapsed_s},
            {"pace", pace_to_json(v.pace)}};
}

SessionView view_from_json(const json& j)
{
    SessionView v;
    v.slide_index = j.at("slide_index").get<int>();
    v.sentence_index = j.at("sentence_index").get<std::size_t>();
    v.token_offset = j.at("token_offset").get<std::size_t>();
    v.confidence = j.at("confidence").get<double>();
    v.elapsed_s = j.at("elapsed_s").get<double>();
    v.pace = pace_from_json(j.at("pace"));
    return v;
}

SessionState make_session(std::string session_id, AlignmentConfig config)
{
    validate_config(config);
    SessionState s;
    s.session_id = std::move(session_id);
    s.alignment_config = config;
    return s;
}

SessionView view_of(const SessionState& s)
{
    return {s.slide_index,          s.alignment.sentence_index, s.alignment.token_offset,
            s.alignment.confidence, s.elapsed_s,                s.pace};
}

SessionMessage snapshot(SessionState& s)
{
    json seqs = json::object();
    for (const auto& [role, seq] : s.applied_seqs) {
        seqs[std::string(role_name(role))] = seq;
    }
    json payload{{"view", view_to_json(view_of(s))},
                 {"package", s.package ? json::parse(package_to_json(*s.package)) : json(nullptr)},
                 {"alignment", alignment_to_json(s.alignment)},
                 {"applied_seqs", seqs},
                 {"taps_applied", s.taps_applied}};
    auto msg = engine_message(s, MessageKind::Snapshot, std::move(payload));
    msg.payload["engine_seq"] = s.engine_seq;
    return msg;
}

ApplyResult apply(const SessionState& state, const SessionMessage& msg)
{
    if (msg.session_id != state.session_id) {
        throw Error(ErrorCode::UnknownSession, "message for session '" + msg.session_id +
                                                   "' reached session '" + state.session_id +
                                                   "'");
    }
    if (msg.sender_role == Role::Engine) {
        bad_message("engine messages are not accepted by the engine");
    }
    ApplyResult r{state, {}};
    if (is_connection_message(msg.kind)) {
        return r;
    }
    auto& s = r.state;
    auto& hwm = s.applied_seqs[msg.sender_role];
    auto& pending = s.pending[msg.sender_role];
    if (msg.seq <= hwm || pending.contains(msg.seq)) {
        return r;
    }
    if (msg.seq > hwm + 1) {
        if (pending.size() >= kReorderBuffer) {
            throw Error(ErrorCode::OutOfOrderRejected,
                        "seq " + std::to_string(msg.seq) + " from " +
                            std::string(role_name(msg.sender_role)) + " is ahead of " +
                            std::to_string(hwm) + " and the reorder buffer is full");
        }
        pending.emplace(msg.seq, msg);
        return r;
    }
    hwm = msg.seq;
    effect(s, msg, r.outbound);
    while (!pending.empty() && pending.begin()->first == hwm + 1) {
        const auto next = pending.begin()->second;
        pending.erase(pending.begin());
        hwm = next.seq;
        effect(s, next, r.outbound);
    }
    return r;
}

Endpoint::Endpoint(Role role, std::string session_id)
    : role_(role), session_id_(std::move(session_id))
{}

SessionMessage Endpoint::make(MessageKind kind, json payload)
{
    return {next_seq_++, session_id_, role_, kind, std::move(payload)};
}

SessionMessage Endpoint::make_register() const
{
    return {0, session_id_, role_, MessageKind::Register, register_payload(role_)};
}

SessionMessage Endpoint::make_heartbeat() const
{
    return {0, session_id_, role_, MessageKind::Heartbeat, json::object()};
}

void Endpoint::receive(const SessionMessage& msg)
{
    switch (msg.kind) {
    case MessageKind::Click:
        ++clicks_;
        log_.push_back("Click");
        break;
    case MessageKind::GotoSlide:
        view_.slide_index = msg.payload.at("index").get<int>();
        log_.push_back("GotoSlide " + std::to_string(view_.slide_index));
        break;
    case MessageKind::StateSync:
        view_ = view_from_json(msg.payload);
        break;
    case MessageKind::Snapshot: {
        view_ = view_from_json(msg.payload.at("view"));
        const auto& pkg = msg.payload.at("package");
        package_ = pkg.is_null()
                       ? nullptr
                       : std::make_shared<const ScriptPackage>(package_from_json(pkg.dump()));
        const auto& seqs = msg.payload.at("applied_seqs");
        if (const auto it = seqs.find(role_name(role_)); it != seqs.end()) {
            next_seq_ = std::max(next_seq_, it->get<std::uint64_t>() + 1);
        }
        break;
    }
    case MessageKind::Error:
        log_.push_back("Error " + msg.payload.value("code", std::string{}) + ": " +
                       msg.payload.value("message", std::string{}));
        break;
    default:
        break;
    }
}

}  // namespace podium
