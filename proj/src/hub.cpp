#include "podium/hub.hpp"

#include "podium/error.hpp"

namespace podium {

SessionHub::SessionHub(HubOptions options) : options_(std::move(options))
{
    validate_config(options_.alignment);
}

ConnectionId SessionHub::on_connect(Send send, Close close, std::int64_t now_ms)
{
    std::lock_guard lock(mutex_);
    const auto id = next_id_++;
    connections_.emplace(id, Connection{std::move(send), std::move(close), now_ms, now_ms, {}, {}});
    return id;
}

void SessionHub::on_line(ConnectionId id, std::string_view line, std::int64_t now_ms)
{
    std::lock_guard lock(mutex_);
    const auto it = connections_.find(id);
    if (it == connections_.end()) {
        return;
    }
    auto& conn = it->second;
    conn.last_heard_ms = now_ms;
    SessionMessage msg;
    try {
        msg = from_wire(line);
    } catch (const Error& e) {
        reply_error(conn, conn.session_id, e.code(), e.what());
        return;
    }
    handle(id, conn, msg, now_ms);
}

void SessionHub::handle(ConnectionId id, Connection& conn, const SessionMessage& msg,
                        std::int64_t now_ms)
{
    if (msg.kind == MessageKind::Register) {
        handle_register(id, conn, msg, now_ms);
        return;
    }
    if (msg.kind == MessageKind::Heartbeat) {
        return;
    }
    if (!conn.role || conn.session_id != msg.session_id) {
        reply_error(conn, msg.session_id, ErrorCode::UnknownSession,
                    "connection is not registered for session '" + msg.session_id + "'");
        return;
    }
    if (msg.sender_role != *conn.role) {
        reply_error(conn, msg.session_id, ErrorCode::InvalidMessage,
                    "sender_role does not match the registered role");
        return;
    }
    auto& session = sessions_.at(msg.session_id);
    try {
        auto result = apply(session.state, msg);
        session.state = std::move(result.state);
        deliver(session, result.outbound);
    } catch (const Error& e) {
        reply_error(conn, msg.session_id, e.code(), e.what());
    }
}

void SessionHub::handle_register(ConnectionId id, Connection& conn, const SessionMessage& msg,
                                 std::int64_t now_ms)
{
    std::optional<Role> role;
    if (msg.payload.contains("role") && msg.payload["role"].is_string()) {
        role = role_from_name(msg.payload["role"].get<std::string>());
    }
    if (!role || *role == Role::Engine || *role != msg.sender_role) {
        reply_error(conn, msg.session_id, ErrorCode::InvalidMessage,
                    "Register needs role Controller or Responder matching sender_role");
        return;
    }
    if (msg.session_id.empty()) {
        reply_error(conn, msg.session_id, ErrorCode::InvalidMessage, "empty session_id");
        return;
    }
    if (conn.role) {
        reply_error(conn, msg.session_id, ErrorCode::InvalidMessage,
                    "connection is already registered");
        return;
    }
    auto [it, created] = sessions_.try_emplace(msg.session_id);
    auto& session = it->second;
    if (created) {
        session.state = make_session(msg.session_id, options_.alignment);
        session.state.started_at_ms = now_ms;
    }
    if (const auto taken = session.endpoints.find(*role); taken != session.endpoints.end()) {
        if (*role == Role::Controller) {
            reply_error(conn, msg.session_id, ErrorCode::InvalidMessage,
                        "session '" + msg.session_id + "' already has a controller");
            return;
        }
        // A responder re-registering replaces a stale socket.
        const auto old = taken->second;
        if (auto c = connections_.find(old); c != connections_.end()) {
            c->second.role.reset();
            c->second.close();
        }
    }
    session.endpoints[*role] = id;
    conn.role = role;
    conn.session_id = msg.session_id;
    if (session.state.package) {
        conn.send(to_wire(snapshot(session.state)));
    }
}

void SessionHub::reply_error(Connection& conn, const std::string& session_id, ErrorCode code,
                             const std::string& message)
{
    conn.send(to_wire({0, session_id, Role::Engine, MessageKind::Error,
                       error_payload(code, message)}));
}

void SessionHub::deliver(Session& session, const std::vector<Delivery>& out)
{
    for (const auto& d : out) {
        const auto ep = session.endpoints.find(d.to);
        if (ep == session.endpoints.end()) {
            continue;  // absent endpoint catches up through a snapshot
        }
        if (const auto c = connections_.find(ep->second); c != connections_.end()) {
            c->second.send(to_wire(d.message));
        }
    }
}

void SessionHub::detach(ConnectionId id, std::int64_t now_ms)
{
    const auto it = connections_.find(id);
    if (it == connections_.end()) {
        return;
    }
    const auto& conn = it->second;
    if (conn.role) {
        if (auto s = sessions_.find(conn.session_id); s != sessions_.end()) {
            auto& eps = s->second.endpoints;
            if (auto ep = eps.find(*conn.role); ep != eps.end() && ep->second == id) {
                eps.erase(ep);
            }
            if (eps.empty()) {
                s->second.vacant_since_ms = now_ms;
            }
        }
    }
    connections_.erase(it);
}

void SessionHub::on_disconnect(ConnectionId id, std::int64_t now_ms)
{
    std::lock_guard lock(mutex_);
    detach(id, now_ms);
}

void SessionHub::tick(std::int64_t now_ms)
{
    std::lock_guard lock(mutex_);
    const auto silence_limit = options_.heartbeat_ms * options_.missed_heartbeats;
    std::vector<ConnectionId> dead;
    for (auto& [id, conn] : connections_) {
        if (now_ms - conn.last_heard_ms > silence_limit) {
            dead.push_back(id);
            continue;
        }
        if (now_ms - conn.last_beat_ms >= options_.heartbeat_ms) {
            conn.last_beat_ms = now_ms;
            conn.send(to_wire({0, conn.session_id, Role::Engine, MessageKind::Heartbeat,
                               nlohmann::json::object()}));
        }
    }
    for (auto id : dead) {
        auto close = connections_.at(id).close;
        detach(id, now_ms);
        close();
    }
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        const auto& s = it->second;
        if (s.endpoints.empty() && now_ms - s.vacant_since_ms > options_.reconnect_window_ms) {
            it = sessions_.erase(it);
        } else {
            ++it;
        }
    }
}

std::optional<SessionView> SessionHub::view(const std::string& session_id) const
{
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        return std::nullopt;
    }
    return view_of(it->second.state);
}

std::optional<SessionState> SessionHub::state(const std::string& session_id) const
{
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        return std::nullopt;
    }
    return it->second.state;
}

bool SessionHub::has_session(const std::string& session_id) const
{
    std::lock_guard lock(mutex_);
    return sessions_.contains(session_id);
}

bool SessionHub::connected(const std::string& session_id, Role role) const
{
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(session_id);
    return it != sessions_.end() && it->second.endpoints.contains(role);
}

std::size_t SessionHub::connection_count() const
{
    std::lock_guard lock(mutex_);
    return connections_.size();
}

LoopbackClient::LoopbackClient(SessionHub& hub, std::int64_t now_ms)
    : hub_(hub),
      inbox_(std::make_shared<std::deque<std::string>>()),
      closed_by_hub_(std::make_shared<bool>(false))
{
    auto inbox = inbox_;
    auto closed = closed_by_hub_;
    id_ = hub_.on_connect([inbox](const std::string& line) { inbox->push_back(line); },
                          [closed] { *closed = true; }, now_ms);
}

LoopbackClient::~LoopbackClient()
{
    if (open_ && !*closed_by_hub_) {
        hub_.on_disconnect(id_, 0);
    }
}

void LoopbackClient::send(const SessionMessage& msg, std::int64_t now_ms)
{
    send_line(to_wire(msg), now_ms);
}

void LoopbackClient::send_line(const std::string& line, std::int64_t now_ms)
{
    if (*closed_by_hub_) {
        open_ = false;
    }
    if (!open_) {
        return;
    }
    hub_.on_line(id_, line, now_ms);
}

void LoopbackClient::disconnect(std::int64_t now_ms)
{
    if (open_ && !*closed_by_hub_) {
        hub_.on_disconnect(id_, now_ms);
    }
    open_ = false;
}

std::deque<std::string> LoopbackClient::drain()
{
    std::deque<std::string> out;
    out.swap(*inbox_);
    return out;
}

}  // namespace podium
