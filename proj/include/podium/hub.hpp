#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "podium/session.hpp"

namespace podium {

inline constexpr std::uint16_t kDefaultPort = 7341;

struct HubOptions {
    std::int64_t heartbeat_ms = 5000;
    int missed_heartbeats = 3;
    std::int64_t reconnect_window_ms = 60000;
    AlignmentConfig alignment;
};

using ConnectionId = std::uint64_t;

/// Routes wire lines between connections and sessions. Transport-agnostic:
/// a transport calls on_connect / on_line / on_disconnect and tick, and the
/// hub answers through the callbacks given at connect time. Thread-safe;
/// every session mutation happens under one lock in arrival order.
class SessionHub {
public:
    using Send = std::function<void(const std::string& line)>;
    using Close = std::function<void()>;

    explicit SessionHub(HubOptions options = {});

    ConnectionId on_connect(Send send, Close close, std::int64_t now_ms);
    void on_line(ConnectionId id, std::string_view line, std::int64_t now_ms);
    void on_disconnect(ConnectionId id, std::int64_t now_ms);
    /// Sends due heartbeats, drops silent connections, forgets sessions
    /// whose endpoints stayed away past the reconnect window.
    void tick(std::int64_t now_ms);

    std::optional<SessionView> view(const std::string& session_id) const;
    std::optional<SessionState> state(const std::string& session_id) const;
    bool has_session(const std::string& session_id) const;
    bool connected(const std::string& session_id, Role role) const;
    std::size_t connection_count() const;

private:
    struct Connection {
        Send send;
        Close close;
        std::int64_t last_heard_ms = 0;
        std::int64_t last_beat_ms = 0;
        std::string session_id;
        std::optional<Role> role;
    };

    struct Session {
        SessionState state;
        std::map<Role, ConnectionId> endpoints;
        std::int64_t vacant_since_ms = 0;
    };

    void handle(ConnectionId id, Connection& conn, const SessionMessage& msg, std::int64_t now_ms);
    void handle_register(ConnectionId id, Connection& conn, const SessionMessage& msg,
                         std::int64_t now_ms);
    void reply_error(Connection& conn, const std::string& session_id, ErrorCode code,
                     const std::string& message);
    void deliver(Session& session, const std::vector<Delivery>& out);
    void detach(ConnectionId id, std::int64_t now_ms);

    HubOptions options_;
    mutable std::mutex mutex_;
    ConnectionId next_id_ = 1;
    std::map<ConnectionId, Connection> connections_;
    std::map<std::string, Session> sessions_;
};

/// In-memory transport: each client's inbox is filled synchronously by the
/// hub, so a loopback run is fully deterministic.
class LoopbackClient {
public:
    LoopbackClient(SessionHub& hub, std::int64_t now_ms);
    ~LoopbackClient();
    LoopbackClient(const LoopbackClient&) = delete;
    LoopbackClient& operator=(const LoopbackClient&) = delete;

    void send(const SessionMessage& msg, std::int64_t now_ms);
    void send_line(const std::string& line, std::int64_t now_ms);
    void disconnect(std::int64_t now_ms);

    bool open() const { return open_; }
    /// Removes and returns everything received so far.
    std::deque<std::string> drain();

private:
    SessionHub& hub_;
    ConnectionId id_ = 0;
    bool open_ = true;
    std::shared_ptr<std::deque<std::string>> inbox_;
    std::shared_ptr<bool> closed_by_hub_;
};

}  // namespace podium
