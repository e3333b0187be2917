#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "podium/alignment.hpp"
#include "podium/error.hpp"
#include "podium/pacing.hpp"
#include "podium/package.hpp"

namespace podium {

enum class Role { Controller, Responder, Engine };

enum class MessageKind {
    Register,
    UploadPackage,
    Tap,
    Swipe,
    GotoSlide,
    Click,
    StateSync,
    Transcript,
    SnapshotRequest,
    Snapshot,
    Heartbeat,
    ManualScroll,
    Error,
};

enum class SwipeDirection { Next, Prev };

std::string_view role_name(Role r);
std::optional<Role> role_from_name(std::string_view name);
std::string_view kind_name(MessageKind k);
std::optional<MessageKind> kind_from_name(std::string_view name);

inline constexpr std::size_t kReorderBuffer = 64;

struct SessionMessage {
    std::uint64_t seq = 0;
    std::string session_id;
    Role sender_role = Role::Controller;
    MessageKind kind = MessageKind::Heartbeat;
    nlohmann::json payload = nlohmann::json::object();

    friend bool operator==(const SessionMessage&, const SessionMessage&) = default;
};

/// Register and Heartbeat belong to the connection, not the session stream:
/// their seq is not checked.
bool is_connection_message(MessageKind kind);

/// One JSON object, no trailing newline.
std::string to_wire(const SessionMessage& msg);
/// Throws Error{InvalidMessage}.
SessionMessage from_wire(std::string_view line);

// Payload builders.
nlohmann::json register_payload(Role role);
nlohmann::json swipe_payload(SwipeDirection dir);
nlohmann::json goto_payload(int slide_index);
nlohmann::json transcript_payload(const TranscriptEvent& event);
nlohmann::json scroll_payload(long delta);
nlohmann::json error_payload(ErrorCode code, const std::string& message);

nlohmann::json alignment_to_json(const AlignmentState& s);
AlignmentState alignment_from_json(const nlohmann::json& j);
nlohmann::json pace_to_json(const PaceReport& r);
PaceReport pace_from_json(const nlohmann::json& j);

/// What an endpoint displays; equal views serialize to equal bytes.
struct SessionView {
    int slide_index = 0;
    std::size_t sentence_index = 0;
    std::size_t token_offset = 0;
    double confidence = 0.0;
    double elapsed_s = 0.0;
    PaceReport pace;

    friend bool operator==(const SessionView&, const SessionView&) = default;
};

nlohmann::json view_to_json(const SessionView& v);
SessionView view_from_json(const nlohmann::json& j);

struct SessionState {
    std::string session_id;
    std::shared_ptr<const ScriptPackage> package;
    std::shared_ptr<const ScriptIndex> index;  // derived from package
    AlignmentConfig alignment_config;
    int slide_index = 0;
    AlignmentState alignment;
    std::int64_t started_at_ms = 0;  // hub clock when the package arrived
    double elapsed_s = 0.0;          // from the latest transcript event
    PaceReport pace;
    std::map<Role, std::uint64_t> applied_seqs;
    std::map<Role, std::map<std::uint64_t, SessionMessage>> pending;
    std::uint64_t engine_seq = 0;
    std::uint64_t taps_applied = 0;
};

SessionState make_session(std::string session_id, AlignmentConfig config = {});
SessionView view_of(const SessionState& state);

struct Delivery {
    Role to;
    SessionMessage message;
};

struct ApplyResult {
    SessionState state;
    std::vector<Delivery> outbound;
};

/// Applies one message in server order. Duplicates (seq <= high-water
/// mark) change nothing; early arrivals wait in a per-sender buffer of 64.
/// Throws Error{UnknownSession} on a session id mismatch and
/// Error{OutOfOrderRejected} when the buffer is full. A consumed message
/// that cannot take effect (no package yet, bad payload) is answered with
/// an Error message to its sender.
ApplyResult apply(const SessionState& state, const SessionMessage& msg);

/// Full state for reconnecting endpoints. Consumes one engine seq.
SessionMessage snapshot(SessionState& state);

/// Client-side state of a controller or responder.
class Endpoint {
public:
    Endpoint(Role role, std::string session_id);

    /// Next outgoing message, seq assigned.
    SessionMessage make(MessageKind kind, nlohmann::json payload = nlohmann::json::object());
    SessionMessage make_register() const;
    SessionMessage make_heartbeat() const;

    /// Updates the view from an engine message.
    void receive(const SessionMessage& msg);

    Role role() const { return role_; }
    const std::string& session_id() const { return session_id_; }
    const SessionView& view() const { return view_; }
    const std::shared_ptr<const ScriptPackage>& package() const { return package_; }
    std::uint64_t clicks() const { return clicks_; }
    const std::vector<std::string>& log() const { return log_; }
    std::uint64_t next_seq() const { return next_seq_; }

private:
    Role role_;
    std::string session_id_;
    std::uint64_t next_seq_ = 1;
    SessionView view_;
    std::shared_ptr<const ScriptPackage> package_;
    std::uint64_t clicks_ = 0;
    std::vector<std::string> log_;  // Click / GotoSlide / Error lines
};

}  // namespace podium
