#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "podium/hub.hpp"

namespace podium {

/// One line of a simulation script: `t_ms<TAB>action[<TAB>arg]`.
///
///   tap                      controller taps the viewfinder
///   swipe      next|prev
///   goto       <slide>
///   say        <recognized text>
///   scroll     <+/-sentences>
///   dup                      redeliver the controller's last message as is
///   disconnect controller|responder
///   reconnect  controller|responder
///   snapshot   controller|responder
struct SimEvent {
    std::int64_t t_ms = 0;
    std::string action;
    std::string arg;
    std::size_t line = 0;
};

/// Throws Error{MalformedTranscript} naming the offending line.
std::vector<SimEvent> parse_sim_events(std::string_view text);

struct SimResult {
    SessionView server;
    SessionView controller;
    SessionView responder;
    bool views_equal = false;
    bool converged = false;
    std::uint64_t clicks = 0;        // Click messages the responder received
    std::uint64_t unique_taps = 0;   // distinct Tap messages the controller issued
    std::uint64_t taps_applied = 0;  // taps the server applied
    std::vector<std::string> responder_log;
    std::vector<std::string> controller_log;
};

/// Runs controller, headless responder and server in memory over the
/// loopback transport. The controller uploads the package at t = 0.
SimResult run_simulation(const ScriptPackage& package, const std::vector<SimEvent>& events,
                         const HubOptions& options = {});

/// Human-readable report ending in "PASS" or "FAIL".
std::string format_sim_report(const SimResult& result);

}  // namespace podium
