#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "podium/alignment.hpp"
#include "podium/hub.hpp"
#include "podium/pacing.hpp"
#include "podium/simulate.hpp"

namespace podium::cli {

enum Exit : int {
    kOk = 0,
    kInvalidInput = 2,
    kPolishFailed = 3,
    kInvalidPackage = 4,
    kBindFailed = 5,
    kMalformedLine = 6,
    kDiverged = 7,
};

struct PreprocessOptions {
    std::string manuscript;
    std::string factors;  // comma-separated aliases
    bool preset = false;
    double time_limit_s = 300.0;
    double wpm = kDefaultTargetWpm;
    std::string slides_manifest;
    std::string out;
    std::string dsl_out;  // optional: polished markup, one part per slide
    bool mock_llm = false;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = kDefaultPort;
};

struct ReplayOptions {
    std::string package;
    std::string transcript;
    std::optional<double> time_limit_s;
    std::string out;  // empty: stdout
};

struct SimulateOptions {
    std::string package;
    std::string events;
};

int cmd_preprocess(const PreprocessOptions& opt, std::ostream& out, std::ostream& err);
/// Serves until SIGINT/SIGTERM or until *stop becomes true.
int cmd_serve(const ServeOptions& opt, std::ostream& out, std::ostream& err,
              const std::atomic<bool>* stop = nullptr);
int cmd_replay(const ReplayOptions& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);

/// Slides are separated by lines holding only "---".
std::vector<std::string> split_manuscript(std::string_view text);

/// `t_ms<TAB>text` lines, t_ms non-decreasing. Blank lines are skipped.
/// Throws Error{MalformedTranscript} naming the line.
std::vector<TranscriptEvent> parse_transcript(std::string_view text);

/// t_ms, sentence_index, confidence, pace_class, actual_fraction,
/// ideal_fraction; tab-separated, fixed four decimals.
std::string format_trace_line(std::int64_t t_ms, const AlignmentState& state,
                              const PaceReport& pace);

}  // namespace podium::cli
