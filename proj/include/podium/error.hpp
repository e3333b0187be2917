#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace podium {

enum class ErrorCode {
    MalformedMarker,
    UnknownPromptPair,
    EmptyScript,
    NonAlphabetic,
    InvalidPackage,
    AdapterUnavailable,
    UnparsableResponse,
    UnknownSession,
    PackageMissing,
    OutOfOrderRejected,
    InvalidMessage,
    BindFailure,
    MalformedTranscript,
    InvalidRequest,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the engine. `detail` carries auxiliary data
/// such as the raw adapter response for UnparsableResponse.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail))
    {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace podium
