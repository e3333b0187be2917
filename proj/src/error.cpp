#include "podium/error.hpp"

namespace podium {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MalformedMarker: return "MalformedMarker";
    case ErrorCode::UnknownPromptPair: return "UnknownPromptPair";
    case ErrorCode::EmptyScript: return "EmptyScript";
    case ErrorCode::NonAlphabetic: return "NonAlphabetic";
    case ErrorCode::InvalidPackage: return "InvalidPackage";
    case ErrorCode::AdapterUnavailable: return "AdapterUnavailable";
    case ErrorCode::UnparsableResponse: return "UnparsableResponse";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::PackageMissing: return "PackageMissing";
    case ErrorCode::OutOfOrderRejected: return "OutOfOrderRejected";
    case ErrorCode::InvalidMessage: return "InvalidMessage";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::MalformedTranscript: return "MalformedTranscript";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    }
    return "Unknown";
}

}  // namespace podium
