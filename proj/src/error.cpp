#include "gsmoment/error.hpp"

namespace gsm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::NotAWeightSequence: return "NotAWeightSequence";
        case ErrorCode::IndexOutOfHorizon: return "IndexOutOfHorizon";
        case ErrorCode::HorizonExceeded: return "HorizonExceeded";
        case ErrorCode::RequiresLogConvexity: return "RequiresLogConvexity";
        case ErrorCode::DepthExceeded: return "DepthExceeded";
        case ErrorCode::UnsupportedAtom: return "UnsupportedAtom";
        case ErrorCode::UnsupportedSupport: return "UnsupportedSupport";
        case ErrorCode::SingularMultiplier: return "SingularMultiplier";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::ConditionRefused: return "ConditionRefused";
        case ErrorCode::TargetTooLarge: return "TargetTooLarge";
        case ErrorCode::ExtrapolationDivergence: return "ExtrapolationDivergence";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace gsm
