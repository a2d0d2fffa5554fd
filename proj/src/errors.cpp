#include "ecstel/errors.hpp"

#include <sstream>

namespace ecstel {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument:
            return "invalid_argument";
        case ErrorCode::truncation_insufficient:
            return "truncation_insufficient";
        case ErrorCode::degenerate_state:
            return "degenerate_state";
        case ErrorCode::basis_undefined:
            return "basis_undefined";
        case ErrorCode::critical_case:
            return "critical_case";
        case ErrorCode::unsupported:
            return "unsupported";
        case ErrorCode::resource_limit:
            return "resource_limit";
    }
    return "unknown";
}

namespace {

std::string truncation_message(double deficit, double tolerance) {
    std::ostringstream msg;
    msg << "coherent truncation deficit " << deficit << " exceeds tolerance " << tolerance;
    return msg.str();
}

}  // namespace

TruncationInsufficient::TruncationInsufficient(double deficit, double tolerance)
    : Error(ErrorCode::truncation_insufficient, truncation_message(deficit, tolerance)), deficit_(deficit) {}

}  // namespace ecstel
