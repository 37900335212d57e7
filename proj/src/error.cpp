#include "ssc/error.hpp"

namespace ssc {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Lookup: return "LOOKUP";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::AnchorMismatch: return "ANCHOR_MISMATCH";
    case ErrorCode::RadiusNonpositive: return "RADIUS_NONPOSITIVE";
    case ErrorCode::EmptyUnion: return "EMPTY_UNION";
    case ErrorCode::NotNearlyOpen: return "NOT_NEARLY_OPEN";
    case ErrorCode::Precondition: return "PRECONDITION";
    case ErrorCode::Infeasible: return "INFEASIBLE";
    case ErrorCode::SchemaViolation: return "SCHEMA_VIOLATION";
    case ErrorCode::UnresolvedRef: return "UNRESOLVED_REF";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    }
    return "UNKNOWN";
}

}  // namespace ssc
