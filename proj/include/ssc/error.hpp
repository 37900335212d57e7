#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssc {

enum class ErrorCode {
    Lookup,
    DimensionMismatch,
    AnchorMismatch,
    RadiusNonpositive,
    EmptyUnion,
    NotNearlyOpen,
    Precondition,
    Infeasible,
    SchemaViolation,
    UnresolvedRef,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every library failure surfaces as this exception; `code()` is stable and
/// is what the CLI reports.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

    ErrorCode code() const noexcept { return code_; }
    /// what() without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace ssc
